// One line per acceptance criterion. Exit status is the number of failed
// criteria (capped at 1), so ctest reports the run red when any fails.
//
// UCW_CERT_SECONDS overrides the per-witness certification budget
// (default 1800 s).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "oracles.hpp"
#include "ucw/branch_and_bound.hpp"
#include "ucw/local_search.hpp"
#include "ucw/quantum.hpp"

using namespace ucw;
using namespace ucw::testing;

namespace {

constexpr double kPi = std::numbers::pi;

int failures = 0;

void report(int n, bool ok, const std::string& detail, double seconds) {
  std::printf("criterion %d: %s  %s (%.1f s)\n", n, ok ? "PASS" : "FAIL", detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class F>
void run(int n, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  report(n, ok, detail.str(), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

bool within(double x, double want, double tol) { return std::abs(x - want) <= tol; }

bool born_oracle(std::ostream& out) {
  double worst = 0.0;
  double worst_pb = 0.0;
  for (int k = 0; k < 32; ++k) {
    const double t = kPi / 2 * k / 31.0;
    const Behavior p = born_behavior(swapping_strategy(t));
    worst = std::max(worst, p.max_abs_diff(family_behavior(t)));
    worst_pb = std::max(worst_pb, std::abs(p.marginal_b(0) - 0.25));
  }
  out << "max |born - closed form| = " << worst << ", max |P(b=0) - 1/4| = " << worst_pb;
  return worst < 1e-12 && worst_pb < 1e-12;
}

bool observational(std::ostream& out) {
  const double v = evaluate(builtin("I"), born_behavior(swapping_strategy(kPi / 8))).value;
  out.precision(9);
  out << "I = " << v << " (want 2.69238 +- 1e-4, > " << kStoredBoundI << ")";
  return within(v, 2.69238, 1e-4) && v > kStoredBoundI;
}

bool interventional(std::ostream& out) {
  const QuantumStrategy s = swapping_strategy(kPi / 8);
  const double v = evaluate(builtin("F"), born_behavior(s), born_do_data(s)).value;
  out.precision(9);
  out << "F = " << v << " (want 3.15432 +- 1e-4, > " << kStoredBoundF << ")";
  return within(v, 3.15432, 1e-4) && v > kStoredBoundF;
}

bool maximizers(std::ostream& out) {
  const ThetaOptimum i = maximize_over_theta(WitnessKind::I, 1.0);
  const ThetaOptimum f = maximize_over_theta(WitnessKind::F, 1.0);
  out.precision(7);
  out << "theta_I = " << i.theta << " I = " << i.value << ", theta_F = " << f.theta << " F = " << f.value;
  return within(i.theta, std::atan(0.4), 1e-4) && within(i.value, 2.69258, 1e-4) &&
         within(f.theta, std::atan(1.0 / 3), 1e-4) && within(f.value, 3.16228, 1e-4);
}

bool critical_visibilities(std::ostream& out) {
  const auto vi = critical_visibility(WitnessKind::I, kStoredBoundI);
  const auto vf = critical_visibility(WitnessKind::F, kStoredBoundF);
  out.precision(7);
  out << "v_I = " << vi.value_or(NAN) << " (want 0.98873), v_F = " << vf.value_or(NAN) << " (want 0.87743)";
  return vi && vf && within(*vi, 0.98873, 1e-4) && within(*vf, 0.87743, 1e-4);
}

bool fixtures(std::ostream& out) {
  const ClassicalModel mi = fixture("I-optimal").model;
  const ClassicalModel mf = fixture("F-optimal").model;
  const double i = evaluate(builtin("I"), classical_behavior(mi)).value;
  const double f = evaluate(builtin("F"), classical_behavior(mf), classical_do_data(mf)).value;
  out.precision(7);
  out << "I(I-optimal) = " << i << " (want 2.56226), F(F-optimal) = " << f << " (want 3.00001)";
  return within(i, 2.56226, 1e-4) && within(f, 3.00001, 1e-4);
}

bool lower_bounds(std::ostream& out) {
  LocalSearchOptions o;
  o.starts = 200;
  const double i = local_search(builtin("I"), o).value;
  const double f = local_search(builtin("F"), o).value;
  out.precision(7);
  out << "I >= " << i << ", F >= " << f;
  return i >= 2.5622 && f >= 3.0000;
}

double cert_budget() {
  const char* env = std::getenv("UCW_CERT_SECONDS");
  return env ? std::atof(env) : 1800.0;
}

// Runs B&B with per-node soundness sampling; true when the bracket holds
// the reference value and either converged within 1.1e-3 or stopped early
// with every sampled node sound.
bool certify_one(const char* name, double reference, std::ostream& out) {
  const FunctionalSpec spec = builtin(name);
  std::mutex mu;
  std::mt19937_64 rng(99);
  double unsound = -kInfinity;
  BranchAndBoundOptions o;
  o.gap = 1e-3;
  o.node_cap = 1'000'000;
  o.time_limit_seconds = cert_budget();
  o.node_observer = [&](const RelaxationNode& node, const NodeSolution& s) {
    if (s.status != LPStatus::Optimal) return;
    std::lock_guard<std::mutex> lock(mu);
    for (int k = 0; k < 10; ++k) {
      const auto g = sample_in_box(node.box, 0, rng);
      const auto a = sample_in_box(node.box, 4, rng);
      if (!g || !a) break;
      unsound = std::max(unsound, evaluate_model(spec, ClassicalModel(*g, *a, random_response(rng))) - s.upper_bound);
    }
  };
  const BoundCertificate c = branch_and_bound(spec, o);
  const bool contains = c.lower <= reference && reference <= c.upper;
  const bool sound = unsound <= 1e-9;
  out.precision(7);
  out << name << " [" << c.lower << ", " << c.upper << "] " << (c.converged ? "converged" : "non-converged (" + c.termination + ")")
      << " after " << c.nodes << " nodes, holds " << reference << ": " << (contains ? "yes" : "no")
      << ", sampled soundness " << (sound ? "ok" : "VIOLATED") << "; ";
  if (!contains || !sound) return false;
  return c.converged ? c.upper - c.lower <= 1.1e-3 : true;
}

bool certified(std::ostream& out) {
  const bool i = certify_one("I", kStoredBoundI, out);
  const bool f = certify_one("F", kStoredBoundF, out);
  return i && f;
}

bool property_suites(std::ostream& out) {
  std::mt19937_64 rng(2024);
  bool ok = true;

  double roundtrip = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Behavior p = random_behavior(rng);
    roundtrip = std::max(roundtrip, from_correlators(to_correlators(p)).max_abs_diff(p));
  }
  ok = ok && roundtrip <= 1e-14;
  out << "roundtrip " << roundtrip;

  double lp_err = 0.0;
  bool lp_status = true;
  for (int k = 0; k < 100; ++k) {
    const RandomLP inst = random_lp(rng);
    const auto want = enumerate_vertices(inst.objective, inst.constraints, inst.lower, inst.upper);
    const LPResult r = solve_lp(inst.problem);
    if (want) {
      lp_status = lp_status && r.status == LPStatus::Optimal;
      if (r.status == LPStatus::Optimal) lp_err = std::max(lp_err, std::abs(r.value - *want));
    } else {
      lp_status = lp_status && r.status == LPStatus::Infeasible;
    }
  }
  ok = ok && lp_status && lp_err <= 1e-8;
  out << ", LP vs vertices " << lp_err << (lp_status ? "" : " (status mismatch)");

  // McCormick and tangent rows checked at exact lifted points of models
  // inside random boxes.
  double relax_violation = 0.0;
  for (const char* name : {"I", "F"}) {
    const FunctionalSpec spec = builtin(name);
    for (int k = 0; k < 100; ++k) {
      const ClassicalModel centre = sample_random_model(static_cast<std::uint64_t>(k));
      RelaxationNode node;
      std::uniform_real_distribution<double> u(0.0, 0.3);
      for (int i = 0; i < 4; ++i) {
        node.box.lower[i] = std::max(0.0, centre.p_gamma()[i] - u(rng));
        node.box.upper[i] = std::min(1.0, centre.p_gamma()[i] + u(rng));
        node.box.lower[4 + i] = std::max(0.0, centre.p_alpha()[i] - u(rng));
        node.box.upper[4 + i] = std::min(1.0, centre.p_alpha()[i] + u(rng));
      }
      const Relaxation r = relax_node(spec, node);
      for (int s = 0; s < 10; ++s) {
        const auto g = sample_in_box(node.box, 0, rng);
        const auto a = sample_in_box(node.box, 4, rng);
        const ClassicalModel m(*g, *a, random_response(rng));
        relax_violation = std::max(relax_violation, max_violation(r.lp, lifted_point(spec, r, m)));
      }
    }
  }
  double tangent = -kInfinity;
  for (double y0 : kFixedTangents) {
    for (int i = 0; i <= 1000; ++i) {
      const double y = i / 1000.0;
      tangent = std::max(tangent, std::sqrt(y) - (std::sqrt(y0) + (y - y0) / (2 * std::sqrt(y0))));
    }
  }
  ok = ok && relax_violation <= 1e-12 && tangent <= 1e-15;
  out << ", relaxation rows at lifted points " << relax_violation << ", tangent excess " << tangent;

  double concavity = -kInfinity;
  for (const char* name : {"I", "F"}) {
    const FunctionalSpec spec = builtin(name);
    for (int k = 0; k < 1000; ++k) {
      const Coordinates x = make_coordinates(random_behavior(rng), random_do(rng));
      const Coordinates y = make_coordinates(random_behavior(rng), random_do(rng));
      for (double l : {0.25, 0.5, 0.75}) {
        Coordinates z{};
        for (std::size_t i = 0; i < kCoordinateCount; ++i) z[i] = l * x[i] + (1 - l) * y[i];
        concavity = std::max(concavity, l * evaluate_coordinates(spec, x) + (1 - l) * evaluate_coordinates(spec, y) -
                                            evaluate_coordinates(spec, z));
      }
    }
  }
  ok = ok && concavity <= 1e-10;
  out << ", concavity excess " << concavity;

  double factorization = 0.0;
  double worst_i = -kInfinity;
  double worst_f = -kInfinity;
  const FunctionalSpec fi = builtin("I");
  const FunctionalSpec ff = builtin("F");
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const ClassicalModel m = sample_random_model(seed);
    const DoData d = classical_do_data(m);
    for (int b = 0; b < 2; ++b) {
      for (int a = 0; a < 2; ++a) {
        for (int c = 0; c < 2; ++c) {
          double joint = 0.0;
          for (int g = 0; g < 4; ++g) {
            for (int al = 0; al < 4; ++al) {
              if (ClassicalModel::bit(g, b) == a && ClassicalModel::bit(al, b) == c) {
                joint += m.p_gamma()[g] * m.p_alpha()[al];
              }
            }
          }
          factorization = std::max(factorization, std::abs(joint - d.a_given_do(a, b) * d.c_given_do(c, b)));
        }
      }
    }
    const Behavior p = classical_behavior(m);
    worst_i = std::max(worst_i, evaluate(fi, p).value);
    worst_f = std::max(worst_f, evaluate(ff, p, d).value);
  }
  ok = ok && factorization <= 1e-15 && worst_i <= kStoredBoundI + 1e-9 && worst_f <= kStoredBoundF + 1e-9;
  out.precision(7);
  out << ", do-factorization " << factorization << ", max sampled I " << worst_i << ", F " << worst_f;
  return ok;
}

bool subspace_data(std::ostream& out) {
  double curve = 0.0;
  cli::SubspaceConfig c;
  c.grid = 41;
  for (const auto& r : cli::subspace(c)) {
    if (r.kind == "curve") curve = std::max(curve, std::abs(16 * (r.r * r.r + r.s * r.s) - 1.0));
  }
  const auto hot = cli::classify_subspace_point(std::sin(kPi / 4) / 4, std::cos(kPi / 4) / 4, kStoredBoundI, kStoredBoundF);
  const auto origin = cli::classify_subspace_point(0.0, 0.0, kStoredBoundI, kStoredBoundF);
  out << "curve deviation " << curve << ", (sin(pi/4)/4, cos(pi/4)/4) " << hot.classification << ", (0,0) "
      << origin.classification;
  return curve <= 1e-12 && hot.classification == "I-violating" && origin.classification == "classical-satisfying";
}

}  // namespace

int main() {
  ::unsetenv("UCW_CACHE_DIR");
  run(1, born_oracle);
  run(2, observational);
  run(3, interventional);
  run(4, maximizers);
  run(5, critical_visibilities);
  run(6, fixtures);
  run(7, lower_bounds);
  run(9, property_suites);
  run(10, subspace_data);
  run(8, certified);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
