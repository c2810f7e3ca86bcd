#include "ucw/relaxation.hpp"

#include <algorithm>
#include <cmath>

#include "ucw/error.hpp"

namespace ucw {
namespace {

using Layout = RelaxationLayout;
using Terms = std::vector<std::pair<std::size_t, double>>;

std::size_t q_col(int g, int a) { return Layout::kQ + static_cast<std::size_t>(4 * g + a); }
std::size_t w0_col(int g, int a) { return Layout::kW0 + static_cast<std::size_t>(4 * g + a); }

void build_coordinate_terms(Layout& layout) {
  for (int g = 0; g < 4; ++g) {
    for (int a = 0; a < 4; ++a) {
      const int g0 = ClassicalModel::bit(g, 0);
      const int a0 = ClassicalModel::bit(a, 0);
      const int g1 = ClassicalModel::bit(g, 1);
      const int a1 = ClassicalModel::bit(a, 1);
      layout.coordinate_terms[prob_coord(g0, 0, a0)].push_back({w0_col(g, a), 1.0});
      auto& t1 = layout.coordinate_terms[prob_coord(g1, 1, a1)];
      t1.push_back({q_col(g, a), 1.0});
      t1.push_back({w0_col(g, a), -1.0});
    }
  }
  for (int b = 0; b < 2; ++b) {
    for (int h = 0; h < 4; ++h) {
      const int o = ClassicalModel::bit(h, b);
      layout.coordinate_terms[do_a_coord(o, b)].push_back({Layout::kGamma + static_cast<std::size_t>(h), 1.0});
      layout.coordinate_terms[do_c_coord(o, b)].push_back({Layout::kAlpha + static_cast<std::size_t>(h), 1.0});
    }
  }
}

// Linear form as LP terms plus its constant.
Terms form_terms(const Layout& layout, const LinearForm& f, double scale, double& constant) {
  Terms out;
  for (std::size_t i = 0; i < kCoordinateCount; ++i) {
    const double c = f.coefficient(i).to_double();
    if (c == 0.0) continue;
    for (const auto& [col, v] : layout.coordinate_terms[i]) out.push_back({col, scale * c * v});
  }
  constant = scale * f.offset().to_double();
  return out;
}

double abs_range(const LinearForm& f) {
  double r = std::abs(f.offset().to_double());
  for (std::size_t i = 0; i < kCoordinateCount; ++i) r += std::abs(f.coefficient(i).to_double());
  return r;
}

// Largest value of a nonnegative combination: the observational block and
// each do-conditional column are distributions.
double sqrt_range(const LinearForm& f) {
  auto coef = [&](std::size_t i) { return f.coefficient(i).to_double(); };
  double y = f.offset().to_double();
  double obs = 0.0;
  for (std::size_t i = 0; i < 8; ++i) obs = std::max(obs, coef(i));
  y += obs;
  for (int b = 0; b < 2; ++b) {
    y += std::max(coef(do_a_coord(0, b)), coef(do_a_coord(1, b)));
    y += std::max(coef(do_c_coord(0, b)), coef(do_c_coord(1, b)));
  }
  return y;
}

void add_tangent(LPProblem& lp, const Terms& arg, double arg_const, std::size_t u_col, double y0) {
  // u <= sqrt(y0) + (y - y0) / (2 sqrt(y0))
  const double s = std::sqrt(y0);
  Terms row{{u_col, 1.0}};
  for (const auto& [col, v] : arg) row.push_back({col, -v / (2.0 * s)});
  lp.add_row(row, RowSense::LessEqual, s + (arg_const - y0) / (2.0 * s));
}

}  // namespace

SourceBox SourceBox::point(const ClassicalModel::Source& p_gamma, const ClassicalModel::Source& p_alpha) {
  SourceBox b;
  for (std::size_t i = 0; i < 4; ++i) {
    b.lower[i] = b.upper[i] = p_gamma[i];
    b.lower[4 + i] = b.upper[4 + i] = p_alpha[i];
  }
  return b;
}

bool SourceBox::contains(const ClassicalModel::Source& p_gamma, const ClassicalModel::Source& p_alpha,
                         double slack) const {
  for (std::size_t i = 0; i < 4; ++i) {
    if (p_gamma[i] < lower[i] - slack || p_gamma[i] > upper[i] + slack) return false;
    if (p_alpha[i] < lower[4 + i] - slack || p_alpha[i] > upper[4 + i] + slack) return false;
  }
  return true;
}

bool SourceBox::tighten() {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t s = 0; s < 8; s += 4) {
      double lo_sum = 0.0;
      double hi_sum = 0.0;
      for (std::size_t i = s; i < s + 4; ++i) {
        lo_sum += lower[i];
        hi_sum += upper[i];
      }
      if (lo_sum > 1.0 + 1e-12 || hi_sum < 1.0 - 1e-12) return false;
      for (std::size_t i = s; i < s + 4; ++i) {
        upper[i] = std::min(upper[i], 1.0 - (lo_sum - lower[i]));
        lower[i] = std::max(lower[i], 1.0 - (hi_sum - upper[i]));
      }
    }
  }
  for (std::size_t i = 0; i < 8; ++i) {
    if (lower[i] > upper[i] + 1e-12) return false;
    lower[i] = std::clamp(lower[i], 0.0, 1.0);
    upper[i] = std::clamp(std::max(upper[i], lower[i]), 0.0, 1.0);
  }
  return true;
}

Relaxation relax_node(const FunctionalSpec& spec, const RelaxationNode& node) {
  if (!spec.is_certifiable()) {
    throw ConfigurationError("witness '" + spec.name() + "' has a positive abs coefficient and cannot be certified");
  }
  SourceBox box = node.box;
  if (!box.tighten()) throw InvalidInputError("empty source box");

  Relaxation r;
  Layout& layout = r.layout;
  build_coordinate_terms(layout);
  layout.abs_begin = Layout::kLifted;
  layout.sqrt_begin = layout.abs_begin + spec.abs_terms().size();
  layout.variables = layout.sqrt_begin + spec.sqrt_terms().size();
  LPProblem& lp = r.lp = LPProblem(layout.variables);

  for (std::size_t i = 0; i < 8; ++i) lp.set_bounds(i, box.lower[i], box.upper[i]);
  lp.add_row(Terms{{0, 1}, {1, 1}, {2, 1}, {3, 1}}, RowSense::Equal, 1.0);
  lp.add_row(Terms{{4, 1}, {5, 1}, {6, 1}, {7, 1}}, RowSense::Equal, 1.0);

  for (int g = 0; g < 4; ++g) {
    for (int a = 0; a < 4; ++a) {
      const std::size_t gc = Layout::kGamma + static_cast<std::size_t>(g);
      const std::size_t ac = Layout::kAlpha + static_cast<std::size_t>(a);
      const double gl = box.lower[gc], gu = box.upper[gc];
      const double al = box.lower[ac], au = box.upper[ac];
      const std::size_t q = q_col(g, a);
      lp.set_bounds(q, gl * al, gu * au);
      // McCormick envelope of q = pg * pa.
      lp.add_row(Terms{{q, 1}, {gc, -al}, {ac, -gl}}, RowSense::GreaterEqual, -gl * al);
      lp.add_row(Terms{{q, 1}, {gc, -au}, {ac, -gu}}, RowSense::GreaterEqual, -gu * au);
      lp.add_row(Terms{{q, 1}, {gc, -al}, {ac, -gu}}, RowSense::LessEqual, -gu * al);
      lp.add_row(Terms{{q, 1}, {gc, -au}, {ac, -gl}}, RowSense::LessEqual, -gl * au);
      // 0 <= w0 <= q
      lp.set_bounds(w0_col(g, a), 0.0, gu * au);
      lp.add_row(Terms{{w0_col(g, a), 1}, {q, -1}}, RowSense::LessEqual, 0.0);
    }
  }
  // Marginals of the product: sum_alpha q = p_gamma, sum_gamma q = p_alpha.
  for (int h = 0; h < 4; ++h) {
    Terms rg{{Layout::kGamma + static_cast<std::size_t>(h), -1.0}};
    Terms ra{{Layout::kAlpha + static_cast<std::size_t>(h), -1.0}};
    for (int k = 0; k < 4; ++k) {
      rg.push_back({q_col(h, k), 1.0});
      ra.push_back({q_col(k, h), 1.0});
    }
    lp.add_row(rg, RowSense::Equal, 0.0);
    lp.add_row(ra, RowSense::Equal, 0.0);
  }

  for (std::size_t m = 0; m < spec.abs_terms().size(); ++m) {
    const auto& term = spec.abs_terms()[m];
    const std::size_t t = layout.abs_begin + m;
    double k = 0.0;
    const Terms f = form_terms(layout, term.form, 1.0, k);
    lp.set_bounds(t, 0.0, abs_range(term.form));
    Terms up{{t, -1.0}};
    Terms dn{{t, -1.0}};
    for (const auto& [col, v] : f) {
      up.push_back({col, v});
      dn.push_back({col, -v});
    }
    lp.add_row(up, RowSense::LessEqual, -k);  // x - t <= 0
    lp.add_row(dn, RowSense::LessEqual, k);   // -x - t <= 0
    lp.set_objective(t, term.coefficient.to_double());
  }

  for (std::size_t k = 0; k < spec.sqrt_terms().size(); ++k) {
    const auto& term = spec.sqrt_terms()[k];
    const std::size_t u = layout.sqrt_begin + k;
    const double ymax = sqrt_range(term.form);
    r.sqrt_arg_max.push_back(ymax);
    lp.set_bounds(u, 0.0, std::sqrt(ymax));
    lp.set_objective(u, term.coefficient.to_double());
    if (ymax <= 0.0) continue;
    double c = 0.0;
    const Terms f = form_terms(layout, term.form, 1.0, c);
    for (double frac : kFixedTangents) add_tangent(lp, f, c, u, frac * ymax);
    if (k < node.extra_cuts.size()) {
      for (double y0 : node.extra_cuts[k]) add_tangent(lp, f, c, u, std::max(y0, 1e-12));
    }
  }

  for (const auto& term : spec.linear_terms()) {
    double k = 0.0;
    const Terms f = form_terms(layout, term.form, term.coefficient.to_double(), k);
    for (const auto& [col, v] : f) lp.set_objective(col, lp.objective()[col] + v);
    r.objective_offset += k;
  }
  return r;
}

double sqrt_argument(const FunctionalSpec& spec, const Relaxation& r, std::size_t k, const std::vector<double>& x) {
  const LinearForm& f = spec.sqrt_terms()[k].form;
  double y = f.offset().to_double();
  for (std::size_t i = 0; i < kCoordinateCount; ++i) {
    const double c = f.coefficient(i).to_double();
    if (c == 0.0) continue;
    for (const auto& [col, v] : r.layout.coordinate_terms[i]) y += c * v * x[col];
  }
  return y;
}

namespace {

NodeSolution solve_node_impl(const FunctionalSpec& spec, RelaxationNode node, double cut_tolerance,
                             std::size_t max_cuts) {
  NodeSolution out;
  node.extra_cuts.resize(spec.sqrt_terms().size());
  if (!node.box.tighten()) return out;
  for (;;) {
    const Relaxation r = relax_node(spec, node);
    const LPResult res = solve_lp(r.lp);
    ++out.rounds;
    out.status = res.status;
    if (res.status != LPStatus::Optimal) {
      if (res.status == LPStatus::Unbounded) throw SolverError("node relaxation is unbounded");
      return out;
    }
    out.upper_bound = res.dual_bound + r.objective_offset;
    out.x = res.x;
    out.extra_cuts = node.extra_cuts;

    bool added = false;
    for (std::size_t k = 0; k < spec.sqrt_terms().size(); ++k) {
      const double y = std::max(sqrt_argument(spec, r, k, res.x), 0.0);
      const double u = res.x[r.layout.sqrt_begin + k];
      auto& cuts = node.extra_cuts[k];
      if (u - std::sqrt(y) <= cut_tolerance) continue;
      if (cuts.size() + kFixedTangents.size() >= max_cuts) {
        // Keep the pool bounded: drop the oldest dynamic cut.
        if (cuts.empty()) continue;
        cuts.erase(cuts.begin());
      }
      cuts.push_back(std::max(y, 1e-12));
      added = true;
    }
    if (!added || out.rounds >= 64) return out;
  }
}

}  // namespace

NodeSolution solve_node(const FunctionalSpec& spec, RelaxationNode node, double cut_tolerance) {
  return solve_node_impl(spec, std::move(node), cut_tolerance, kMaxCutsPerTerm);
}

ClassicalModel model_from_solution(const std::vector<double>& x) {
  ClassicalModel::Source g{}, a{};
  double gs = 0.0, as = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    g[i] = std::max(x[Layout::kGamma + i], 0.0);
    a[i] = std::max(x[Layout::kAlpha + i], 0.0);
    gs += g[i];
    as += a[i];
  }
  for (std::size_t i = 0; i < 4; ++i) {
    g[i] /= gs;
    a[i] /= as;
  }
  ClassicalModel::Response resp{};
  for (std::size_t i = 0; i < 16; ++i) {
    const double q = x[Layout::kQ + i];
    resp[i] = q > 1e-14 ? std::clamp(x[Layout::kW0 + i] / q, 0.0, 1.0) : 0.0;
  }
  return ClassicalModel(g, a, resp);
}

BestResponse best_response(const FunctionalSpec& spec, const ClassicalModel::Source& p_gamma,
                           const ClassicalModel::Source& p_alpha, std::vector<std::vector<double>>* warm_cuts) {
  // Columns: w0 (16), then abs epigraphs, then sqrt surrogates. Every
  // coordinate is a constant plus a combination of w0.
  std::array<double, 16> q{};
  for (std::size_t i = 0; i < 16; ++i) q[i] = p_gamma[i / 4] * p_alpha[i % 4];
  std::array<double, kCoordinateCount> base{};
  std::array<std::vector<std::pair<std::size_t, double>>, kCoordinateCount> terms;
  for (int g = 0; g < 4; ++g) {
    for (int a = 0; a < 4; ++a) {
      const std::size_t i = static_cast<std::size_t>(4 * g + a);
      terms[prob_coord(ClassicalModel::bit(g, 0), 0, ClassicalModel::bit(a, 0))].push_back({i, 1.0});
      const std::size_t c1 = prob_coord(ClassicalModel::bit(g, 1), 1, ClassicalModel::bit(a, 1));
      base[c1] += q[i];
      terms[c1].push_back({i, -1.0});
    }
  }
  for (int b = 0; b < 2; ++b) {
    for (int h = 0; h < 4; ++h) {
      base[do_a_coord(ClassicalModel::bit(h, b), b)] += p_gamma[static_cast<std::size_t>(h)];
      base[do_c_coord(ClassicalModel::bit(h, b), b)] += p_alpha[static_cast<std::size_t>(h)];
    }
  }
  auto lin = [&](const LinearForm& f, double& k) {
    Terms out;
    k = f.offset().to_double();
    for (std::size_t i = 0; i < kCoordinateCount; ++i) {
      const double c = f.coefficient(i).to_double();
      if (c == 0.0) continue;
      k += c * base[i];
      for (const auto& [col, v] : terms[i]) out.push_back({col, c * v});
    }
    return out;
  };

  const std::size_t n_abs = spec.abs_terms().size();
  const std::size_t n_sqrt = spec.sqrt_terms().size();
  const std::size_t abs0 = 16;
  const std::size_t sqrt0 = abs0 + n_abs;
  std::vector<std::vector<double>> cuts(n_sqrt);
  if (warm_cuts) {
    for (std::size_t k = 0; k < std::min(n_sqrt, warm_cuts->size()); ++k) cuts[k] = (*warm_cuts)[k];
  }

  std::vector<double> x;
  for (int round = 0; round < 64; ++round) {
    LPProblem lp(sqrt0 + n_sqrt);
    for (std::size_t i = 0; i < 16; ++i) lp.set_bounds(i, 0.0, q[i]);
    for (std::size_t m = 0; m < n_abs; ++m) {
      const auto& term = spec.abs_terms()[m];
      double k = 0.0;
      const Terms f = lin(term.form, k);
      const std::size_t t = abs0 + m;
      lp.set_bounds(t, 0.0, abs_range(term.form) + std::abs(k));
      Terms up{{t, -1.0}}, dn{{t, -1.0}};
      for (const auto& [col, v] : f) {
        up.push_back({col, v});
        dn.push_back({col, -v});
      }
      lp.add_row(up, RowSense::LessEqual, -k);
      lp.add_row(dn, RowSense::LessEqual, k);
      lp.set_objective(t, term.coefficient.to_double());
    }
    for (std::size_t k = 0; k < n_sqrt; ++k) {
      const auto& term = spec.sqrt_terms()[k];
      const double ymax = sqrt_range(term.form);
      const std::size_t u = sqrt0 + k;
      lp.set_bounds(u, 0.0, std::sqrt(std::max(ymax, 0.0)));
      lp.set_objective(u, term.coefficient.to_double());
      if (ymax <= 0.0) continue;
      double c = 0.0;
      const Terms f = lin(term.form, c);
      for (double frac : kFixedTangents) add_tangent(lp, f, c, u, frac * ymax);
      for (double y0 : cuts[k]) add_tangent(lp, f, c, u, std::max(y0, 1e-12));
    }
    for (const auto& term : spec.linear_terms()) {
      double k = 0.0;
      for (const auto& [col, v] : lin(term.form, k)) {
        lp.set_objective(col, lp.objective()[col] + term.coefficient.to_double() * v);
      }
    }
    const LPResult res = solve_lp(lp);
    if (res.status != LPStatus::Optimal) throw SolverError("best response LP failed: " + to_string(res.status));
    x = res.x;

    bool added = false;
    for (std::size_t k = 0; k < n_sqrt; ++k) {
      double y = 0.0;
      const Terms f = lin(spec.sqrt_terms()[k].form, y);
      for (const auto& [col, v] : f) y += v * x[col];
      y = std::max(y, 0.0);
      if (x[sqrt0 + k] - std::sqrt(y) > 1e-9) {
        cuts[k].push_back(std::max(y, 1e-12));
        added = true;
      }
    }
    if (!added) break;
  }

  ClassicalModel::Response resp{};
  for (std::size_t i = 0; i < 16; ++i) resp[i] = q[i] > 1e-14 ? std::clamp(x[i] / q[i], 0.0, 1.0) : 0.0;
  if (warm_cuts) {
    for (auto& c : cuts) {
      if (c.size() > 8) c.erase(c.begin(), c.end() - 8);
    }
    *warm_cuts = std::move(cuts);
  }
  ClassicalModel m(p_gamma, p_alpha, resp);
  const double v = evaluate_model(spec, m);
  return {std::move(m), v};
}

Coordinates raw_coordinates(const ClassicalModel::Source& p_gamma, const ClassicalModel::Source& p_alpha,
                            const ClassicalModel::Response& p_b0) {
  Coordinates x{};
  for (int g = 0; g < 4; ++g) {
    for (int a = 0; a < 4; ++a) {
      const std::size_t i = static_cast<std::size_t>(4 * g + a);
      const double q = p_gamma[static_cast<std::size_t>(g)] * p_alpha[static_cast<std::size_t>(a)];
      x[prob_coord(ClassicalModel::bit(g, 0), 0, ClassicalModel::bit(a, 0))] += q * p_b0[i];
      x[prob_coord(ClassicalModel::bit(g, 1), 1, ClassicalModel::bit(a, 1))] += q * (1.0 - p_b0[i]);
    }
  }
  for (int b = 0; b < 2; ++b) {
    for (int h = 0; h < 4; ++h) {
      x[do_a_coord(ClassicalModel::bit(h, b), b)] += p_gamma[static_cast<std::size_t>(h)];
      x[do_c_coord(ClassicalModel::bit(h, b), b)] += p_alpha[static_cast<std::size_t>(h)];
    }
  }
  return x;
}

Coordinates model_coordinates(const ClassicalModel& m) {
  return make_coordinates(classical_behavior(m), classical_do_data(m));
}

double evaluate_model(const FunctionalSpec& spec, const ClassicalModel& m) {
  return evaluate_coordinates(spec, model_coordinates(m));
}

}  // namespace ucw
