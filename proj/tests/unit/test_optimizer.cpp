#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>

#include "doctest.h"
#include "ucw/branch_and_bound.hpp"
#include "ucw/error.hpp"
#include "ucw/json_io.hpp"
#include "ucw/local_search.hpp"
#include "ucw/relaxation.hpp"
#include "ucw/witness_parser.hpp"
#include "oracles.hpp"

using namespace ucw;
using namespace ucw::testing;

namespace {

SourceBox random_box_around(const ClassicalModel& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 0.3);
  SourceBox box;
  for (int i = 0; i < 4; ++i) {
    box.lower[i] = std::max(0.0, m.p_gamma()[i] - u(rng));
    box.upper[i] = std::min(1.0, m.p_gamma()[i] + u(rng));
    box.lower[4 + i] = std::max(0.0, m.p_alpha()[i] - u(rng));
    box.upper[4 + i] = std::min(1.0, m.p_alpha()[i] + u(rng));
  }
  return box;
}

}  // namespace

TEST_CASE("tangent cuts overestimate sqrt on [0,1]") {
  for (double y0 : kFixedTangents) {
    for (int i = 0; i <= 1000; ++i) {
      const double y = i / 1000.0;
      CHECK(std::sqrt(y) <= std::sqrt(y0) + (y - y0) / (2 * std::sqrt(y0)) + 1e-15);
    }
  }
}

TEST_CASE("McCormick envelopes hold at q = uv") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    double ul = unit(rng), uu = unit(rng), vl = unit(rng), vu = unit(rng);
    if (ul > uu) std::swap(ul, uu);
    if (vl > vu) std::swap(vl, vu);
    const double u = ul + (uu - ul) * unit(rng);
    const double v = vl + (vu - vl) * unit(rng);
    const double q = u * v;
    CHECK(q >= ul * v + u * vl - ul * vl - 1e-15);
    CHECK(q >= uu * v + u * vu - uu * vu - 1e-15);
    CHECK(q <= uu * v + u * vl - uu * vl + 1e-15);
    CHECK(q <= ul * v + u * vu - ul * vu + 1e-15);
  }
}

TEST_CASE("the lifted point of any model in the box satisfies the relaxation") {
  std::mt19937_64 rng(2);
  for (const char* name : {"I", "F"}) {
    const FunctionalSpec spec = builtin(name);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const ClassicalModel centre = sample_random_model(seed);
      RelaxationNode node;
      node.box = random_box_around(centre, rng);
      node.extra_cuts.assign(spec.sqrt_terms().size(), {0.003, 0.2, 0.77});
      const Relaxation r = relax_node(spec, node);
      for (int k = 0; k < 5; ++k) {
        const auto g = sample_in_box(node.box, 0, rng);
        const auto a = sample_in_box(node.box, 4, rng);
        REQUIRE(g);
        REQUIRE(a);
        const ClassicalModel m(*g, *a, random_response(rng));
        const std::vector<double> x = lifted_point(spec, r, m);
        CHECK(max_violation(r.lp, x) < 1e-12);
        CHECK(std::abs(lp_objective(r, x) - evaluate_model(spec, m)) < 1e-12);
      }
    }
  }
}

TEST_CASE("root relaxation dominates the stored bound") {
  const NodeSolution s = solve_node(builtin("I"), RelaxationNode{});
  REQUIRE(s.status == LPStatus::Optimal);
  CHECK(s.upper_bound >= 2.562278895);
  const NodeSolution f = solve_node(builtin("F"), RelaxationNode{});
  REQUIRE(f.status == LPStatus::Optimal);
  CHECK(f.upper_bound >= 3.000357);
}

TEST_CASE("collapsed box at the I-optimal sources") {
  const FunctionalSpec spec = builtin("I");
  const ClassicalModel m = fixture("I-optimal").model;
  RelaxationNode node;
  node.box = SourceBox::point(m.p_gamma(), m.p_alpha());
  const NodeSolution s = solve_node(spec, node);
  REQUIRE(s.status == LPStatus::Optimal);
  CHECK(std::abs(s.upper_bound - evaluate_model(spec, m)) < 1e-3);
}

TEST_CASE("McCormick is exact at a degenerate corner") {
  const FunctionalSpec spec = builtin("I");
  RelaxationNode node;
  node.box.lower[0] = node.box.upper[0] = 1.0;
  node.box.lower[4] = node.box.upper[4] = 1.0;
  Relaxation r = relax_node(spec, node);
  for (std::size_t j = 0; j < r.lp.variable_count(); ++j) r.lp.set_objective(j, 0.0);
  r.lp.set_objective(Layout::kQ, 1.0);
  const LPResult hi = solve_lp(r.lp);
  r.lp.set_objective(Layout::kQ, -1.0);
  const LPResult lo = solve_lp(r.lp);
  REQUIRE(hi.status == LPStatus::Optimal);
  REQUIRE(lo.status == LPStatus::Optimal);
  CHECK(std::abs(hi.value - 1.0) < 1e-12);
  CHECK(std::abs(-lo.value - 1.0) < 1e-12);
}

TEST_CASE("relaxation rejects empty boxes and positive abs coefficients") {
  RelaxationNode node;
  for (int i = 0; i < 4; ++i) node.box.upper[i] = 0.2;
  CHECK_THROWS_AS(relax_node(builtin("I"), node), InvalidInputError);
  CHECK(solve_node(builtin("I"), node).status == LPStatus::Infeasible);
  CHECK_THROWS_AS(relax_node(parse_witness("abs(P(0,0,0) - 1/2)"), RelaxationNode{}), ConfigurationError);
  CHECK_THROWS_AS(branch_and_bound(parse_witness("abs(P(0,0,0) - 1/2)")), ConfigurationError);
}

TEST_CASE("simplex projection") {
  const auto p = project_to_simplex({0.5, 0.5, 0.5, -1.0});
  CHECK(std::abs(p[0] - 1.0 / 3) < 1e-15);
  CHECK(p[3] == 0.0);
  const auto q = project_to_simplex({0.1, 0.2, 0.3, 0.4});
  const ClassicalModel::Source want{0.1, 0.2, 0.3, 0.4};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(q[i] - want[i]) < 1e-15);
}

TEST_CASE("local search on I with 200 starts") {
  LocalSearchOptions o;
  o.starts = 200;
  const LocalSearchResult r = local_search(builtin("I"), o);
  CHECK(r.value >= 2.5622);
  CHECK(std::abs(evaluate_model(builtin("I"), r.model) - r.value) < 1e-12);
}

TEST_CASE("local search on F with 200 starts") {
  LocalSearchOptions o;
  o.starts = 200;
  const LocalSearchResult r = local_search(builtin("F"), o);
  CHECK(r.value >= 3.0000);
}

TEST_CASE("ascent from the I-optimal fixture does not regress") {
  const FunctionalSpec spec = builtin("I");
  const ClassicalModel m = fixture("I-optimal").model;
  const LocalSearchResult r = ascend(spec, m);
  CHECK(r.value >= evaluate_model(spec, m));
  CHECK(r.value >= 2.56226 - 1e-6);
}

TEST_CASE("local search is deterministic per seed") {
  LocalSearchOptions o;
  o.starts = 10;
  o.seed = 5;
  const LocalSearchResult a = local_search(builtin("F"), o);
  const LocalSearchResult b = local_search(builtin("F"), o);
  CHECK(a.value == b.value);
  CHECK(a.model.p_b0() == b.model.p_b0());
}

TEST_CASE("trivial witness P(0,0,0) certifies to 1") {
  const BoundCertificate c = branch_and_bound(parse_witness("name: trivial\nmaximize: P(0,0,0)"));
  CHECK(c.converged);
  CHECK(std::abs(c.lower - 1.0) < 1e-6);
  CHECK(std::abs(c.upper - 1.0) < 1e-6);
}

TEST_CASE("node bounds are sound and monotone") {
  const FunctionalSpec spec = builtin("I");
  std::mutex mu;
  std::mt19937_64 rng(77);
  std::size_t nodes = 0;
  double worst_soundness = -kInfinity;
  double worst_monotone = -kInfinity;
  BranchAndBoundOptions o;
  o.node_cap = 300;
  o.local_search_starts = 4;
  o.node_observer = [&](const RelaxationNode& node, const NodeSolution& s) {
    std::lock_guard<std::mutex> lock(mu);
    if (s.status != LPStatus::Optimal) return;
    ++nodes;
    if (std::isfinite(node.upper_bound)) worst_monotone = std::max(worst_monotone, s.upper_bound - node.upper_bound);
    for (int k = 0; k < 100; ++k) {
      const auto g = sample_in_box(node.box, 0, rng);
      const auto a = sample_in_box(node.box, 4, rng);
      if (!g || !a) break;
      const ClassicalModel m(*g, *a, random_response(rng));
      worst_soundness = std::max(worst_soundness, evaluate_model(spec, m) - s.upper_bound);
    }
  };
  const BoundCertificate c = branch_and_bound(spec, o);
  CHECK(nodes > 100);
  CHECK(worst_soundness <= 1e-9);
  CHECK(worst_monotone <= 1e-9);
  CHECK(c.lower <= c.upper + 1e-9);
  CHECK_FALSE(c.converged);
  CHECK(c.termination == "node-cap");
}

TEST_CASE("certificate sandwich and determinism") {
  BranchAndBoundOptions o;
  o.node_cap = 60;
  const FunctionalSpec spec = builtin("F");
  const BoundCertificate a = branch_and_bound(spec, o);
  const BoundCertificate b = branch_and_bound(spec, o);
  REQUIRE(a.model);
  CHECK(std::abs(evaluate_model(spec, *a.model) - a.lower) < 1e-10);
  CHECK(a.lower <= a.upper + 1e-9);
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
  CHECK(a.nodes == b.nodes);

  const BoundCertificate back = certificate_from_json(to_json(a));
  CHECK(back.lower == a.lower);
  CHECK(back.upper == a.upper);
  CHECK(back.converged == a.converged);
  CHECK(back.model->p_b0() == a.model->p_b0());
}

TEST_CASE("parallel search keeps the certificate invariant") {
  BranchAndBoundOptions o;
  o.node_cap = 200;
  o.workers = 4;
  const BoundCertificate c = branch_and_bound(builtin("I"), o);
  REQUIRE(c.model);
  CHECK(c.lower <= c.upper + 1e-9);
  CHECK(std::abs(evaluate_model(builtin("I"), *c.model) - c.lower) < 1e-10);
}

TEST_CASE("I certificate brackets 2.562278895") {
  // Short budget: the incumbent alone decides the lower-side assertion.
  BranchAndBoundOptions o;
  o.node_cap = 200;
  const BoundCertificate c = branch_and_bound(builtin("I"), o);
  CHECK(c.lower >= 2.5622);
  CHECK(c.lower <= c.upper);
  CHECK(c.upper <= 2.5633);
}

TEST_CASE("F certificate brackets 3.000357") {
  BranchAndBoundOptions o;
  o.gap = 1e-3;
  o.time_limit_seconds = 600;
  const BoundCertificate c = branch_and_bound(builtin("F"), o);
  CHECK(c.converged);
  CHECK(c.lower <= 3.000357);
  CHECK(3.000357 <= c.upper);
  CHECK(c.upper - c.lower <= 1.1e-3);
}
