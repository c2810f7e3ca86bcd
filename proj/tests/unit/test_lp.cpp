#include <cmath>
#include <random>

#include "doctest.h"
#include "ucw/error.hpp"
#include "ucw/lp.hpp"
#include "oracles.hpp"

using namespace ucw;
using namespace ucw::testing;

TEST_CASE("max x subject to x <= 3") {
  LPProblem p(1);
  p.set_objective(0, 1.0);
  p.add_row(std::vector<double>{1.0}, RowSense::LessEqual, 3.0);
  const LPResult r = solve_lp(p);
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.x[0] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("max x + y on the 2-simplex") {
  LPProblem p(3);
  p.set_objective(0, 1.0);
  p.set_objective(1, 1.0);
  p.add_row(std::vector<double>{1.0, 1.0, 1.0}, RowSense::Equal, 1.0);
  const LPResult r = solve_lp(p);
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(std::abs(r.value - 1.0) < 1e-12);
  CHECK(std::abs(r.x[2]) < 1e-12);
}

TEST_CASE("unbounded and infeasible problems") {
  LPProblem u(2);
  u.set_objective(0, 1.0);
  u.add_row(std::vector<double>{1.0, -1.0}, RowSense::LessEqual, 1.0);
  CHECK(solve_lp(u).status == LPStatus::Unbounded);

  LPProblem inf(1);
  inf.add_row(std::vector<double>{1.0}, RowSense::LessEqual, 1.0);
  inf.add_row(std::vector<double>{1.0}, RowSense::GreaterEqual, 2.0);
  CHECK(solve_lp(inf).status == LPStatus::Infeasible);

  LPProblem box(2);
  box.set_bounds(0, 0.0, 0.5);
  box.add_row(std::vector<double>{1.0, 0.0}, RowSense::Equal, 1.0);
  CHECK(solve_lp(box).status == LPStatus::Infeasible);
}

TEST_CASE("Beale's cycling example terminates at 5/4") {
  LPProblem p(4);
  const std::vector<double> c{0.75, -20.0, 0.5, -6.0};
  for (std::size_t j = 0; j < 4; ++j) p.set_objective(j, c[j]);
  p.add_row(std::vector<double>{0.25, -8.0, -1.0, 9.0}, RowSense::LessEqual, 0.0);
  p.add_row(std::vector<double>{0.5, -12.0, -0.5, 3.0}, RowSense::LessEqual, 0.0);
  p.add_row(std::vector<double>{0.0, 0.0, 1.0, 0.0}, RowSense::LessEqual, 1.0);
  const LPResult r = solve_lp(p);
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(std::abs(r.value - 1.25) < 1e-9);
}

TEST_CASE("negative lower bounds and free-standing upper bounds") {
  LPProblem p(2);
  p.set_bounds(0, -2.0, 1.0);
  p.set_bounds(1, -3.0, kInfinity);
  p.set_objective(0, -1.0);
  p.set_objective(1, -1.0);
  p.add_row(std::vector<double>{1.0, 1.0}, RowSense::GreaterEqual, -4.0);
  const LPResult r = solve_lp(p);
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(std::abs(r.value - 4.0) < 1e-12);
}

TEST_CASE("100 random LPs match vertex enumeration") {
  std::mt19937_64 rng(2024);
  int optimal = 0;
  int infeasible = 0;
  for (int instance = 0; instance < 100; ++instance) {
    const RandomLP inst = random_lp(rng);
    const auto want = enumerate_vertices(inst.objective, inst.constraints, inst.lower, inst.upper);
    const LPResult r = solve_lp(inst.problem);
    INFO("instance " << instance);
    if (want) {
      ++optimal;
      REQUIRE(r.status == LPStatus::Optimal);
      CHECK(std::abs(r.value - *want) < 1e-8);
      CHECK(r.dual_bound >= r.value - 1e-12);
      CHECK(r.dual_bound - r.value < 1e-7);
    } else {
      ++infeasible;
      CHECK(r.status == LPStatus::Infeasible);
    }
  }
  CHECK(optimal >= 50);
  MESSAGE(optimal << " optimal, " << infeasible << " infeasible");
}

TEST_CASE("malformed problems and the iteration cap") {
  LPProblem p(2);
  CHECK_THROWS_AS(p.set_bounds(0, -kInfinity, 1.0), ConfigurationError);
  CHECK_THROWS_AS(p.add_row(std::vector<double>{1.0}, RowSense::Equal, 1.0), ConfigurationError);

  LPProblem q(3);
  for (std::size_t j = 0; j < 3; ++j) q.set_objective(j, 1.0 + j);
  q.add_row(std::vector<double>{1.0, 1.0, 1.0}, RowSense::LessEqual, 1.0);
  q.add_row(std::vector<double>{1.0, 2.0, 3.0}, RowSense::GreaterEqual, 1.5);
  q.add_row(std::vector<double>{3.0, 1.0, 1.0}, RowSense::GreaterEqual, 1.0);
  LPOptions tight;
  tight.iteration_cap = 1;
  CHECK_THROWS_AS(solve_lp(q, tight), SolverError);
  CHECK(solve_lp(q).status == LPStatus::Optimal);
}
