#include <cmath>
#include <random>

#include "doctest.h"
#include "ucw/classical.hpp"
#include "ucw/error.hpp"
#include "ucw/functional.hpp"
#include "ucw/json_io.hpp"

using namespace ucw;

namespace {

double witness_on(const char* name, const ClassicalModel& m) {
  return evaluate(builtin(name), classical_behavior(m), classical_do_data(m)).value;
}

int idx(const char* bits) { return ClassicalModel::hidden_index(bits); }

// P(a,c|do b) straight from the hidden-variable sum.
double joint_do(const ClassicalModel& m, int a, int c, int b) {
  double total = 0.0;
  for (int g = 0; g < 4; ++g) {
    for (int al = 0; al < 4; ++al) {
      if (ClassicalModel::bit(g, b) == a && ClassicalModel::bit(al, b) == c) total += m.p_gamma()[g] * m.p_alpha()[al];
    }
  }
  return total;
}

}  // namespace

TEST_CASE("hidden index order is [00, 10, 01, 11]") {
  CHECK(idx("00") == 0);
  CHECK(idx("10") == 1);
  CHECK(idx("01") == 2);
  CHECK(idx("11") == 3);
  CHECK_THROWS_AS(idx("2"), InvalidInputError);
}

TEST_CASE("I-optimal fixture evaluates to 2.56226") {
  const double v = witness_on("I", fixture("I-optimal").model);
  CHECK(std::abs(v - 2.56226) < 1e-4);
}

TEST_CASE("F-optimal fixture evaluates to 3.00001") {
  const double v = witness_on("F", fixture("F-optimal").model);
  CHECK(std::abs(v - 3.00001) < 1e-4);
}

TEST_CASE("fixtures carry the printed response entries") {
  const ClassicalModel i = fixture("I-optimal").model;
  CHECK(i.p_b0(idx("11"), idx("10")) == 0.82842);
  CHECK(i.p_b0(idx("00"), idx("01")) == 1.0);
  CHECK(i.p_b0(idx("10"), idx("11")) == 1.0);
  const ClassicalModel f = fixture("F-optimal").model;
  CHECK(f.p_b0(idx("00"), idx("11")) == 0.85161);
  CHECK(f.p_b0(idx("10"), idx("01")) == 0.85223);
  CHECK(f.p_b0(idx("10"), idx("10")) == 0.14812);
  CHECK(f.p_b0(idx("11"), idx("11")) == 0.14801);
  int fractional = 0;
  for (double x : f.p_b0()) fractional += (x > 0.0 && x < 1.0);
  CHECK(fractional == 4);
}

TEST_CASE("fixture sources are normalized and record the listing residual") {
  for (const char* name : {"I-optimal", "F-optimal"}) {
    const Fixture f = fixture(name);
    double sg = 0.0;
    double sa = 0.0;
    for (double x : f.model.p_gamma()) sg += x;
    for (double x : f.model.p_alpha()) sa += x;
    CHECK(std::abs(sg - 1.0) < 1e-12);
    CHECK(std::abs(sa - 1.0) < 1e-12);
    CHECK(f.gamma_residual < 1e-4);
    CHECK(f.alpha_residual < 1e-4);
  }
  CHECK(std::abs(fixture("I-optimal").model.p_gamma()[idx("11")] - 0.3543) < 1e-5);
  CHECK_THROWS_AS(fixture("G-optimal"), ConfigurationError);
}

TEST_CASE("F-optimal has <A>_do(0) of order 2e-5") {
  const ClassicalModel m = fixture("F-optimal").model;
  const double direct = 2 * (m.p_gamma()[idx("00")] + m.p_gamma()[idx("01")]) - 1;
  const double ea = classical_do_data(m).expect_a(0);
  CHECK(std::abs(ea - direct) < 1e-15);
  CHECK(std::abs(std::abs(ea) - 0.00002) < 1e-5);
}

TEST_CASE("point-mass model gives p(0,0,0) = 1") {
  ClassicalModel::Response r{};
  r[0] = 1.0;
  const ClassicalModel m({1, 0, 0, 0}, {1, 0, 0, 0}, r);
  CHECK(classical_behavior(m)(0, 0, 0) == 1.0);
}

TEST_CASE("uniform gamma gives P(a|do b) = 1/2") {
  const ClassicalModel m({0.25, 0.25, 0.25, 0.25}, {0.1, 0.2, 0.3, 0.4}, ClassicalModel::Response{});
  const DoData d = classical_do_data(m);
  for (int b = 0; b < 2; ++b) {
    for (int a = 0; a < 2; ++a) CHECK(d.a_given_do(a, b) == 0.5);
  }
}

TEST_CASE("random models give normalized behaviors that roundtrip through correlators") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Behavior p = classical_behavior(sample_random_model(seed));
    double total = 0.0;
    for (double x : p.values()) total += x;
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK(from_correlators(to_correlators(p)).max_abs_diff(p) < 1e-14);
  }
}

TEST_CASE("sampling is deterministic per seed") {
  const ClassicalModel a = sample_random_model(42);
  const ClassicalModel b = sample_random_model(42);
  CHECK(a.p_gamma() == b.p_gamma());
  CHECK(a.p_alpha() == b.p_alpha());
  CHECK(a.p_b0() == b.p_b0());
  CHECK(sample_random_model(43).p_gamma() != a.p_gamma());
}

TEST_CASE("10^4 samples satisfy the model invariants and the stored bounds") {
  const FunctionalSpec fi = builtin("I");
  const FunctionalSpec ff = builtin("F");
  double worst_i = -1e9;
  double worst_f = -1e9;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const ClassicalModel m = sample_random_model(seed);
    double sg = 0.0;
    double sa = 0.0;
    for (double x : m.p_gamma()) sg += x;
    for (double x : m.p_alpha()) sa += x;
    CHECK(std::abs(sg - 1.0) < 1e-9);
    CHECK(std::abs(sa - 1.0) < 1e-9);
    for (double x : m.p_b0()) CHECK((x >= 0.0 && x <= 1.0));
    const Behavior p = classical_behavior(m);
    const DoData d = classical_do_data(m);
    worst_i = std::max(worst_i, evaluate(fi, p).value);
    worst_f = std::max(worst_f, evaluate(ff, p, d).value);
  }
  CHECK(worst_i <= kStoredBoundI + 1e-9);
  CHECK(worst_f <= kStoredBoundF + 1e-9);
}

TEST_CASE("interventional data factorizes") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const ClassicalModel m = sample_random_model(seed);
    const DoData d = classical_do_data(m);
    for (int b = 0; b < 2; ++b) {
      for (int a = 0; a < 2; ++a) {
        for (int c = 0; c < 2; ++c) {
          CHECK(std::abs(joint_do(m, a, c, b) - d.a_given_do(a, b) * d.c_given_do(c, b)) < 1e-15);
        }
      }
    }
  }
}

TEST_CASE("intervening differs from conditioning unless Bob ignores the sources") {
  auto max_gap = [](const ClassicalModel& m) {
    const Behavior p = classical_behavior(m);
    double gap = 0.0;
    for (int b = 0; b < 2; ++b) {
      for (int a = 0; a < 2; ++a) {
        for (int c = 0; c < 2; ++c) gap = std::max(gap, std::abs(joint_do(m, a, c, b) - p(a, b, c) / p.marginal_b(b)));
      }
    }
    return gap;
  };
  int differing = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) differing += max_gap(sample_random_model(seed)) > 1e-6;
  CHECK(differing > 0);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ClassicalModel s = sample_random_model(seed);
    ClassicalModel::Response constant;
    constant.fill(s.p_b0()[0]);
    CHECK(max_gap(ClassicalModel(s.p_gamma(), s.p_alpha(), constant)) < 1e-12);
  }
}

TEST_CASE("behavior is bilinear in the sources and linear in the response") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ClassicalModel x = sample_random_model(2 * seed);
    const ClassicalModel y = sample_random_model(2 * seed + 1);
    const double l = u(rng);
    ClassicalModel::Source g{};
    ClassicalModel::Source al{};
    ClassicalModel::Response r{};
    for (int i = 0; i < 4; ++i) {
      g[i] = l * x.p_gamma()[i] + (1 - l) * y.p_gamma()[i];
      al[i] = l * x.p_alpha()[i] + (1 - l) * y.p_alpha()[i];
    }
    for (int i = 0; i < 16; ++i) r[i] = l * x.p_b0()[i] + (1 - l) * y.p_b0()[i];

    auto mix = [&](const Behavior& bx, const Behavior& by) {
      std::array<double, 8> out{};
      for (int i = 0; i < 8; ++i) out[i] = l * bx.values()[i] + (1 - l) * by.values()[i];
      return Behavior(out);
    };
    const Behavior in_gamma = classical_behavior(ClassicalModel(g, x.p_alpha(), x.p_b0()));
    CHECK(in_gamma.max_abs_diff(mix(classical_behavior(x), classical_behavior(ClassicalModel(y.p_gamma(), x.p_alpha(), x.p_b0())))) < 1e-14);
    const Behavior in_alpha = classical_behavior(ClassicalModel(x.p_gamma(), al, x.p_b0()));
    CHECK(in_alpha.max_abs_diff(mix(classical_behavior(x), classical_behavior(ClassicalModel(x.p_gamma(), y.p_alpha(), x.p_b0())))) < 1e-14);
    const Behavior in_response = classical_behavior(ClassicalModel(x.p_gamma(), x.p_alpha(), r));
    CHECK(in_response.max_abs_diff(mix(classical_behavior(x), classical_behavior(ClassicalModel(x.p_gamma(), x.p_alpha(), y.p_b0())))) < 1e-14);
  }
}

TEST_CASE("model validation and json") {
  CHECK_THROWS_AS(ClassicalModel({0.5, 0.5, 0.5, 0}, {1, 0, 0, 0}, ClassicalModel::Response{}), InvalidInputError);
  ClassicalModel::Response bad{};
  bad[3] = 1.5;
  CHECK_THROWS_AS(ClassicalModel({1, 0, 0, 0}, {1, 0, 0, 0}, bad), InvalidInputError);

  const ClassicalModel m = fixture("F-optimal").model;
  const Json j = to_json(m);
  CHECK(j.at("p_b0").size() == 16);
  const ClassicalModel back = model_from_json(j);
  CHECK(back.p_gamma() == m.p_gamma());
  CHECK(back.p_alpha() == m.p_alpha());
  CHECK(back.p_b0() == m.p_b0());
}
