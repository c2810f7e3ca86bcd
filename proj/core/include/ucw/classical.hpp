#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "ucw/behavior.hpp"

namespace ucw {

// Classical hidden-variable model of the UC network in response-function
// form. Each source carries two bits; hidden value k encodes
// (x0, x1) = (k & 1, k >> 1), so the index order is [00, 10, 01, 11] in
// "x0 x1" notation. Alice outputs gamma_b and Charlie outputs alpha_b once
// Bob announces b; Bob answers b = 0 with probability p_b0(gamma, alpha).
class ClassicalModel {
 public:
  static constexpr double kNormTolerance = 1e-9;

  using Source = std::array<double, 4>;
  using Response = std::array<double, 16>;  // [4 * gamma + alpha]

  ClassicalModel(const Source& p_gamma, const Source& p_alpha, const Response& p_b0);

  static constexpr int bit(int hidden, int b) noexcept { return (hidden >> b) & 1; }
  static constexpr std::size_t response_index(int gamma, int alpha) noexcept {
    return static_cast<std::size_t>(4 * gamma + alpha);
  }
  // "00", "10", "01", "11" -> 0..3
  static int hidden_index(std::string_view bits);

  const Source& p_gamma() const noexcept { return p_gamma_; }
  const Source& p_alpha() const noexcept { return p_alpha_; }
  const Response& p_b0() const noexcept { return p_b0_; }
  double p_b0(int gamma, int alpha) const noexcept { return p_b0_[response_index(gamma, alpha)]; }

 private:
  Source p_gamma_;
  Source p_alpha_;
  Response p_b0_;
};

// p(a,b,c) = sum_{gamma,alpha} p(gamma) p(alpha) [a = gamma_b] [c = alpha_b] p(b|gamma,alpha)
Behavior classical_behavior(const ClassicalModel& m);

// P(a|do b) = sum_{gamma: gamma_b = a} p(gamma), likewise for C.
DoData classical_do_data(const ClassicalModel& m);

// Sources uniform on the 3-simplex, Bob's response entries uniform on
// [0,1]. Deterministic per seed.
ClassicalModel sample_random_model(std::uint64_t seed);

struct Fixture {
  std::string name;
  ClassicalModel model;
  // |1 - sum| of each printed source vector before normalization.
  double gamma_residual = 0.0;
  double alpha_residual = 0.0;
};

// Printed optimal strategies: "I-optimal" and "F-optimal".
Fixture fixture(std::string_view name);

}  // namespace ucw
