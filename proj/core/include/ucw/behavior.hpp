#pragma once

#include <array>
#include <cstddef>

namespace ucw {

// Observed joint distribution P(a,b,c) over three bits, stored in
// lexicographic (a,b,c) order: index = 4a + 2b + c.
class Behavior {
 public:
  static constexpr double kNormTolerance = 1e-9;
  static constexpr double kEntryTolerance = 1e-12;

  // Validates normalization and entry range, then clamps entries to [0,1].
  explicit Behavior(const std::array<double, 8>& p);

  static constexpr std::size_t index(int a, int b, int c) noexcept {
    return static_cast<std::size_t>(4 * a + 2 * b + c);
  }

  static Behavior uniform();

  double operator()(int a, int b, int c) const noexcept { return p_[index(a, b, c)]; }
  const std::array<double, 8>& values() const noexcept { return p_; }

  // P(b), marginalized over a and c.
  double marginal_b(int b) const noexcept;

  double max_abs_diff(const Behavior& other) const noexcept;

 private:
  std::array<double, 8> p_{};
};

// Unnormalized correlators <A^i C^j>_b = sum_{a,c} (-1)^{ai+cj} P(a,b,c).
// The (0,0) component is P(b).
class CorrelatorView {
 public:
  CorrelatorView() = default;

  double& at(int b, int i, int j) noexcept { return v_[static_cast<std::size_t>(4 * b + 2 * i + j)]; }
  double at(int b, int i, int j) const noexcept { return v_[static_cast<std::size_t>(4 * b + 2 * i + j)]; }

  double p_b(int b) const noexcept { return at(b, 0, 0); }
  double a(int b) const noexcept { return at(b, 1, 0); }
  double c(int b) const noexcept { return at(b, 0, 1); }
  double ac(int b) const noexcept { return at(b, 1, 1); }

 private:
  std::array<double, 8> v_{};
};

// Interventional conditionals P(a|do(b)) and P(c|do(b)).
class DoData {
 public:
  using Table = std::array<std::array<double, 2>, 2>;  // [b][outcome]

  DoData(const Table& a_do, const Table& c_do);

  // Both parties' conditionals uniform: zero do-correlators.
  static DoData unbiased();

  double a_given_do(int a, int b) const noexcept { return a_do_[b][a]; }
  double c_given_do(int c, int b) const noexcept { return c_do_[b][c]; }
  // <A>_do(b) and <C>_do(b)
  double expect_a(int b) const noexcept { return a_do_[b][0] - a_do_[b][1]; }
  double expect_c(int b) const noexcept { return c_do_[b][0] - c_do_[b][1]; }

  const Table& a_table() const noexcept { return a_do_; }
  const Table& c_table() const noexcept { return c_do_; }

 private:
  Table a_do_{};
  Table c_do_{};
};

// Point of the two-parameter slice of behaviors shaped like the quantum
// family; both coordinates lie in [-1/4, 1/4].
struct SubspacePoint {
  double r = 0.0;
  double s = 0.0;
};

CorrelatorView to_correlators(const Behavior& p);

// Throws InvalidCorrelatorError when the inverse map yields an entry
// below -1e-9.
Behavior from_correlators(const CorrelatorView& c);

// P(a,0,c) = (1 + 4r(-1)^{a+c})/16, P(a,1,c) = (3 + (-1)^{a+c} + 4s((-1)^c - (-1)^a))/16
Behavior subspace_behavior(SubspacePoint pt);

}  // namespace ucw
