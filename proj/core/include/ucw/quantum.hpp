#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "ucw/behavior.hpp"
#include "ucw/complex_matrix.hpp"

namespace ucw {

// Validated mixed state: Hermitian and unit trace within 1e-12, eigenvalues
// no lower than -1e-10.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix m);

  // v |psi><psi| + (1 - v) 1/d
  static DensityOperator isotropic(std::span<const Complex> ket, double visibility);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dimension() const noexcept { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

struct FamilyParams {
  double theta = 0.0;
  double visibility = 1.0;
};

// Sources and measurements for the UC network. Hilbert space slots are
// ordered (A, B-left, B-right, C); the AB source occupies the first two
// slots and the BC source the last two, Bob's effect acts on the middle pair.
class QuantumStrategy {
 public:
  using PartyEffects = std::array<std::array<ComplexMatrix, 2>, 2>;  // [b][outcome], 2x2
  using BobEffects = std::array<ComplexMatrix, 2>;                   // [b], 4x4

  QuantumStrategy(DensityOperator source_ab, DensityOperator source_bc, PartyEffects effects_a,
                  BobEffects effects_b, PartyEffects effects_c,
                  std::optional<FamilyParams> family = std::nullopt);

  const DensityOperator& source_ab() const noexcept { return source_ab_; }
  const DensityOperator& source_bc() const noexcept { return source_bc_; }
  const ComplexMatrix& effect_a(int a, int b) const noexcept { return effects_a_[b][a]; }
  const ComplexMatrix& effect_b(int b) const noexcept { return effects_b_[b]; }
  const ComplexMatrix& effect_c(int c, int b) const noexcept { return effects_c_[b][c]; }
  const std::optional<FamilyParams>& family() const noexcept { return family_; }

 private:
  DensityOperator source_ab_;
  DensityOperator source_bc_;
  PartyEffects effects_a_;
  BobEffects effects_b_;
  PartyEffects effects_c_;
  std::optional<FamilyParams> family_;
};

// Eigenbasis projectors of a single-qubit observable: outcome 0 is the +1
// eigenvector.
std::array<ComplexMatrix, 2> observable_effects(const ComplexMatrix& observable);

// Both sources v|psi+><psi+| + (1-v)1/4 with psi+ = (|01>+|10>)/sqrt2; A and C
// measure sigma_x when b=0 and sigma_z when b=1; Bob projects onto
// sin(theta)|01> + cos(theta)|10> for b=0.
QuantumStrategy swapping_strategy(double theta, double visibility = 1.0);

// P(a,b,c) = Tr[(rho_AB (x) rho_BC)(E_{a|b} (x) E_b (x) E_{c|b})]
Behavior born_behavior(const QuantumStrategy& s);

// P(a|do b) = Tr[rho_AB (E_{a|b} (x) 1)], P(c|do b) = Tr[rho_BC (1 (x) E_{c|b})]
DoData born_do_data(const QuantumStrategy& s);

// Closed-form behavior of swapping_strategy(theta, v):
//   P(a,0,c) = (1 + v^2 sin2t (-1)^{a+c}) / 16
//   P(a,1,c) = (3 + v^2 (-1)^{a+c} + v cos2t ((-1)^c - (-1)^a)) / 16
Behavior family_behavior(double theta, double visibility = 1.0);

enum class WitnessKind { I, F };

std::string_view to_string(WitnessKind kind) noexcept;
WitnessKind witness_kind_from_string(std::string_view name);

// Witness value of the noisy family in closed form.
double witness_value_closed_form(WitnessKind kind, double theta, double visibility = 1.0);

struct ThetaOptimum {
  double theta = 0.0;
  double value = 0.0;
};

// Maximizes the closed form over theta in [0, pi/2]; coarse grid followed
// by golden-section refinement to 1e-8 in theta.
ThetaOptimum maximize_over_theta(WitnessKind kind, double visibility);

// Smallest visibility whose optimal violation reaches classical_bound, by
// bisection to 1e-9 in v. std::nullopt when even v = 1 does not violate.
// Throws SolverError if max_theta witness(v) is not nondecreasing in v.
std::optional<double> critical_visibility(WitnessKind kind, double classical_bound);

}  // namespace ucw
