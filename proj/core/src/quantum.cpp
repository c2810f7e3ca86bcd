#include "ucw/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "ucw/error.hpp"

namespace ucw {
namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPsdTol = 1e-10;
constexpr double kCompletenessTol = 1e-12;

void validate_effects(std::span<const ComplexMatrix> effects, std::size_t dim, const char* party) {
  ComplexMatrix sum(dim, dim);
  for (const auto& e : effects) {
    if (e.rows() != dim || e.cols() != dim) {
      throw ConfigurationError(std::string("effect dimension mismatch for party ") + party);
    }
    if (!e.is_hermitian(kHermitianTol)) {
      throw InvalidInputError(std::string("non-Hermitian effect for party ") + party);
    }
    const auto eig = hermitian_eigenvalues(e);
    if (eig.front() < -kPsdTol) {
      throw InvalidInputError(std::string("effect for party ") + party + " is not PSD (min eigenvalue " +
                              std::to_string(eig.front()) + ")");
    }
    sum += e;
  }
  if (max_abs_diff(sum, ComplexMatrix::identity(dim)) > kCompletenessTol) {
    throw InvalidInputError(std::string("effects for party ") + party + " do not sum to identity");
  }
}

double clamp_probability(Complex v) { return std::clamp(v.real(), 0.0, 1.0); }

double parity(int x) { return (x & 1) ? -1.0 : 1.0; }

}  // namespace

DensityOperator::DensityOperator(ComplexMatrix m) : m_(std::move(m)) {
  if (!m_.is_square()) throw ConfigurationError("density operator must be square");
  if (!m_.is_hermitian(kHermitianTol)) throw InvalidInputError("density operator is not Hermitian");
  if (std::abs(m_.trace() - Complex(1.0)) > kTraceTol) {
    throw InvalidInputError("density operator trace differs from 1");
  }
  const auto eig = hermitian_eigenvalues(m_);
  if (eig.front() < -kPsdTol) throw InvalidInputError("density operator has a negative eigenvalue");
}

DensityOperator DensityOperator::isotropic(std::span<const Complex> ket, double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw InvalidInputError("visibility outside [0,1]");
  }
  const auto d = ket.size();
  ComplexMatrix m = ComplexMatrix::projector(ket) * Complex(visibility);
  m += ComplexMatrix::identity(d) * Complex((1.0 - visibility) / static_cast<double>(d));
  return DensityOperator(std::move(m));
}

QuantumStrategy::QuantumStrategy(DensityOperator source_ab, DensityOperator source_bc,
                                 PartyEffects effects_a, BobEffects effects_b,
                                 PartyEffects effects_c, std::optional<FamilyParams> family)
    : source_ab_(std::move(source_ab)),
      source_bc_(std::move(source_bc)),
      effects_a_(std::move(effects_a)),
      effects_b_(std::move(effects_b)),
      effects_c_(std::move(effects_c)),
      family_(family) {
  if (source_ab_.dimension() != 4 || source_bc_.dimension() != 4) {
    throw ConfigurationError("sources must be two-qubit (4x4) states");
  }
  for (int b = 0; b < 2; ++b) {
    validate_effects(effects_a_[b], 2, "A");
    validate_effects(effects_c_[b], 2, "C");
  }
  validate_effects(effects_b_, 4, "B");
}

std::array<ComplexMatrix, 2> observable_effects(const ComplexMatrix& observable) {
  const auto id = ComplexMatrix::identity(2);
  return {(id + observable) * Complex(0.5), (id - observable) * Complex(0.5)};
}

QuantumStrategy swapping_strategy(double theta, double visibility) {
  const double h = 1.0 / std::numbers::sqrt2;
  const std::array<Complex, 4> psi_plus{0.0, h, h, 0.0};
  auto source = DensityOperator::isotropic(psi_plus, visibility);

  const std::array<Complex, 4> psi_theta{0.0, std::sin(theta), std::cos(theta), 0.0};
  const auto e0 = ComplexMatrix::projector(psi_theta);
  QuantumStrategy::BobEffects bob{e0, ComplexMatrix::identity(4) - e0};

  QuantumStrategy::PartyEffects party{observable_effects(pauli::x()), observable_effects(pauli::z())};
  return QuantumStrategy(source, source, party, bob, party, FamilyParams{theta, visibility});
}

Behavior born_behavior(const QuantumStrategy& s) {
  const auto rho = kron(s.source_ab().matrix(), s.source_bc().matrix());
  std::array<double, 8> p{};
  for (int b = 0; b < 2; ++b) {
    for (int a = 0; a < 2; ++a) {
      const auto left = kron(s.effect_a(a, b), s.effect_b(b));
      for (int c = 0; c < 2; ++c) {
        p[Behavior::index(a, b, c)] = clamp_probability(trace_of_product(rho, kron(left, s.effect_c(c, b))));
      }
    }
  }
  return Behavior(p);
}

DoData born_do_data(const QuantumStrategy& s) {
  const auto id = ComplexMatrix::identity(2);
  DoData::Table a_do{};
  DoData::Table c_do{};
  for (int b = 0; b < 2; ++b) {
    for (int x = 0; x < 2; ++x) {
      a_do[b][x] = clamp_probability(trace_of_product(s.source_ab().matrix(), kron(s.effect_a(x, b), id)));
      c_do[b][x] = clamp_probability(trace_of_product(s.source_bc().matrix(), kron(id, s.effect_c(x, b))));
    }
  }
  return DoData(a_do, c_do);
}

Behavior family_behavior(double theta, double visibility) {
  const double v = visibility;
  const double sin2 = std::sin(2.0 * theta);
  const double cos2 = std::cos(2.0 * theta);
  std::array<double, 8> p{};
  for (int a = 0; a < 2; ++a) {
    for (int c = 0; c < 2; ++c) {
      const double sign = parity(a + c);
      p[Behavior::index(a, 0, c)] = (1.0 + v * v * sin2 * sign) / 16.0;
      p[Behavior::index(a, 1, c)] = (3.0 + v * v * sign + v * cos2 * (parity(c) - parity(a))) / 16.0;
    }
  }
  return Behavior(p);
}

std::string_view to_string(WitnessKind kind) noexcept { return kind == WitnessKind::I ? "I" : "F"; }

WitnessKind witness_kind_from_string(std::string_view name) {
  if (name == "I") return WitnessKind::I;
  if (name == "F") return WitnessKind::F;
  throw ConfigurationError("unknown witness '" + std::string(name) + "'");
}

double witness_value_closed_form(WitnessKind kind, double theta, double visibility) {
  const double v = visibility;
  const double cross = std::sqrt(std::max(0.0, 3.0 - v * v + 2.0 * v * std::cos(2.0 * theta)));
  const double swap = std::sqrt(std::max(0.0, 1.0 + v * v * std::sin(2.0 * theta)));
  const double noise = std::abs(v * v - 1.0);
  if (kind == WitnessKind::I) return 0.75 * cross + swap - 3.75 * noise;
  return cross + swap - 0.5 * noise;
}

ThetaOptimum maximize_over_theta(WitnessKind kind, double visibility) {
  constexpr int kGrid = 256;
  const double hi = std::numbers::pi / 2.0;
  auto f = [&](double t) { return witness_value_closed_form(kind, t, visibility); };

  int best = 0;
  double best_value = f(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double value = f(hi * i / kGrid);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  double a = hi * std::max(0, best - 1) / kGrid;
  double b = hi * std::min(kGrid, best + 1) / kGrid;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > 1e-9) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  const double theta = 0.5 * (a + b);
  ThetaOptimum out{theta, f(theta)};
  // Grid endpoints can beat the interior bracket when the maximum sits on the boundary.
  if (best_value > out.value) out = {hi * best / kGrid, best_value};
  return out;
}

std::optional<double> critical_visibility(WitnessKind kind, double classical_bound) {
  if (!std::isfinite(classical_bound)) throw ConfigurationError("classical bound must be finite");
  auto gap = [&](double v) { return maximize_over_theta(kind, v).value - classical_bound; };

  constexpr int kSamples = 20;
  std::vector<double> curve;
  curve.reserve(kSamples + 1);
  for (int i = 0; i <= kSamples; ++i) curve.push_back(gap(static_cast<double>(i) / kSamples));
  for (int i = 1; i <= kSamples; ++i) {
    if (curve[i] < curve[i - 1] - 1e-12) {
      std::ostringstream os;
      os << "max-over-theta witness is not monotone in visibility; samples:";
      for (int k = 0; k <= kSamples; ++k) os << " (" << static_cast<double>(k) / kSamples << ", " << curve[k] + classical_bound << ")";
      throw SolverError(os.str());
    }
  }
  if (curve.back() <= 0.0) return std::nullopt;
  if (curve.front() > 0.0) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace ucw
