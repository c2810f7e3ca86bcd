#include "ucw/classical.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "ucw/error.hpp"

namespace ucw {
namespace {

void validate_source(const ClassicalModel::Source& p, const char* label) {
  double total = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < -Behavior::kEntryTolerance || v > 1.0 + Behavior::kEntryTolerance) {
      throw InvalidInputError(std::string("source ") + label + " has an entry outside [0,1]");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > ClassicalModel::kNormTolerance) {
    throw InvalidInputError(std::string("source ") + label + " sums to " + std::to_string(total));
  }
}

ClassicalModel::Source clamp_source(ClassicalModel::Source p) {
  for (double& v : p) v = std::clamp(v, 0.0, 1.0);
  return p;
}

std::pair<ClassicalModel::Source, double> normalized(const ClassicalModel::Source& p) {
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  ClassicalModel::Source out = p;
  for (double& v : out) v /= total;
  return {out, std::abs(1.0 - total)};
}

// Listing order of the printed strategies: [00, 10, 01, 11].
ClassicalModel::Source from_listing(const std::array<double, 4>& listed) {
  static constexpr std::array<std::string_view, 4> kOrder{"00", "10", "01", "11"};
  ClassicalModel::Source out{};
  for (std::size_t i = 0; i < 4; ++i) out[ClassicalModel::hidden_index(kOrder[i])] = listed[i];
  return out;
}

}  // namespace

ClassicalModel::ClassicalModel(const Source& p_gamma, const Source& p_alpha, const Response& p_b0)
    : p_gamma_(p_gamma), p_alpha_(p_alpha), p_b0_(p_b0) {
  validate_source(p_gamma_, "gamma");
  validate_source(p_alpha_, "alpha");
  p_gamma_ = clamp_source(p_gamma_);
  p_alpha_ = clamp_source(p_alpha_);
  for (double& v : p_b0_) {
    if (!std::isfinite(v) || v < -Behavior::kEntryTolerance || v > 1.0 + Behavior::kEntryTolerance) {
      throw InvalidInputError("Bob response probability outside [0,1]");
    }
    v = std::clamp(v, 0.0, 1.0);
  }
}

int ClassicalModel::hidden_index(std::string_view bits) {
  if (bits.size() != 2 || (bits[0] != '0' && bits[0] != '1') || (bits[1] != '0' && bits[1] != '1')) {
    throw InvalidInputError("hidden value must be a two-bit string, got '" + std::string(bits) + "'");
  }
  return (bits[0] - '0') | ((bits[1] - '0') << 1);
}

Behavior classical_behavior(const ClassicalModel& m) {
  std::array<double, 8> p{};
  for (int g = 0; g < 4; ++g) {
    for (int al = 0; al < 4; ++al) {
      const double weight = m.p_gamma()[g] * m.p_alpha()[al];
      const double b0 = m.p_b0(g, al);
      p[Behavior::index(ClassicalModel::bit(g, 0), 0, ClassicalModel::bit(al, 0))] += weight * b0;
      p[Behavior::index(ClassicalModel::bit(g, 1), 1, ClassicalModel::bit(al, 1))] += weight * (1.0 - b0);
    }
  }
  // Sources are validated to 1e-9; renormalize away the residual rounding.
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= total;
  return Behavior(p);
}

DoData classical_do_data(const ClassicalModel& m) {
  DoData::Table a_do{};
  DoData::Table c_do{};
  for (int b = 0; b < 2; ++b) {
    for (int k = 0; k < 4; ++k) {
      a_do[b][ClassicalModel::bit(k, b)] += m.p_gamma()[k];
      c_do[b][ClassicalModel::bit(k, b)] += m.p_alpha()[k];
    }
  }
  return DoData(a_do, c_do);
}

ClassicalModel sample_random_model(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto simplex = [&] {
    ClassicalModel::Source s{};
    for (double& v : s) v = expo(rng);
    const double total = std::accumulate(s.begin(), s.end(), 0.0);
    for (double& v : s) v /= total;
    return s;
  };
  const auto gamma = simplex();
  const auto alpha = simplex();
  ClassicalModel::Response response{};
  for (double& v : response) v = unit(rng);
  return ClassicalModel(gamma, alpha, response);
}

Fixture fixture(std::string_view name) {
  auto b0_at = [](ClassicalModel::Response& r, std::string_view gamma, std::string_view alpha, double v) {
    r[ClassicalModel::response_index(ClassicalModel::hidden_index(gamma), ClassicalModel::hidden_index(alpha))] = v;
  };

  ClassicalModel::Response response{};
  std::array<double, 4> gamma_listing{};
  std::array<double, 4> alpha_listing{};
  // Both strategies answer b = 0 deterministically on (00,01) and (10,11).
  b0_at(response, "00", "01", 1.0);
  b0_at(response, "10", "11", 1.0);

  if (name == "I-optimal") {
    gamma_listing = {0.35428, 0.14571, 0.14571, 0.3543};
    alpha_listing = {0.14717, 0.35282, 0.35282, 0.14719};
    b0_at(response, "11", "10", 0.82842);
  } else if (name == "F-optimal") {
    gamma_listing = {0.26845, 0.23154, 0.23154, 0.26847};
    alpha_listing = {0.23163, 0.26836, 0.26836, 0.23165};
    b0_at(response, "00", "11", 0.85161);
    b0_at(response, "10", "01", 0.85223);
    b0_at(response, "10", "10", 0.14812);
    b0_at(response, "11", "11", 0.14801);
  } else {
    throw ConfigurationError("unknown fixture '" + std::string(name) + "'");
  }

  const auto [gamma, gamma_residual] = normalized(from_listing(gamma_listing));
  const auto [alpha, alpha_residual] = normalized(from_listing(alpha_listing));
  return Fixture{std::string(name), ClassicalModel(gamma, alpha, response), gamma_residual, alpha_residual};
}

}  // namespace ucw
