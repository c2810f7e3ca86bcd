#include "ucw/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ucw/error.hpp"

namespace ucw {
namespace {

constexpr double parity(int x) noexcept { return (x & 1) ? -1.0 : 1.0; }

}  // namespace

Behavior::Behavior(const std::array<double, 8>& p) : p_(p) {
  double total = 0.0;
  for (double v : p_) {
    if (!std::isfinite(v) || v < -kEntryTolerance || v > 1.0 + kEntryTolerance) {
      throw InvalidInputError("behavior entry " + std::to_string(v) + " outside [0,1]");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kNormTolerance) {
    throw InvalidInputError("behavior sums to " + std::to_string(total));
  }
  for (double& v : p_) v = std::clamp(v, 0.0, 1.0);
}

Behavior Behavior::uniform() {
  std::array<double, 8> p;
  p.fill(0.125);
  return Behavior(p);
}

double Behavior::marginal_b(int b) const noexcept {
  return (*this)(0, b, 0) + (*this)(0, b, 1) + (*this)(1, b, 0) + (*this)(1, b, 1);
}

double Behavior::max_abs_diff(const Behavior& other) const noexcept {
  double d = 0.0;
  for (std::size_t i = 0; i < 8; ++i) d = std::max(d, std::abs(p_[i] - other.p_[i]));
  return d;
}

DoData::DoData(const Table& a_do, const Table& c_do) : a_do_(a_do), c_do_(c_do) {
  for (const Table* t : {&a_do_, &c_do_}) {
    for (int b = 0; b < 2; ++b) {
      const auto& col = (*t)[b];
      if (col[0] < -Behavior::kEntryTolerance || col[1] < -Behavior::kEntryTolerance ||
          !std::isfinite(col[0]) || !std::isfinite(col[1])) {
        throw InvalidInputError("negative do-conditional entry");
      }
      if (std::abs(col[0] + col[1] - 1.0) > Behavior::kNormTolerance) {
        throw InvalidInputError("do-conditional for b=" + std::to_string(b) + " is not normalized");
      }
    }
  }
}

DoData DoData::unbiased() {
  const Table half{{{0.5, 0.5}, {0.5, 0.5}}};
  return DoData(half, half);
}

CorrelatorView to_correlators(const Behavior& p) {
  CorrelatorView v;
  for (int b = 0; b < 2; ++b) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double sum = 0.0;
        for (int a = 0; a < 2; ++a) {
          for (int c = 0; c < 2; ++c) sum += parity(a * i + c * j) * p(a, b, c);
        }
        v.at(b, i, j) = sum;
      }
    }
  }
  return v;
}

Behavior from_correlators(const CorrelatorView& v) {
  std::array<double, 8> p{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        double sum = 0.0;
        for (int i = 0; i < 2; ++i) {
          for (int j = 0; j < 2; ++j) sum += parity(a * i + c * j) * v.at(b, i, j);
        }
        sum *= 0.25;
        if (sum < -Behavior::kNormTolerance) {
          throw InvalidCorrelatorError("correlators imply P(" + std::to_string(a) + "," +
                                       std::to_string(b) + "," + std::to_string(c) +
                                       ") = " + std::to_string(sum));
        }
        p[Behavior::index(a, b, c)] = std::max(sum, 0.0);
      }
    }
  }
  return Behavior(p);
}

Behavior subspace_behavior(SubspacePoint pt) {
  if (!(std::abs(pt.r) <= 0.25) || !(std::abs(pt.s) <= 0.25)) {
    throw InvalidInputError("subspace point outside [-1/4, 1/4]^2");
  }
  std::array<double, 8> p{};
  for (int a = 0; a < 2; ++a) {
    for (int c = 0; c < 2; ++c) {
      const double sign = parity(a + c);
      p[Behavior::index(a, 0, c)] = (1.0 + 4.0 * pt.r * sign) / 16.0;
      p[Behavior::index(a, 1, c)] = (3.0 + sign + 4.0 * pt.s * (parity(c) - parity(a))) / 16.0;
    }
  }
  return Behavior(p);
}

}  // namespace ucw
