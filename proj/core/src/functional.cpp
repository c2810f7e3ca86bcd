#include "ucw/functional.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ucw/error.hpp"

namespace ucw {
namespace {

int sign_of(int x) { return (x & 1) ? -1 : 1; }

}  // namespace

std::string coordinate_name(std::size_t coord) {
  if (coord < 8) {
    const int a = static_cast<int>(coord >> 2);
    const int b = static_cast<int>((coord >> 1) & 1);
    const int c = static_cast<int>(coord & 1);
    return "P(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
  }
  if (coord < kCoordinateCount) {
    const bool is_a = coord < 12;
    const std::size_t rel = coord - (is_a ? 8 : 12);
    return std::string(is_a ? "PdoA(" : "PdoC(") + std::to_string(rel & 1) + "|" + std::to_string(rel >> 1) + ")";
  }
  throw ConfigurationError("coordinate index out of range");
}

Coordinates make_coordinates(const Behavior& p, const std::optional<DoData>& d) {
  Coordinates x{};
  for (std::size_t i = 0; i < 8; ++i) x[i] = p.values()[i];
  for (int b = 0; b < 2; ++b) {
    for (int o = 0; o < 2; ++o) {
      x[do_a_coord(o, b)] = d ? d->a_given_do(o, b) : std::numeric_limits<double>::quiet_NaN();
      x[do_c_coord(o, b)] = d ? d->c_given_do(o, b) : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return x;
}

LinearForm LinearForm::constant(Rational c) {
  LinearForm f;
  f.offset_ = c;
  return f;
}

LinearForm LinearForm::coordinate(std::size_t coord, Rational coefficient) {
  LinearForm f;
  f.coefficients_.at(coord) = coefficient;
  return f;
}

LinearForm LinearForm::marginal_b(int b) { return correlator(b, 0, 0); }

LinearForm LinearForm::correlator(int b, int i, int j) {
  LinearForm f;
  for (int a = 0; a < 2; ++a) {
    for (int c = 0; c < 2; ++c) f.coefficients_[prob_coord(a, b, c)] = sign_of(a * i + c * j);
  }
  return f;
}

LinearForm LinearForm::do_expect_a(int b) {
  return coordinate(do_a_coord(0, b)) - coordinate(do_a_coord(1, b));
}

LinearForm LinearForm::do_expect_c(int b) {
  return coordinate(do_c_coord(0, b)) - coordinate(do_c_coord(1, b));
}

bool LinearForm::is_constant() const noexcept {
  for (const auto& c : coefficients_) {
    if (!c.is_zero()) return false;
  }
  return true;
}

bool LinearForm::uses_interventional() const noexcept {
  for (std::size_t i = kFirstDoCoordinate; i < kCoordinateCount; ++i) {
    if (!coefficients_[i].is_zero()) return true;
  }
  return false;
}

bool LinearForm::is_nonnegative_combination() const noexcept {
  if (offset_.sign() < 0) return false;
  for (const auto& c : coefficients_) {
    if (c.sign() < 0) return false;
  }
  return true;
}

double LinearForm::evaluate(const Coordinates& x) const noexcept {
  double sum = offset_.to_double();
  for (std::size_t i = 0; i < kCoordinateCount; ++i) {
    if (!coefficients_[i].is_zero()) sum += coefficients_[i].to_double() * x[i];
  }
  return sum;
}

LinearForm& LinearForm::operator+=(const LinearForm& o) {
  for (std::size_t i = 0; i < kCoordinateCount; ++i) coefficients_[i] += o.coefficients_[i];
  offset_ += o.offset_;
  return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& o) {
  for (std::size_t i = 0; i < kCoordinateCount; ++i) coefficients_[i] -= o.coefficients_[i];
  offset_ -= o.offset_;
  return *this;
}

LinearForm& LinearForm::operator*=(const Rational& s) {
  for (auto& c : coefficients_) c *= s;
  offset_ *= s;
  return *this;
}

std::string LinearForm::to_string() const {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const Rational& c, const std::string& atom) {
    const bool negative = c.sign() < 0;
    const Rational mag = negative ? -c : c;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    if (atom.empty()) {
      os << mag;
    } else {
      if (mag != Rational(1)) os << mag << "*";
      os << atom;
    }
    first = false;
  };
  for (std::size_t i = 0; i < kCoordinateCount; ++i) {
    if (!coefficients_[i].is_zero()) emit(coefficients_[i], coordinate_name(i));
  }
  if (!offset_.is_zero() || first) emit(offset_, "");
  return os.str();
}

FunctionalSpec::FunctionalSpec(std::string name) : name_(std::move(name)) {}

void FunctionalSpec::add_sqrt(Rational coefficient, LinearForm form) {
  if (coefficient.sign() <= 0) throw SemanticError("sqrt coefficients must be positive");
  if (!form.is_nonnegative_combination()) {
    throw SemanticError("sqrt argument '" + form.to_string() +
                        "' is not a nonnegative combination of probabilities");
  }
  sqrt_terms_.push_back({coefficient, std::move(form)});
}

void FunctionalSpec::add_abs(Rational coefficient, LinearForm form) {
  abs_terms_.push_back({coefficient, std::move(form)});
}

void FunctionalSpec::add_linear(Rational coefficient, LinearForm form) {
  linear_terms_.push_back({coefficient, std::move(form)});
}

bool FunctionalSpec::uses_interventional() const noexcept {
  for (const auto* list : {&sqrt_terms_, &abs_terms_, &linear_terms_}) {
    for (const auto& t : *list) {
      if (t.form.uses_interventional()) return true;
    }
  }
  return false;
}

bool FunctionalSpec::is_certifiable() const noexcept {
  for (const auto& t : abs_terms_) {
    if (t.coefficient.sign() > 0) return false;
  }
  return true;
}

WitnessValue evaluate(const FunctionalSpec& spec, const Behavior& p, const std::optional<DoData>& d) {
  if (spec.uses_interventional() && !d) {
    throw ConfigurationError("witness '" + spec.name() + "' needs interventional data");
  }
  const Coordinates x = make_coordinates(p, d);
  WitnessValue out;
  auto record = [&](TermKind kind, std::size_t i, double arg, double contribution) {
    out.terms.push_back({kind, i, arg, contribution});
    out.value += contribution;
  };
  for (std::size_t i = 0; i < spec.sqrt_terms().size(); ++i) {
    const auto& t = spec.sqrt_terms()[i];
    double y = t.form.evaluate(x);
    if (y < -kSqrtClampTolerance) {
      throw InvalidInputError("sqrt argument " + std::to_string(y) + " is negative");
    }
    y = std::max(y, 0.0);
    record(TermKind::Sqrt, i, y, t.coefficient.to_double() * std::sqrt(y));
  }
  for (std::size_t i = 0; i < spec.abs_terms().size(); ++i) {
    const auto& t = spec.abs_terms()[i];
    const double arg = t.form.evaluate(x);
    record(TermKind::Abs, i, arg, t.coefficient.to_double() * std::abs(arg));
  }
  for (std::size_t i = 0; i < spec.linear_terms().size(); ++i) {
    const auto& t = spec.linear_terms()[i];
    const double arg = t.form.evaluate(x);
    record(TermKind::Linear, i, arg, t.coefficient.to_double() * arg);
  }
  return out;
}

double evaluate_coordinates(const FunctionalSpec& spec, const Coordinates& x) {
  double value = 0.0;
  for (const auto& t : spec.sqrt_terms()) {
    const double y = t.form.evaluate(x);
    if (y < -kSqrtClampTolerance) throw InvalidInputError("sqrt argument is negative");
    value += t.coefficient.to_double() * std::sqrt(std::max(y, 0.0));
  }
  for (const auto& t : spec.abs_terms()) value += t.coefficient.to_double() * std::abs(t.form.evaluate(x));
  for (const auto& t : spec.linear_terms()) value += t.coefficient.to_double() * t.form.evaluate(x);
  return value;
}

FunctionalSpec builtin(std::string_view name) {
  using LF = LinearForm;
  const Rational quarter(1, 4);
  const bool is_f = name == "F";
  if (name != "I" && !is_f) throw ConfigurationError("unknown builtin witness '" + std::string(name) + "'");

  FunctionalSpec spec{std::string(name)};
  spec.add_sqrt(2, LF::coordinate(prob_coord(0, 0, 0)));
  spec.add_sqrt(2, LF::coordinate(prob_coord(1, 0, 1)));
  spec.add_sqrt(is_f ? 4 : 3, LF::coordinate(prob_coord(1, 1, 0)));

  const Rational heavy = -18;
  const Rational off_diag = is_f ? Rational(-1) : Rational(-18);
  const Rational diag = is_f ? Rational(-1) : Rational(-4);

  spec.add_abs(heavy, LF::marginal_b(0) - LF::constant(quarter));
  spec.add_abs(off_diag, LF::coordinate(prob_coord(0, 1, 1)) + LF::coordinate(prob_coord(1, 1, 0)) - LF::constant(quarter));
  spec.add_abs(diag, LF::coordinate(prob_coord(0, 1, 0)) - LF::constant(quarter));
  spec.add_abs(diag, LF::coordinate(prob_coord(1, 1, 1)) - LF::constant(quarter));
  spec.add_abs(diag, LF::correlator(1, 1, 1) - LF::constant(quarter));
  spec.add_abs(-1, LF::correlator(1, 1, 0) + LF::correlator(1, 0, 1));
  spec.add_abs(-1, LF::correlator(0, 1, 0));
  spec.add_abs(-1, LF::correlator(0, 0, 1));
  if (is_f) {
    for (int b = 0; b < 2; ++b) {
      spec.add_abs(-1, LF::do_expect_a(b));
      spec.add_abs(-1, LF::do_expect_c(b));
    }
  }
  return spec;
}

}  // namespace ucw
