#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ucw/behavior.hpp"
#include "ucw/rational.hpp"

namespace ucw {

// Evaluation coordinates: the 8 observational probabilities in (a,b,c)
// lexicographic order, then P(a|do b) at 8 + 2b + a and P(c|do b) at
// 12 + 2b + c.
inline constexpr std::size_t kCoordinateCount = 16;
inline constexpr std::size_t kFirstDoCoordinate = 8;

constexpr std::size_t prob_coord(int a, int b, int c) noexcept { return Behavior::index(a, b, c); }
constexpr std::size_t do_a_coord(int a, int b) noexcept { return static_cast<std::size_t>(8 + 2 * b + a); }
constexpr std::size_t do_c_coord(int c, int b) noexcept { return static_cast<std::size_t>(12 + 2 * b + c); }

std::string coordinate_name(std::size_t coord);

using Coordinates = std::array<double, kCoordinateCount>;

// Observational coordinates from p, do coordinates from d when present
// (NaN otherwise).
Coordinates make_coordinates(const Behavior& p, const std::optional<DoData>& d);

// Exact affine form over the 16 coordinates.
class LinearForm {
 public:
  LinearForm() = default;

  static LinearForm constant(Rational c);
  static LinearForm coordinate(std::size_t coord, Rational coefficient = 1);

  // Correlator sugar, expanded to probability coordinates.
  static LinearForm marginal_b(int b);
  static LinearForm correlator(int b, int i, int j);
  static LinearForm do_expect_a(int b);
  static LinearForm do_expect_c(int b);

  const Rational& coefficient(std::size_t coord) const { return coefficients_.at(coord); }
  const Rational& offset() const noexcept { return offset_; }

  bool is_constant() const noexcept;
  bool uses_interventional() const noexcept;
  // True when every coefficient and the offset are >= 0, so the form is
  // nonnegative on any valid data.
  bool is_nonnegative_combination() const noexcept;

  double evaluate(const Coordinates& x) const noexcept;

  LinearForm& operator+=(const LinearForm& o);
  LinearForm& operator-=(const LinearForm& o);
  LinearForm& operator*=(const Rational& s);
  friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
  friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
  friend LinearForm operator*(LinearForm a, const Rational& s) { return a *= s; }
  friend LinearForm operator*(const Rational& s, LinearForm a) { return a *= s; }
  friend bool operator==(const LinearForm&, const LinearForm&) = default;

  // "P(0,0,0) - P(1,1,1) + 1/4"
  std::string to_string() const;

 private:
  std::array<Rational, kCoordinateCount> coefficients_{};
  Rational offset_{};
};

struct FunctionalTerm {
  Rational coefficient;
  LinearForm form;
  friend bool operator==(const FunctionalTerm&, const FunctionalTerm&) = default;
};

enum class TermKind { Sqrt, Abs, Linear };

// Concave witness:  sum b_i sqrt(y_i) + sum c_m |x_m| + sum l_k L_k
class FunctionalSpec {
 public:
  explicit FunctionalSpec(std::string name = {});

  // Throws SemanticError unless coefficient > 0 and form is a nonnegative
  // combination of coordinates.
  void add_sqrt(Rational coefficient, LinearForm form);
  void add_abs(Rational coefficient, LinearForm form);
  void add_linear(Rational coefficient, LinearForm form);

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  const std::vector<FunctionalTerm>& sqrt_terms() const noexcept { return sqrt_terms_; }
  const std::vector<FunctionalTerm>& abs_terms() const noexcept { return abs_terms_; }
  const std::vector<FunctionalTerm>& linear_terms() const noexcept { return linear_terms_; }

  bool uses_interventional() const noexcept;
  // Concave in the coordinates: every abs coefficient is <= 0.
  bool is_certifiable() const noexcept;

  friend bool operator==(const FunctionalSpec&, const FunctionalSpec&) = default;

 private:
  std::string name_;
  std::vector<FunctionalTerm> sqrt_terms_;
  std::vector<FunctionalTerm> abs_terms_;
  std::vector<FunctionalTerm> linear_terms_;
};

struct TermContribution {
  TermKind kind;
  std::size_t index;  // position within its kind
  double argument;    // value of the inner linear form
  double contribution;
};

struct WitnessValue {
  double value = 0.0;
  std::vector<TermContribution> terms;
};

inline constexpr double kSqrtClampTolerance = 1e-12;

// Throws ConfigurationError when the witness needs interventional data and d
// is empty; InvalidInputError when a sqrt argument is below -1e-12.
WitnessValue evaluate(const FunctionalSpec& spec, const Behavior& p, const std::optional<DoData>& d = std::nullopt);
double evaluate_coordinates(const FunctionalSpec& spec, const Coordinates& x);

// The two shipped witnesses, "I" (observational) and "F" (with
// interventional terms).
FunctionalSpec builtin(std::string_view name);

// Stored classical bounds for the builtin witnesses.
inline constexpr double kStoredBoundI = 2.562278895;
inline constexpr double kStoredBoundF = 3.000357;

}  // namespace ucw
