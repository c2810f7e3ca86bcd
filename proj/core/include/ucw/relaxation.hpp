#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ucw/classical.hpp"
#include "ucw/functional.hpp"
#include "ucw/lp.hpp"

namespace ucw {

// Box over the 8 source coordinates: p_gamma at 0..3, p_alpha at 4..7.
struct SourceBox {
  std::array<double, 8> lower{};
  std::array<double, 8> upper{1, 1, 1, 1, 1, 1, 1, 1};

  static SourceBox unit() { return {}; }
  static SourceBox point(const ClassicalModel::Source& p_gamma, const ClassicalModel::Source& p_alpha);

  double width(std::size_t i) const { return upper[i] - lower[i]; }
  bool contains(const ClassicalModel::Source& p_gamma, const ClassicalModel::Source& p_alpha,
                double slack = 0.0) const;
  // Shrinks bounds implied by each source summing to one. Returns false
  // when the box holds no distribution.
  bool tighten();
};

struct RelaxationNode {
  SourceBox box;
  double upper_bound = kInfinity;  // parent's bound until solved
  int depth = 0;
  // Tangent abscissas per sqrt term beyond the fixed ones.
  std::vector<std::vector<double>> extra_cuts;
};

// LP column layout of the relaxation.
struct RelaxationLayout {
  static constexpr std::size_t kGamma = 0;
  static constexpr std::size_t kAlpha = 4;
  static constexpr std::size_t kQ = 8;    // q(gamma, alpha) at kQ + 4*gamma + alpha
  static constexpr std::size_t kW0 = 24;  // mass of q routed to b = 0
  static constexpr std::size_t kLifted = 40;

  std::size_t abs_begin = kLifted;
  std::size_t sqrt_begin = kLifted;
  std::size_t variables = kLifted;

  // Each coordinate as a sparse combination of LP columns.
  std::array<std::vector<std::pair<std::size_t, double>>, kCoordinateCount> coordinate_terms;
};

struct Relaxation {
  LPProblem lp{0};
  RelaxationLayout layout;
  double objective_offset = 0.0;  // constant part of the witness
  std::vector<double> sqrt_arg_max;  // upper bound on each sqrt argument
};

// Fixed tangent abscissas, as fractions of each sqrt argument's range.
inline constexpr std::array<double, 6> kFixedTangents{1.0 / 64, 1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0};
inline constexpr std::size_t kMaxCutsPerTerm = 12;

// Throws ConfigurationError for witnesses with positive abs coefficients.
// An empty box (after tightening) throws InvalidInputError; callers prune.
Relaxation relax_node(const FunctionalSpec& spec, const RelaxationNode& node);

// Argument of sqrt term k at an LP solution.
double sqrt_argument(const FunctionalSpec& spec, const Relaxation& r, std::size_t k, const std::vector<double>& x);

struct NodeSolution {
  LPStatus status = LPStatus::Infeasible;
  double upper_bound = -kInfinity;
  std::vector<double> x;
  std::vector<std::vector<double>> extra_cuts;  // cuts in force at the end
  int rounds = 0;
};

// Solves the node relaxation, adding tangent cuts at violated points until
// no sqrt surrogate exceeds its true value by more than cut_tolerance or
// every term holds kMaxCutsPerTerm cuts.
NodeSolution solve_node(const FunctionalSpec& spec, RelaxationNode node, double cut_tolerance = 1e-7);

// Classical model read off an LP solution: sources from the p columns,
// Bob's response from w0 / q.
ClassicalModel model_from_solution(const std::vector<double>& x);

// Exact best response for fixed sources: maximizes over Bob's response
// with the sources frozen. Returns the model and its exact value.
// warm_cuts seeds extra tangent abscissas per sqrt term and receives the
// ones in force at the end.
struct BestResponse {
  ClassicalModel model;
  double value;
};
BestResponse best_response(const FunctionalSpec& spec, const ClassicalModel::Source& p_gamma,
                           const ClassicalModel::Source& p_alpha,
                           std::vector<std::vector<double>>* warm_cuts = nullptr);

// Witness coordinates for raw (unvalidated) model parameters.
Coordinates raw_coordinates(const ClassicalModel::Source& p_gamma, const ClassicalModel::Source& p_alpha,
                            const ClassicalModel::Response& p_b0);

Coordinates model_coordinates(const ClassicalModel& m);
double evaluate_model(const FunctionalSpec& spec, const ClassicalModel& m);

}  // namespace ucw
