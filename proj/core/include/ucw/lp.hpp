#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace ucw {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { LessEqual, GreaterEqual, Equal };

struct LPRow {
  std::vector<double> coefficients;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

// maximize  c.x  subject to rows and lower <= x <= upper.
// Lower bounds must be finite; upper bounds may be kInfinity.
class LPProblem {
 public:
  explicit LPProblem(std::size_t variables);

  std::size_t variable_count() const noexcept { return objective_.size(); }
  std::size_t row_count() const noexcept { return rows_.size(); }

  void set_objective(std::size_t var, double coefficient);
  void set_bounds(std::size_t var, double lower, double upper);
  void add_row(std::vector<double> coefficients, RowSense sense, double rhs);
  // Sparse convenience: pairs of (variable, coefficient).
  void add_row(const std::vector<std::pair<std::size_t, double>>& terms, RowSense sense, double rhs);

  const std::vector<double>& objective() const noexcept { return objective_; }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  const std::vector<LPRow>& rows() const noexcept { return rows_; }

 private:
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<LPRow> rows_;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

std::string to_string(LPStatus s);

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  std::vector<double> x;
  double value = 0.0;
  // Valid upper bound on the optimum (>= value), from the final duals.
  double dual_bound = 0.0;
  std::size_t iterations = 0;
  // Phase 2 stopped after stall_limit pivots without progress; x is
  // feasible and dual_bound still holds.
  bool stalled = false;
};

struct LPOptions {
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  std::size_t iteration_cap = 100000;
  // Pivots without objective progress before switching to Bland's rule,
  // and before giving up on the phase.
  std::size_t degenerate_switch = 50;
  std::size_t stall_limit = 1000;
};

// Two-phase bounded-variable revised simplex on dense data. Throws
// SolverError when the iteration cap is exceeded.
LPResult solve_lp(const LPProblem& problem, const LPOptions& options = {});

}  // namespace ucw
