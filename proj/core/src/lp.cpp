#include "ucw/lp.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "ucw/error.hpp"

namespace ucw {

LPProblem::LPProblem(std::size_t variables)
    : objective_(variables, 0.0), lower_(variables, 0.0), upper_(variables, kInfinity) {}

void LPProblem::set_objective(std::size_t var, double coefficient) { objective_.at(var) = coefficient; }

void LPProblem::set_bounds(std::size_t var, double lower, double upper) {
  if (!std::isfinite(lower)) throw ConfigurationError("LP lower bounds must be finite");
  lower_.at(var) = lower;
  upper_.at(var) = upper;
}

void LPProblem::add_row(std::vector<double> coefficients, RowSense sense, double rhs) {
  if (coefficients.size() != objective_.size()) throw ConfigurationError("LP row width does not match variable count");
  rows_.push_back({std::move(coefficients), sense, rhs});
}

void LPProblem::add_row(const std::vector<std::pair<std::size_t, double>>& terms, RowSense sense, double rhs) {
  std::vector<double> row(objective_.size(), 0.0);
  for (const auto& [var, coef] : terms) row.at(var) += coef;
  add_row(std::move(row), sense, rhs);
}

std::string to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
  }
  return "?";
}

namespace {

// Bounded-variable revised simplex. Column j < n is structural; column
// n + i is the activity of row i (a_i.x - s_i = 0), bounded by the row's
// sense; column n + m + i is an artificial with coefficient sigma_i on
// row i, used only to start phase 1.
class Simplex {
 public:
  Simplex(const LPProblem& p, const LPOptions& opt)
      : p_(p), opt_(opt), n_(p.variable_count()), m_(p.row_count()), total_(n_ + 2 * m_) {
    lower_.resize(total_);
    upper_.resize(total_);
    cost_.assign(total_, 0.0);
    sigma_.assign(m_, 1.0);
    for (std::size_t j = 0; j < n_; ++j) {
      lower_[j] = p.lower()[j];
      upper_[j] = p.upper()[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& row = p.rows()[i];
      lower_[n_ + i] = row.sense == RowSense::LessEqual ? -kInfinity : row.rhs;
      upper_[n_ + i] = row.sense == RowSense::GreaterEqual ? kInfinity : row.rhs;
      lower_[n_ + m_ + i] = 0.0;
      upper_[n_ + m_ + i] = kInfinity;
    }
    a_.resize(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        a_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p.rows()[i].coefficients[j];
      }
    }
  }

  LPResult solve() {
    LPResult out;
    for (std::size_t j = 0; j < n_; ++j) {
      if (upper_[j] < lower_[j] - opt_.feasibility_tolerance) return out;
      upper_[j] = std::max(upper_[j], lower_[j]);
    }
    // Structurals start at their lower bounds; each row gets its activity
    // column as basic when that is within bounds, otherwise an artificial.
    x_.assign(total_, 0.0);
    state_.assign(total_, State::AtLower);
    for (std::size_t j = 0; j < n_; ++j) x_[j] = lower_[j];
    basis_.resize(m_);
    bool need_phase1 = false;
    for (std::size_t i = 0; i < m_; ++i) {
      double act = 0.0;
      const auto& a = p_.rows()[i].coefficients;
      for (std::size_t j = 0; j < n_; ++j) act += a[j] * x_[j];
      const std::size_t s = n_ + i;
      const std::size_t art = n_ + m_ + i;
      if (act >= lower_[s] - opt_.feasibility_tolerance && act <= upper_[s] + opt_.feasibility_tolerance) {
        basis_[i] = s;
        x_[s] = act;
        state_[s] = State::Basic;
        upper_[art] = 0.0;
        state_[art] = State::AtLower;
      } else {
        const bool above = act > upper_[s];
        x_[s] = above ? upper_[s] : lower_[s];
        state_[s] = above ? State::AtUpper : State::AtLower;
        // a.x - s + sigma * art = 0  =>  art = (s - a.x) / sigma >= 0
        sigma_[i] = x_[s] - act >= 0 ? 1.0 : -1.0;
        x_[art] = std::abs(x_[s] - act);
        basis_[i] = art;
        state_[art] = State::Basic;
        need_phase1 = true;
      }
    }
    refactor();

    if (need_phase1) {
      for (std::size_t i = 0; i < m_; ++i) cost_[n_ + m_ + i] = -1.0;
      if (run(out.iterations) == Outcome::Stalled) refactor();
      double infeas = 0.0;
      for (std::size_t i = 0; i < m_; ++i) infeas += std::max(x_[n_ + m_ + i], 0.0);
      if (infeas > 1e-7) return out;
      for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t art = n_ + m_ + i;
        upper_[art] = 0.0;
        if (state_[art] != State::Basic) {
          x_[art] = 0.0;
          state_[art] = State::AtLower;
        }
      }
    }
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (std::size_t j = 0; j < n_; ++j) cost_[j] = p_.objective()[j];
    const Outcome phase2 = run(out.iterations);
    if (phase2 == Outcome::Unbounded) {
      out.status = LPStatus::Unbounded;
      return out;
    }
    out.stalled = phase2 == Outcome::Stalled;
    out.status = LPStatus::Optimal;
    out.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    for (std::size_t j = 0; j < n_; ++j) out.x[j] = std::clamp(out.x[j], lower_[j], upper_[j]);
    for (std::size_t j = 0; j < n_; ++j) out.value += p_.objective()[j] * out.x[j];
    out.dual_bound = std::max(out.value, lagrangian_bound());
    return out;
  }

 private:
  enum class State { Basic, AtLower, AtUpper };

  const LPProblem& p_;
  const LPOptions& opt_;
  std::size_t n_, m_, total_;
  std::vector<double> lower_, upper_, cost_, sigma_, x_;
  std::vector<State> state_;
  std::vector<std::size_t> basis_;
  Eigen::MatrixXd a_;  // structural block, column-major
  Eigen::MatrixXd binv_;
  Eigen::RowVectorXd pivot_row_;
  std::size_t since_refactor_ = 0;

  // For any multipliers y, c.x = sum_j (c_j - y.A_j) z_j over structural
  // and activity columns, since A x - s = 0. Maximizing each term over its
  // box gives a bound on the LP optimum that does not rely on the final
  // basis being exactly optimal. Activities are boxed by the structural
  // bounds as well as by their row sense.
  double lagrangian_bound() {
    if (since_refactor_ > 0) refactor();
    Eigen::VectorXd cb(static_cast<Eigen::Index>(m_));
    for (std::size_t k = 0; k < m_; ++k) cb[static_cast<Eigen::Index>(k)] = cost_[basis_[k]];
    const Eigen::VectorXd y = binv_.transpose() * cb;
    const Eigen::VectorXd ay = a_.transpose() * y;
    double bound = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      const double d = cost_[j] - ay[static_cast<Eigen::Index>(j)];
      bound += d > 0 ? d * upper_[j] : d * lower_[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      double lo = 0.0, hi = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        const double a = a_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        lo += a > 0 ? a * lower_[j] : a * upper_[j];
        hi += a > 0 ? a * upper_[j] : a * lower_[j];
      }
      lo = std::max(lo, lower_[n_ + i]);
      hi = std::min(hi, upper_[n_ + i]);
      const double d = y[static_cast<Eigen::Index>(i)];  // cost 0 minus y.(-e_i)
      bound += d > 0 ? d * hi : d * lo;
    }
    return std::isfinite(bound) ? bound : kInfinity;
  }

  // Column j of [A | -I | diag(sigma)] into dense out.
  void column(std::size_t j, Eigen::VectorXd& out) const {
    out.setZero(static_cast<Eigen::Index>(m_));
    if (j < n_) {
      out = a_.col(static_cast<Eigen::Index>(j));
    } else if (j < n_ + m_) {
      out[static_cast<Eigen::Index>(j - n_)] = -1.0;
    } else {
      out[static_cast<Eigen::Index>(j - n_ - m_)] = sigma_[j - n_ - m_];
    }
  }

  // y . column j, with the structural part precomputed as ay = A^T y.
  double column_dot(std::size_t j, const Eigen::VectorXd& y, const Eigen::VectorXd& ay) const {
    if (j < n_) return ay[static_cast<Eigen::Index>(j)];
    if (j < n_ + m_) return -y[static_cast<Eigen::Index>(j - n_)];
    return sigma_[j - n_ - m_] * y[static_cast<Eigen::Index>(j - n_ - m_)];
  }

  // Basic slack and artificial columns are signed unit vectors, so with
  // rows S (no basic unit column) and R (one), the basis is
  //   [ A_SJ  0 ]
  //   [ A_RJ  D ]
  // and only A_SJ, whose size is the number of basic structurals, needs
  // factoring.
  void invert_basis() {
    const auto m = static_cast<Eigen::Index>(m_);
    std::vector<std::size_t> unit_pos(m_, m_);  // row -> basis position
    std::vector<std::size_t> structural;         // basis positions
    for (std::size_t k = 0; k < m_; ++k) {
      const std::size_t j = basis_[k];
      if (j < n_) {
        structural.push_back(k);
        continue;
      }
      const std::size_t row = j < n_ + m_ ? j - n_ : j - n_ - m_;
      if (unit_pos[row] != m_) {
        // Two unit columns on one row: singular basis, let the dense path report it.
        invert_dense();
        return;
      }
      unit_pos[row] = k;
    }
    std::vector<std::size_t> rows_s;
    for (std::size_t i = 0; i < m_; ++i) {
      if (unit_pos[i] == m_) rows_s.push_back(i);
    }
    const auto k = static_cast<Eigen::Index>(structural.size());
    Eigen::MatrixXd ass(k, k);
    for (Eigen::Index c = 0; c < k; ++c) {
      const auto j = static_cast<Eigen::Index>(basis_[structural[static_cast<std::size_t>(c)]]);
      for (Eigen::Index r = 0; r < k; ++r) ass(r, c) = a_(static_cast<Eigen::Index>(rows_s[static_cast<std::size_t>(r)]), j);
    }
    Eigen::MatrixXd inv_s = k > 0 ? Eigen::MatrixXd(Eigen::PartialPivLU<Eigen::MatrixXd>(ass).inverse()) : Eigen::MatrixXd(0, 0);

    binv_.setZero(m, m);
    for (Eigen::Index c = 0; c < k; ++c) {
      const auto pos = static_cast<Eigen::Index>(structural[static_cast<std::size_t>(c)]);
      for (Eigen::Index r = 0; r < k; ++r) binv_(pos, static_cast<Eigen::Index>(rows_s[static_cast<std::size_t>(r)])) = inv_s(c, r);
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t pos = unit_pos[i];
      if (pos == m_) continue;
      const std::size_t j = basis_[pos];
      const double d = j < n_ + m_ ? -1.0 : sigma_[i];
      const auto ipos = static_cast<Eigen::Index>(pos);
      binv_(ipos, static_cast<Eigen::Index>(i)) = 1.0 / d;
      // -(1/d) * A_iJ * inv_s over the S columns
      for (Eigen::Index r = 0; r < k; ++r) {
        double v = 0.0;
        for (Eigen::Index c = 0; c < k; ++c) {
          v += a_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(basis_[structural[static_cast<std::size_t>(c)]])) * inv_s(c, r);
        }
        binv_(ipos, static_cast<Eigen::Index>(rows_s[static_cast<std::size_t>(r)])) = -v / d;
      }
    }
  }

  void invert_dense() {
    const auto m = static_cast<Eigen::Index>(m_);
    Eigen::MatrixXd b(m, m);
    Eigen::VectorXd col;
    for (std::size_t k = 0; k < m_; ++k) {
      column(basis_[k], col);
      b.col(static_cast<Eigen::Index>(k)) = col;
    }
    binv_ = Eigen::PartialPivLU<Eigen::MatrixXd>(b).inverse();
  }

  void refactor() {
    invert_basis();
    Eigen::VectorXd col;
    // x_B = -B^-1 (N x_N)
    Eigen::VectorXd xn = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
    for (std::size_t j = 0; j < n_; ++j) {
      if (state_[j] != State::Basic) xn[static_cast<Eigen::Index>(j)] = x_[j];
    }
    Eigen::VectorXd rhs = -(a_ * xn);
    for (std::size_t j = n_; j < total_; ++j) {
      if (state_[j] == State::Basic || x_[j] == 0.0) continue;
      column(j, col);
      rhs -= x_[j] * col;
    }
    const Eigen::VectorXd xb = binv_ * rhs;
    for (std::size_t k = 0; k < m_; ++k) x_[basis_[k]] = xb[static_cast<Eigen::Index>(k)];
    since_refactor_ = 0;
  }

  enum class Outcome { Optimal, Unbounded, Stalled };

  Outcome run(std::size_t& iterations) {
    const double dtol = opt_.optimality_tolerance;
    const double ptol = 1e-9;
    const double harris = opt_.feasibility_tolerance;
    // Pivots that fail to raise the objective, whether degenerate or
    // undone by round-off, switch pricing to Bland's rule and eventually
    // end the phase.
    std::size_t stall = 0;
    bool bland = false;
    Eigen::VectorXd cb(static_cast<Eigen::Index>(m_));
    Eigen::VectorXd w;
    for (;;) {
      if (iterations >= opt_.iteration_cap) {
        throw SolverError("simplex exceeded the iteration cap of " + std::to_string(opt_.iteration_cap));
      }
      if (since_refactor_ >= 50) refactor();
      for (std::size_t k = 0; k < m_; ++k) cb[static_cast<Eigen::Index>(k)] = cost_[basis_[k]];
      const Eigen::VectorXd y = binv_.transpose() * cb;
      const Eigen::VectorXd ay = a_.transpose() * y;

      // Pricing.
      bland = bland || stall >= opt_.degenerate_switch;
      if (stall >= opt_.stall_limit) return Outcome::Stalled;
      std::size_t enter = total_;
      double best = 0.0;
      double dir = 0.0;
      for (std::size_t j = 0; j < total_; ++j) {
        if (state_[j] == State::Basic || upper_[j] - lower_[j] <= 0.0) continue;
        const double d = cost_[j] - column_dot(j, y, ay);
        double gain = 0.0;
        double dj = 0.0;
        if (state_[j] == State::AtLower && d > dtol) {
          gain = d;
          dj = 1.0;
        } else if (state_[j] == State::AtUpper && d < -dtol) {
          gain = -d;
          dj = -1.0;
        }
        if (gain > best) {
          best = gain;
          enter = j;
          dir = dj;
          if (bland) break;
        }
      }
      if (enter == total_) {
        // Confirm optimality against fresh factors.
        if (since_refactor_ == 0) return Outcome::Optimal;
        refactor();
        continue;
      }

      if (enter < n_) {
        w.noalias() = binv_ * a_.col(static_cast<Eigen::Index>(enter));
      } else {
        const std::size_t row = enter < n_ + m_ ? enter - n_ : enter - n_ - m_;
        const double coef = enter < n_ + m_ ? -1.0 : sigma_[row];
        w = coef * binv_.col(static_cast<Eigen::Index>(row));
      }

      // Harris two-pass ratio test. Basic k moves at rate -dir * w_k.
      double relaxed = kInfinity;
      for (std::size_t k = 0; k < m_; ++k) {
        const double rate = -dir * w[static_cast<Eigen::Index>(k)];
        if (std::abs(rate) <= ptol) continue;
        const std::size_t b = basis_[k];
        const double room = rate < 0 ? x_[b] - lower_[b] : upper_[b] - x_[b];
        if (!std::isfinite(room)) continue;
        relaxed = std::min(relaxed, (std::max(room, 0.0) + harris) / std::abs(rate));
      }
      std::size_t leave = m_;
      double step = kInfinity;
      double best_pivot = 0.0;
      for (std::size_t k = 0; k < m_; ++k) {
        const double rate = -dir * w[static_cast<Eigen::Index>(k)];
        if (std::abs(rate) <= ptol) continue;
        const std::size_t b = basis_[k];
        const double room = rate < 0 ? x_[b] - lower_[b] : upper_[b] - x_[b];
        if (!std::isfinite(room)) continue;
        const double ratio = std::max(room, 0.0) / std::abs(rate);
        if (ratio > relaxed) continue;
        const bool take = leave == m_ || (bland ? basis_[k] < basis_[leave] : std::abs(rate) > best_pivot);
        if (take) {
          leave = k;
          step = ratio;
          best_pivot = std::abs(rate);
        }
      }
      const double flip = upper_[enter] - lower_[enter];
      if (leave == m_ && !std::isfinite(flip)) return Outcome::Unbounded;

      ++iterations;
      if (flip <= step) {
        // Bound flip, basis unchanged.
        for (std::size_t k = 0; k < m_; ++k) x_[basis_[k]] -= flip * dir * w[static_cast<Eigen::Index>(k)];
        x_[enter] = dir > 0 ? upper_[enter] : lower_[enter];
        state_[enter] = dir > 0 ? State::AtUpper : State::AtLower;
        stall = best * flip > 1e-12 ? 0 : stall + 1;
        continue;
      }

      stall = best * step > 1e-12 ? 0 : stall + 1;
      for (std::size_t k = 0; k < m_; ++k) x_[basis_[k]] -= step * dir * w[static_cast<Eigen::Index>(k)];
      x_[enter] += step * dir;
      const std::size_t out = basis_[leave];
      const double rate = -dir * w[static_cast<Eigen::Index>(leave)];
      x_[out] = rate < 0 ? lower_[out] : upper_[out];
      state_[out] = rate < 0 ? State::AtLower : State::AtUpper;
      basis_[leave] = enter;
      state_[enter] = State::Basic;

      // Product-form update of the explicit inverse.
      const auto r = static_cast<Eigen::Index>(leave);
      const double pivot = w[r];
      pivot_row_ = binv_.row(r) / pivot;
      w[r] -= 1.0;
      binv_.noalias() -= w * pivot_row_;
      ++since_refactor_;
    }
  }
};

}  // namespace

LPResult solve_lp(const LPProblem& problem, const LPOptions& opt) {
  if (problem.row_count() == 0) {
    // Each variable sits at whichever bound its objective prefers.
    LPResult out;
    out.status = LPStatus::Optimal;
    out.x = problem.lower();
    for (std::size_t j = 0; j < problem.variable_count(); ++j) {
      if (problem.upper()[j] < problem.lower()[j] - opt.feasibility_tolerance) return {LPStatus::Infeasible, {}, 0.0, 0};
      if (problem.objective()[j] > 0) {
        if (!std::isfinite(problem.upper()[j])) return {LPStatus::Unbounded, {}, 0.0, 0};
        out.x[j] = problem.upper()[j];
      }
      out.value += problem.objective()[j] * out.x[j];
    }
    out.dual_bound = out.value;
    return out;
  }
  return Simplex(problem, opt).solve();
}

}  // namespace ucw
