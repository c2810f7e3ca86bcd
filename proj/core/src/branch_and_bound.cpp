#include "ucw/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <mutex>
#include <queue>
#include <thread>
#include <vector>

#include "ucw/error.hpp"
#include "ucw/local_search.hpp"

namespace ucw {
namespace {

struct Entry {
  RelaxationNode node;
  NodeSolution solution;
  std::size_t order;
};

struct ByBound {
  bool operator()(const Entry& a, const Entry& b) const {
    if (a.solution.upper_bound != b.solution.upper_bound) return a.solution.upper_bound < b.solution.upper_bound;
    return a.order > b.order;
  }
};

constexpr double kLeafWidth = 1e-10;

class Search {
 public:
  Search(const FunctionalSpec& spec, const BranchAndBoundOptions& opt)
      : spec_(spec), opt_(opt), start_(std::chrono::steady_clock::now()) {}

  BoundCertificate run() {
    if (!spec_.is_certifiable()) {
      throw ConfigurationError("witness '" + spec_.name() + "' has a positive abs coefficient and cannot be certified");
    }
    if (opt_.gap <= 0) throw ConfigurationError("gap target must be positive");

    LocalSearchOptions ls;
    ls.starts = std::max(1, opt_.local_search_starts);
    ls.seed = opt_.seed;
    offer(local_search(spec_, ls));

    RelaxationNode root;
    root.box = SourceBox::unit();
    NodeSolution sol = solve_node(spec_, root);
    observe(root, sol);
    if (sol.status == LPStatus::Optimal) {
      offer_from_solution(sol);
      frontier_.push({root, std::move(sol), counter_++});
    }

    const int workers = std::max(1, opt_.workers);
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < workers; ++i) pool.emplace_back([this] { work(); });
      for (auto& t : pool) t.join();
    }

    BoundCertificate cert;
    cert.witness = spec_.name();
    cert.lower = lower_;
    cert.model = incumbent_;
    cert.upper = std::max({lower_, settled_upper_, frontier_.empty() ? -kInfinity : frontier_.top().solution.upper_bound});
    cert.gap = cert.upper - cert.lower;
    cert.nodes = nodes_;
    cert.seconds = elapsed();
    cert.termination = termination_.empty() ? "exhausted" : termination_;
    cert.converged = cert.termination == "gap" || cert.termination == "exhausted";
    return cert;
  }

 private:
  const FunctionalSpec& spec_;
  const BranchAndBoundOptions& opt_;
  std::chrono::steady_clock::time_point start_;

  std::mutex mutex_;
  std::condition_variable cv_;
  std::priority_queue<Entry, std::vector<Entry>, ByBound> frontier_;
  std::vector<double> in_flight_;
  std::size_t counter_ = 0;
  std::size_t nodes_ = 0;
  double lower_ = -kInfinity;
  std::optional<ClassicalModel> incumbent_;
  // Largest bound among nodes removed without branching (pruned or leaves).
  double settled_upper_ = -kInfinity;
  std::string termination_;

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  void observe(const RelaxationNode& n, const NodeSolution& s) {
    if (opt_.node_observer) opt_.node_observer(n, s);
  }

  // Caller must hold the lock when workers > 1.
  void offer(LocalSearchResult r) {
    if (r.value > lower_) {
      lower_ = r.value;
      incumbent_ = std::move(r.model);
    }
  }

  void offer_from_solution(const NodeSolution& s) {
    const ClassicalModel m = model_from_solution(s.x);
    BestResponse br = best_response(spec_, m.p_gamma(), m.p_alpha());
    LocalSearchResult cand{std::move(br.model), br.value};
    if (cand.value > lower_ + 1e-9) {
      LocalSearchOptions ls;
      ls.max_iterations = 20;
      cand = ascend(spec_, cand.model, ls);
    }
    offer(std::move(cand));
  }

  double global_upper_locked() const {
    double u = std::max(lower_, settled_upper_);
    if (!frontier_.empty()) u = std::max(u, frontier_.top().solution.upper_bound);
    for (double v : in_flight_) u = std::max(u, v);
    return u;
  }

  void work() {
    std::unique_lock lock(mutex_);
    for (;;) {
      cv_.wait(lock, [&] { return !frontier_.empty() || in_flight_.empty() || !termination_.empty(); });
      if (!termination_.empty()) break;
      if (frontier_.empty()) {
        if (in_flight_.empty()) break;
        continue;
      }
      if (global_upper_locked() - lower_ <= opt_.gap) {
        termination_ = "gap";
        break;
      }
      if (nodes_ >= opt_.node_cap) {
        termination_ = "node-cap";
        break;
      }
      if (elapsed() >= opt_.time_limit_seconds) {
        termination_ = "time-limit";
        break;
      }
      Entry e = frontier_.top();
      frontier_.pop();
      if (e.solution.upper_bound <= lower_ + opt_.prune_margin) {
        settled_upper_ = std::max(settled_upper_, e.solution.upper_bound);
        continue;
      }
      ++nodes_;
      if (opt_.progress && opt_.progress_every > 0 && nodes_ % opt_.progress_every == 0) {
        opt_.progress({nodes_, frontier_.size(), lower_, global_upper_locked(), elapsed()});
      }
      in_flight_.push_back(e.solution.upper_bound);
      const double mark = e.solution.upper_bound;
      lock.unlock();

      std::vector<Entry> children = expand(e);

      lock.lock();
      in_flight_.erase(std::find(in_flight_.begin(), in_flight_.end(), mark));
      for (auto& c : children) {
        if (c.solution.upper_bound <= lower_ + opt_.prune_margin) {
          settled_upper_ = std::max(settled_upper_, c.solution.upper_bound);
          continue;
        }
        c.order = counter_++;
        frontier_.push(std::move(c));
      }
      cv_.notify_all();
    }
    cv_.notify_all();
  }

  // Runs without the lock; takes it only to publish incumbents.
  std::vector<Entry> expand(const Entry& e) {
    const SourceBox& box = e.node.box;
    std::size_t axis = 0;
    for (std::size_t i = 1; i < 8; ++i) {
      if (box.width(i) > box.width(axis)) axis = i;
    }
    std::vector<Entry> out;
    const double w = box.width(axis);
    if (w < kLeafWidth) {
      // Sources are pinned: the best response settles the node.
      const ClassicalModel m = model_from_solution(e.solution.x);
      BestResponse br = best_response(spec_, m.p_gamma(), m.p_alpha());
      std::lock_guard guard(mutex_);
      offer({std::move(br.model), br.value});
      settled_upper_ = std::max(settled_upper_, e.solution.upper_bound);
      return out;
    }
    const double lo = box.lower[axis];
    const double hi = box.upper[axis];
    const double split = std::clamp(e.solution.x[axis], lo + 0.1 * w, hi - 0.1 * w);

    for (int side = 0; side < 2; ++side) {
      RelaxationNode child;
      child.box = box;
      (side == 0 ? child.box.upper[axis] : child.box.lower[axis]) = split;
      child.depth = e.node.depth + 1;
      child.extra_cuts = e.solution.extra_cuts;
      child.upper_bound = e.solution.upper_bound;
      if (!child.box.tighten()) continue;
      NodeSolution sol;
      try {
        sol = solve_node(spec_, child);
      } catch (const SolverError&) {
        sol.status = LPStatus::Infeasible;
      }
      if (sol.status != LPStatus::Optimal) {
        // A tightened box always admits a feasible relaxation, so this is a
        // numerical failure: keep the child under its parent's bound.
        sol = e.solution;
        sol.x[axis] = std::clamp(sol.x[axis], child.box.lower[axis], child.box.upper[axis]);
      }
      // A child's region lies inside its parent's.
      sol.upper_bound = std::min(sol.upper_bound, e.solution.upper_bound);
      observe(child, sol);
      const ClassicalModel m = model_from_solution(sol.x);
      BestResponse br = best_response(spec_, m.p_gamma(), m.p_alpha());
      {
        std::unique_lock guard(mutex_);
        const bool better = br.value > lower_ + 1e-9;
        guard.unlock();
        LocalSearchResult cand{std::move(br.model), br.value};
        if (better) {
          LocalSearchOptions ls;
          ls.max_iterations = 20;
          cand = ascend(spec_, cand.model, ls);
        }
        guard.lock();
        offer(std::move(cand));
      }
      child.upper_bound = sol.upper_bound;
      out.push_back({std::move(child), std::move(sol), 0});
    }
    return out;
  }
};

}  // namespace

BoundCertificate branch_and_bound(const FunctionalSpec& spec, const BranchAndBoundOptions& options) {
  Search search(spec, options);
  return search.run();
}

}  // namespace ucw
