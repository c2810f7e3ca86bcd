#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "ucw/classical.hpp"
#include "ucw/functional.hpp"
#include "ucw/relaxation.hpp"

namespace ucw {

struct BoundCertificate {
  std::string witness;
  double lower = -kInfinity;  // attained by model
  double upper = kInfinity;   // valid relaxation bound
  double gap = kInfinity;
  std::optional<ClassicalModel> model;
  std::size_t nodes = 0;
  double seconds = 0.0;
  bool converged = false;
  std::string termination;  // "gap", "node-cap", "time-limit", "exhausted"
};

struct BranchProgress {
  std::size_t nodes;
  std::size_t frontier;
  double lower;
  double upper;
  double seconds;
};

struct BranchAndBoundOptions {
  double gap = 1e-3;
  std::size_t node_cap = 1'000'000;
  double time_limit_seconds = kInfinity;
  int workers = 1;
  std::uint64_t seed = 1;
  int local_search_starts = 20;
  double prune_margin = 1e-9;
  // Called for every solved node (from worker threads when workers > 1).
  std::function<void(const RelaxationNode&, const NodeSolution&)> node_observer;
  std::function<void(const BranchProgress&)> progress;
  std::size_t progress_every = 1000;
};

// Best-first spatial branch-and-bound over the 8 source coordinates.
// Throws ConfigurationError for non-certifiable witnesses.
BoundCertificate branch_and_bound(const FunctionalSpec& spec, const BranchAndBoundOptions& options = {});

}  // namespace ucw
