#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ucw/classical.hpp"
#include "ucw/functional.hpp"

namespace ucw {

struct LocalSearchOptions {
  int starts = 200;
  std::uint64_t seed = 1;
  int max_iterations = 80;
  int scout_iterations = 12;  // first pass over all starts
  double initial_step = 0.05;
  double gradient_step = 1e-7;  // central differences
  double vertex_fraction = 0.1;  // starts from deterministic sources
};

struct LocalSearchResult {
  ClassicalModel model;
  double value;
};

// Block ascent from one model: Bob's response is re-solved exactly for the
// current sources, then the sources take a projected subgradient step
// (numerical central differences). Steps grow after a success and shrink
// after a failed backtrack. Never
// returns a value below the start's.
LocalSearchResult ascend(const FunctionalSpec& spec, const ClassicalModel& start, const LocalSearchOptions& options = {});

// Multi-start: every start gets a short ascent (scout_iterations), the
// best tenth are then ascended fully. Starts draw Dirichlet(1,1,1,1)
// sources, except a vertex_fraction from point-mass sources. Deterministic
// per seed.
LocalSearchResult local_search(const FunctionalSpec& spec, const LocalSearchOptions& options = {});

// Euclidean projection onto the probability simplex.
ClassicalModel::Source project_to_simplex(const ClassicalModel::Source& v);

}  // namespace ucw
