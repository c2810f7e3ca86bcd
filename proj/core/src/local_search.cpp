#include "ucw/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "ucw/error.hpp"
#include "ucw/relaxation.hpp"

namespace ucw {

ClassicalModel::Source project_to_simplex(const ClassicalModel::Source& v) {
  ClassicalModel::Source u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0) tau = t;
  }
  ClassicalModel::Source out{};
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::max(v[i] - tau, 0.0);
    total += out[i];
  }
  for (double& x : out) x /= total;
  return out;
}

LocalSearchResult ascend(const FunctionalSpec& spec, const ClassicalModel& start, const LocalSearchOptions& opt) {
  std::vector<std::vector<double>> cuts;
  LocalSearchResult best{start, evaluate_model(spec, start)};
  {
    BestResponse br = best_response(spec, start.p_gamma(), start.p_alpha(), &cuts);
    if (br.value > best.value) best = {std::move(br.model), br.value};
  }

  double step = opt.initial_step;
  const double h = opt.gradient_step;
  for (int it = 0; it < opt.max_iterations && step > 1e-7; ++it) {
    auto g = best.model.p_gamma();
    auto a = best.model.p_alpha();
    const auto& resp = best.model.p_b0();
    std::array<double, 8> grad{};
    double norm = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      auto& x = i < 4 ? g[i] : a[i - 4];
      const double saved = x;
      // One-sided at the simplex boundary so probabilities stay >= 0.
      const double back = saved >= h ? h : 0.0;
      x = saved + h;
      const double up = evaluate_coordinates(spec, raw_coordinates(g, a, resp));
      x = saved - back;
      const double dn = evaluate_coordinates(spec, raw_coordinates(g, a, resp));
      x = saved;
      grad[i] = (up - dn) / (h + back);
      norm += grad[i] * grad[i];
    }
    norm = std::sqrt(norm);
    if (norm < 1e-12) break;

    // Backtrack a few times; a failed step shrinks the step size for good.
    bool improved = false;
    double s = step;
    for (int tries = 0; tries < 3 && !improved; ++tries, s *= 0.5) {
      ClassicalModel::Source ng{}, na{};
      for (std::size_t i = 0; i < 4; ++i) {
        ng[i] = g[i] + s * grad[i] / norm;
        na[i] = a[i] + s * grad[4 + i] / norm;
      }
      ng = project_to_simplex(ng);
      na = project_to_simplex(na);
      BestResponse br = best_response(spec, ng, na, &cuts);
      if (br.value > best.value + 1e-12) {
        best = {std::move(br.model), br.value};
        improved = true;
      }
    }
    if (!improved) {
      // Kinks of the abs terms stall gradient steps. The relaxation over a
      // small box around the sources sees them exactly; try its optimum.
      RelaxationNode node;
      for (std::size_t i = 0; i < 8; ++i) {
        const double x = i < 4 ? g[i] : a[i - 4];
        node.box.lower[i] = std::max(0.0, x - step);
        node.box.upper[i] = std::min(1.0, x + step);
      }
      const NodeSolution sol = solve_node(spec, node, 1e-6);
      if (sol.status == LPStatus::Optimal && sol.upper_bound > best.value + 1e-12) {
        const ClassicalModel m = model_from_solution(sol.x);
        BestResponse br = best_response(spec, m.p_gamma(), m.p_alpha(), &cuts);
        if (br.value > best.value + 1e-12) {
          best = {std::move(br.model), br.value};
          improved = true;
          s = 2.0 * step;
        }
      }
    }
    step = improved ? std::min(3.0 * s, 0.5) : s;
  }
  return best;
}

LocalSearchResult local_search(const FunctionalSpec& spec, const LocalSearchOptions& opt) {
  if (opt.starts < 1) throw ConfigurationError("local search needs at least one start");
  std::mt19937_64 rng(opt.seed);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> corner(0, 3);

  const int vertex_starts = static_cast<int>(std::round(opt.vertex_fraction * opt.starts));
  // Short ascent from every start, then full ascent from the best tenth.
  LocalSearchOptions scout = opt;
  scout.max_iterations = std::min(opt.max_iterations, opt.scout_iterations);
  std::vector<LocalSearchResult> pool;
  pool.reserve(static_cast<std::size_t>(opt.starts));
  for (int s = 0; s < opt.starts; ++s) {
    ClassicalModel::Source g{}, a{};
    if (s < vertex_starts) {
      g[static_cast<std::size_t>(corner(rng))] = 1.0;
      a[static_cast<std::size_t>(corner(rng))] = 1.0;
    } else {
      for (double& x : g) x = expo(rng);
      for (double& x : a) x = expo(rng);
      const double gs = std::accumulate(g.begin(), g.end(), 0.0);
      const double as = std::accumulate(a.begin(), a.end(), 0.0);
      for (double& x : g) x /= gs;
      for (double& x : a) x /= as;
    }
    ClassicalModel::Response resp{};
    for (double& x : resp) x = unit(rng);
    pool.push_back(ascend(spec, ClassicalModel(g, a, resp), scout));
  }
  std::stable_sort(pool.begin(), pool.end(), [](const auto& x, const auto& y) { return x.value > y.value; });
  const std::size_t keep = std::max<std::size_t>(1, pool.size() / 10);
  std::optional<LocalSearchResult> best;
  for (std::size_t i = 0; i < keep; ++i) {
    LocalSearchResult r = ascend(spec, pool[i].model, opt);
    if (!best || r.value > best->value) best = std::move(r);
  }
  return *best;
}

}  // namespace ucw
