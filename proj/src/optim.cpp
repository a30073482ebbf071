#include "mca/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mca/parallel.hpp"
#include "mca/rng.hpp"

namespace mca::optim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void clamp_into(std::vector<double>& p, const Bounds& b) {
  for (std::size_t d = 0; d < p.size(); ++d) p[d] = std::clamp(p[d], b.lo[d], b.hi[d]);
}

}  // namespace

std::vector<std::vector<double>> latin_hypercube(const Bounds& bounds, int n, std::uint64_t seed) {
  const std::size_t dim = bounds.dim();
  if (bounds.hi.size() != dim) throw std::invalid_argument("latin_hypercube: bounds mismatch");
  if (n <= 0) throw std::invalid_argument("latin_hypercube: n must be positive");

  Rng rng(seed);
  std::vector<std::vector<double>> points(n, std::vector<double>(dim));
  std::vector<int> perm(n);
  for (std::size_t d = 0; d < dim; ++d) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = 0; i + 1 < n; ++i) {
      const int j = i + static_cast<int>(rng.uniform() * static_cast<double>(n - i));
      std::swap(perm[i], perm[std::min(j, n - 1)]);
    }
    for (int i = 0; i < n; ++i) {
      const double u = (static_cast<double>(perm[i]) + rng.uniform()) / static_cast<double>(n);
      points[i][d] = bounds.lo[d] + (bounds.hi[d] - bounds.lo[d]) * u;
    }
  }
  return points;
}

LocalResult nelder_mead(const CostFn& cost, std::span<const double> start, const Bounds& bounds,
                        const NelderMeadSettings& settings) {
  const std::size_t dim = bounds.dim();
  if (start.size() != dim) throw std::invalid_argument("nelder_mead: start/bounds mismatch");

  int evals = 0;
  auto eval = [&](std::vector<double>& p) {
    clamp_into(p, bounds);
    ++evals;
    const double c = cost(p);
    return std::isnan(c) ? kInf : c;
  };

  // initial simplex: start plus one step along each coordinate
  std::vector<std::vector<double>> simplex(dim + 1, std::vector<double>(start.begin(), start.end()));
  std::vector<double> costs(dim + 1);
  for (std::size_t d = 0; d < dim; ++d) {
    const double range = bounds.hi[d] - bounds.lo[d];
    double step = settings.initial_step * range;
    if (simplex[d + 1][d] + step > bounds.hi[d]) step = -step;
    simplex[d + 1][d] += step;
  }
  for (std::size_t i = 0; i <= dim; ++i) costs[i] = eval(simplex[i]);

  std::vector<std::size_t> rank(dim + 1);
  std::vector<double> centroid(dim), candidate(dim), second(dim);

  for (int iter = 0; iter < settings.max_iters; ++iter) {
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
      if (costs[a] != costs[b]) return costs[a] < costs[b];
      return a < b;
    });
    const std::size_t best = rank[0], worst = rank[dim], second_worst = rank[dim - 1];

    if (std::isfinite(costs[best]) && std::isfinite(costs[worst]) &&
        costs[worst] - costs[best] < settings.tol)
      break;

    for (std::size_t d = 0; d < dim; ++d) {
      double s = 0.0;
      for (std::size_t i = 0; i <= dim; ++i)
        if (i != worst) s += simplex[i][d];
      centroid[d] = s / static_cast<double>(dim);
    }

    // reflection
    for (std::size_t d = 0; d < dim; ++d)
      candidate[d] = centroid[d] + (centroid[d] - simplex[worst][d]);
    double c_reflect = eval(candidate);

    if (c_reflect < costs[best]) {
      // expansion
      for (std::size_t d = 0; d < dim; ++d)
        second[d] = centroid[d] + 2.0 * (centroid[d] - simplex[worst][d]);
      const double c_expand = eval(second);
      if (c_expand < c_reflect) {
        simplex[worst] = second;
        costs[worst] = c_expand;
      } else {
        simplex[worst] = candidate;
        costs[worst] = c_reflect;
      }
    } else if (c_reflect < costs[second_worst]) {
      simplex[worst] = candidate;
      costs[worst] = c_reflect;
    } else {
      // contraction (outside if the reflection improved on the worst)
      const bool outside = c_reflect < costs[worst];
      for (std::size_t d = 0; d < dim; ++d) {
        const double toward = outside ? candidate[d] : simplex[worst][d];
        second[d] = centroid[d] + 0.5 * (toward - centroid[d]);
      }
      const double c_contract = eval(second);
      if (c_contract < std::min(c_reflect, costs[worst])) {
        simplex[worst] = second;
        costs[worst] = c_contract;
      } else {
        // shrink toward the best vertex
        for (std::size_t i = 0; i <= dim; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < dim; ++d)
            simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
          costs[i] = eval(simplex[i]);
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= dim; ++i)
    if (costs[i] < costs[best]) best = i;

  LocalResult r;
  r.point = simplex[best];
  r.cost = costs[best];
  r.evaluations = evals;
  return r;
}

MultistartResult multistart_minimize(const CostFn& cost, const Bounds& bounds,
                                     const MultistartSettings& settings) {
  if (settings.starts <= 0) throw std::invalid_argument("multistart: starts must be positive");
  const auto starts = latin_hypercube(bounds, settings.starts, settings.seed);

  std::vector<LocalResult> results(settings.starts);
  parallel::for_shards(settings.starts, settings.serial,
                       [&](int s) { results[s] = nelder_mead(cost, starts[s], bounds, settings.local); });

  MultistartResult best;
  best.cost = kInf;
  for (int s = 0; s < settings.starts; ++s) {
    best.evaluations += results[s].evaluations;
    if (results[s].cost < best.cost) {
      best.cost = results[s].cost;
      best.point = results[s].point;
      best.best_start = s;
    }
  }
  best.feasible = std::isfinite(best.cost);
  if (!best.feasible && !starts.empty()) best.point = starts[0];
  return best;
}

}  // namespace mca::optim
