#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace mca::optim {

using CostFn = std::function<double(std::span<const double>)>;

struct Bounds {
  std::vector<double> lo, hi;
  std::size_t dim() const { return lo.size(); }
};

// Latin hypercube sample of n points inside bounds, deterministic given seed.
std::vector<std::vector<double>> latin_hypercube(const Bounds& bounds, int n, std::uint64_t seed);

struct NelderMeadSettings {
  int max_iters = 600;
  double initial_step = 0.05;  // fraction of each bound range
  double tol = 1e-10;          // simplex cost spread stopping criterion
};

struct LocalResult {
  std::vector<double> point;
  double cost = 0.0;
  int evaluations = 0;
};

// Nelder-Mead with points clamped into bounds; infinite costs are treated as
// rejected points, so hard feasibility filters work directly.
LocalResult nelder_mead(const CostFn& cost, std::span<const double> start, const Bounds& bounds,
                        const NelderMeadSettings& settings = {});

struct MultistartSettings {
  int starts = 64;
  std::uint64_t seed = 1;
  bool serial = false;
  NelderMeadSettings local;
};

struct MultistartResult {
  std::vector<double> point;
  double cost = 0.0;
  int best_start = -1;
  int evaluations = 0;
  bool feasible = false;  // false when every start ended at +inf
};

// Multistart local search: Latin-hypercube starts, Nelder-Mead refinement,
// winner selected by (cost, start index) so parallel and serial runs agree.
MultistartResult multistart_minimize(const CostFn& cost, const Bounds& bounds,
                                     const MultistartSettings& settings);

}  // namespace mca::optim
