#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace entropic {

struct OptimizationReport {
  std::vector<double> best_params;
  double best_value = 0;
  long evaluations = 0;
  int restarts = 0;
};

struct NelderMeadOptions {
  int restarts = 50;
  double tolerance = 1e-10;        // on the spread of simplex values and on its size
  long max_evaluations = 10000;    // per restart
  std::uint64_t seed = 1;
  double initial_step = 0.1;       // fraction of each bound width
  /// Optional extra starting points, tried before the random ones.
  std::vector<std::vector<double>> starts;
};

/// Maximizes f over the box [lower, upper] by Nelder-Mead with seeded
/// random restarts (restart r uses mt19937_64(seed + r)). Trial points are
/// clamped into the bounds. Deterministic for a given seed.
OptimizationReport maximize(const std::function<double(const std::vector<double>&)>& f,
                            const std::vector<double>& lower, const std::vector<double>& upper,
                            const NelderMeadOptions& options = {});

}  // namespace entropic
