#include "entropic/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace entropic {

namespace {

struct Local {
  std::vector<double> x;
  double value;
  long evaluations;
};

Local nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                  const std::vector<double>& lower, const std::vector<double>& upper, const NelderMeadOptions& opt) {
  const std::size_t n = x0.size();
  long evals = 0;
  auto clamp = [&](std::vector<double>& x) {
    for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
  };
  // Minimize the negated objective; NaN counts as worst.
  auto g = [&](std::vector<double>& x) {
    clamp(x);
    ++evals;
    double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : -v;
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double step = opt.initial_step * (upper[i] - lower[i]);
    simplex[i + 1][i] += (simplex[i + 1][i] + step <= upper[i]) ? step : -step;
  }
  for (std::size_t i = 0; i <= n; ++i) fv[i] = g(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  while (evals < opt.max_evaluations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double size = 0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k) size = std::max(size, std::abs(simplex[i][k] - simplex[best][k]));
    if (std::abs(fv[worst] - fv[best]) <= opt.tolerance && size <= std::sqrt(opt.tolerance)) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);

    for (std::size_t k = 0; k < n; ++k) xr[k] = centroid[k] + (centroid[k] - simplex[worst][k]);
    const double fr = g(xr);
    if (fr < fv[best]) {
      for (std::size_t k = 0; k < n; ++k) xe[k] = centroid[k] + 2 * (centroid[k] - simplex[worst][k]);
      const double fe = g(xe);
      if (fe < fr) simplex[worst] = xe, fv[worst] = fe;
      else simplex[worst] = xr, fv[worst] = fr;
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    for (std::size_t k = 0; k < n; ++k)
      xc[k] = outside ? centroid[k] + 0.5 * (xr[k] - centroid[k]) : centroid[k] + 0.5 * (simplex[worst][k] - centroid[k]);
    const double fc = g(xc);
    if (fc < (outside ? fr : fv[worst])) {
      simplex[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < n; ++k) simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
      fv[i] = g(simplex[i]);
    }
  }
  const auto it = std::min_element(fv.begin(), fv.end());
  const auto bi = static_cast<std::size_t>(it - fv.begin());
  return {simplex[bi], -fv[bi], evals};
}

}  // namespace

OptimizationReport maximize(const std::function<double(const std::vector<double>&)>& f,
                            const std::vector<double>& lower, const std::vector<double>& upper,
                            const NelderMeadOptions& options) {
  const std::size_t n = lower.size();
  if (n == 0 || upper.size() != n) throw std::invalid_argument("bounds must be nonempty and of equal length");
  for (std::size_t i = 0; i < n; ++i)
    if (!(lower[i] <= upper[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i]))
      throw std::invalid_argument("bounds must be finite with lower <= upper");

  OptimizationReport rep;
  rep.best_value = -std::numeric_limits<double>::infinity();
  auto consider = [&](const Local& l) {
    rep.evaluations += l.evaluations;
    ++rep.restarts;
    if (l.value > rep.best_value) {
      rep.best_value = l.value;
      rep.best_params = l.x;
    }
  };
  for (const auto& s : options.starts) {
    if (s.size() != n) throw std::invalid_argument("starting point has the wrong dimension");
    consider(nelder_mead(f, s, lower, upper, options));
  }
  for (int r = 0; r < options.restarts; ++r) {
    std::mt19937_64 rng(options.seed + static_cast<std::uint64_t>(r));
    std::vector<double> x0(n);
    for (std::size_t i = 0; i < n; ++i) x0[i] = std::uniform_real_distribution<double>(lower[i], upper[i])(rng);
    consider(nelder_mead(f, x0, lower, upper, options));
  }
  // Report the value re-evaluated at the reported point.
  if (!rep.best_params.empty()) rep.best_value = f(rep.best_params);
  return rep;
}

}  // namespace entropic
