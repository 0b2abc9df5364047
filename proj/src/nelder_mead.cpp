#include "condint/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "condint/error.hpp"

namespace condint {

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> start, const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  require(n >= 1, ErrorCode::Contract, "nelder_mead needs at least one dimension");

  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isnan(v) ? HUGE_VAL : v;
  };

  std::vector<std::vector<double>> pts(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += options.initial_step;
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  auto affine = [&](std::vector<double>& out, const std::vector<double>& a, const std::vector<double>& b, double t) {
    for (std::size_t j = 0; j < n; ++j) out[j] = a[j] + t * (b[j] - a[j]);
  };

  for (;;) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order[0], worst = order[n], second = order[n - 1];
    const double fb = vals[best];
    if (res.iterations > 0) res.best_trace.push_back(fb);

    double spread = 0.0;
    for (double v : vals) spread = std::max(spread, v - fb);
    if (std::isfinite(fb) && spread <= options.ftol * (1.0 + std::abs(fb))) {
      res.converged = true;
      break;
    }
    if (res.iterations >= options.max_iterations) break;
    ++res.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[order[k]][j] / static_cast<double>(n);

    affine(xr, centroid, pts[worst], -1.0);
    const double fr = eval(xr);
    if (fr < fb) {
      affine(xe, centroid, pts[worst], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    bool accepted = false;
    if (fr < vals[worst]) {
      affine(xc, centroid, xr, 0.5);
      const double fc = eval(xc);
      if (fc <= fr) {
        pts[worst] = xc;
        vals[worst] = fc;
        accepted = true;
      }
    } else {
      affine(xc, centroid, pts[worst], 0.5);
      const double fc = eval(xc);
      if (fc < vals[worst]) {
        pts[worst] = xc;
        vals[worst] = fc;
        accepted = true;
      }
    }
    if (!accepted) {
      for (std::size_t k = 1; k <= n; ++k) {
        const std::size_t i = order[k];
        affine(pts[i], pts[best], pts[i], 0.5);
        vals[i] = eval(pts[i]);
      }
    }
  }

  const auto it = std::min_element(vals.begin(), vals.end());
  const auto idx = static_cast<std::size_t>(it - vals.begin());
  res.x = pts[idx];
  res.value = vals[idx];
  return res;
}

}  // namespace condint
