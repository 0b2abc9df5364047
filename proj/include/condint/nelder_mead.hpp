#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace condint {

struct NelderMeadOptions {
  std::size_t max_iterations = 5000;
  double initial_step = 0.25;
  /// Converged when max_i |f_i - f_best| <= ftol * (1 + |f_best|).
  double ftol = 1e-11;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  /// Best vertex value after every iteration; nonincreasing.
  std::vector<double> best_trace;
};

/// Unconstrained Nelder-Mead (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2). The objective may return +inf to reject a point.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> start, const NelderMeadOptions& options = {});

}  // namespace condint
