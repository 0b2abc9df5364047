#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "condint/matrix.hpp"
#include "condint/nelder_mead.hpp"
#include "condint/series.hpp"

namespace condint {

struct EstimationDiagnostics {
  std::size_t iterations = 0;
  double objective = 0.0;
  std::size_t converged_starts = 0;
  /// GARCH with alpha_hat ~ 0: beta does not enter the likelihood and its
  /// covariance row is reported as zero.
  bool beta_unidentified = false;

  bool operator==(const EstimationDiagnostics&) const = default;
};

struct EstimationResult {
  std::vector<double> theta;  // theta_hat
  Matrix cov;                 // Upsilon_hat, asymptotic covariance of rate * (theta_hat - theta)
  double rate = 0.0;          // m_T = sqrt(n_used)
  std::size_t n_used = 0;
  EstimationDiagnostics diagnostics;

  bool operator==(const EstimationResult&) const = default;
};

/// Estimate of G_infinity, the law of m_T (theta_hat - theta_0).
struct CdfEstimate {
  enum class Kind { Normal, Sample };

  Kind kind = Kind::Normal;
  std::vector<double> mean;  // Normal
  Matrix cov;                // Normal
  Matrix draws;              // Sample: one row per draw, r columns
};

inline constexpr double kAr1VarianceFloor = 1e-10;

/// beta_hat = sum x_t x_{t-1} / sum x_{t-1}^2, Upsilon_hat = max(1 - beta_hat^2, 1e-10).
EstimationResult estimate_ar1_ols(const TimeSeries& series);

struct QmleOptions {
  NelderMeadOptions optimizer{};
  /// Relative central-difference step for the sandwich scores.
  double score_step = 1e-5;
  /// alpha_hat below this marks beta as unidentified.
  double identification_alpha = 1e-3;

  bool operator==(const QmleOptions& o) const {
    return optimizer.max_iterations == o.optimizer.max_iterations &&
           optimizer.initial_step == o.optimizer.initial_step && optimizer.ftol == o.optimizer.ftol &&
           score_step == o.score_step && identification_alpha == o.identification_alpha;
  }
};

inline constexpr std::size_t kQmleMinLength = 250;

/// Gaussian quasi-likelihood (1/T) sum [log s_t^2 + x_t^2 / s_t^2] with
/// s_1^2 = sample variance. Returns +inf outside the stationary region.
double garch11_qmle_objective(const std::vector<double>& theta, std::span<const double> x);

/// Gaussian QMLE of (omega, alpha, beta) with sandwich covariance.
/// Nelder-Mead over (log omega, log alpha, logit beta) from three fixed starts.
EstimationResult estimate_garch11_qmle(const TimeSeries& series, const QmleOptions& options = {});

/// Multi-start optimization only; exposes the per-start traces.
std::vector<NelderMeadResult> garch11_qmle_starts(const TimeSeries& series, const QmleOptions& options = {});

CdfEstimate ghat_parametric_normal(const EstimationResult& est);

/// Residual bootstrap of the AR(1) OLS estimator. Draw b is
/// sqrt(T) (beta*_b - beta_hat); deterministic in (series, n_boot, seed).
CdfEstimate ghat_bootstrap_ar1(const TimeSeries& series, std::size_t n_boot, std::uint64_t seed);

}  // namespace condint
