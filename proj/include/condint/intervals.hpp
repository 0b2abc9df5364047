#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "condint/estimation.hpp"
#include "condint/metrics.hpp"
#include "condint/model.hpp"

namespace condint {

/// Estimation block 1..t_e, conditioning block t_p..T.
struct SplitPlan {
  std::size_t T = 0;
  std::size_t t_e = 0;
  std::size_t t_p = 0;
  double l_t = 0.0;
  std::size_t gap = 0;  // t_p - t_e

  bool operator==(const SplitPlan&) const = default;
};

/// Model-memory scale: ln T, or a fixed value.
struct SplitRule {
  enum class Kind { Log, Custom };
  Kind kind = Kind::Log;
  double value = 0.0;  // Custom only

  bool operator==(const SplitRule&) const = default;
};

inline constexpr std::size_t kMinSplitLength = 200;

/// g = floor(l_T * ln T), t_p = T - g, t_e = T - 2g. With l_T = ln T this is
/// g = floor((ln T)^2).
SplitPlan default_split_plan(std::size_t T, const SplitRule& rule = {});

/// Validates 1 < t_e < t_p <= T - 1.
SplitPlan make_split_plan(std::size_t T, std::size_t t_e, std::size_t t_p, double l_t = 0.0);

enum class Variant { TwoIP, SPL, STA };

const char* to_string(Variant v) noexcept;
Variant parse_variant(std::string_view text);

struct Gammas {
  double gamma1 = 0.05;
  double gamma2 = 0.05;

  static Gammas equal_tailed(double gamma) { return {gamma / 2.0, gamma / 2.0}; }
  /// Each tail in (0, 1) and gamma1 + gamma2 in (0, 1).
  void validate() const;
  bool operator==(const Gammas&) const = default;
};

struct IntervalResult {
  double lower = 0.0;
  double upper = 0.0;
  double center = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  Variant variant = Variant::STA;
  /// Plug-in variance when normal-based; 0 for quantile-based intervals.
  double variance = 0.0;
  /// F_hat^{-1}(gamma1) and F_hat^{-1}(1 - gamma2).
  double quantile_low = 0.0;
  double quantile_high = 0.0;
  double rate = 0.0;

  bool contains(double value) const noexcept { return lower <= value && value <= upper; }
  double width() const noexcept { return upper - lower; }
  bool operator==(const IntervalResult&) const = default;
};

inline constexpr double kDeltaVarianceFloor = 1e-12;

/// grad' Upsilon grad, floored at 1e-12.
double delta_variance(const PredictionOutput& pred, const EstimationResult& est);
double delta_variance(const std::vector<double>& gradient, const Matrix& cov);

/// [center - sqrt(v) Phi^{-1}(1 - gamma2) / m, center - sqrt(v) Phi^{-1}(gamma1) / m].
IntervalResult normal_interval(double center, double variance, double rate, const Gammas& gammas,
                               Variant variant);

/// F_hat, the plug-in law of w_hat' Z_hat.
struct NormalPlugin {
  double variance = 0.0;
};
struct SamplePlugin {
  StepCdf cdf;
  std::size_t draws = 0;
};
using PluginCdf = std::variant<NormalPlugin, SamplePlugin>;

inline constexpr std::size_t kMinPluginDraws = 100;

/// Builds F_hat from the gradient and G_hat.
PluginCdf plugin_cdf(const std::vector<double>& gradient, const CdfEstimate& ghat);

/// [center - F^{-1}(1 - gamma2) / m, center - F^{-1}(gamma1) / m].
IntervalResult quantile_interval(double center, const PluginCdf& fhat, double rate,
                                 const Gammas& gammas, Variant variant);

/// theta_hat from the independent series y, psi evaluated on x with t1 = 1.
IntervalResult build_interval_2ip(const TimeSeries& x, const TimeSeries& y, const Model& model,
                                  const Gammas& gammas, const TruncationConfig& trunc = {});

/// theta_hat from x_{1:t_e}, psi evaluated on x^c_{t_p:T} (t1 = t_p). Rate sqrt(T).
IntervalResult build_interval_spl(const TimeSeries& series, const SplitPlan& plan, const Model& model,
                                  const Gammas& gammas, const TruncationConfig& trunc = {});

/// theta_hat and psi both from the full sample.
IntervalResult build_interval_sta(const TimeSeries& series, const Model& model, const Gammas& gammas,
                                  const TruncationConfig& trunc = {});

/// Law of the parameter-error term sigma^2_{T+1} - sigma_hat^2 in squared-series units.
using ErrorLaw = std::variant<NormalPlugin, StepCdf>;

inline constexpr std::size_t kMinConvolutionDraws = 10000;

/// Tabulated law of eps^2 - 1 for Gaussian eps (n stratified quantiles).
StepCdf chi_square1_minus_one_table(std::size_t n);

/// Law of eps^2 - 1 from standardized residuals.
StepCdf innovation_table_from_residuals(std::span<const double> standardized);

/// Prediction interval for X^2_{T+1} = sigma_hat^2 + E + sigma_hat^2 (eps^2 - 1)
/// by Monte Carlo convolution of n_draws paired draws. Both marginals are
/// sampled on stratified quantile grids and paired by a seeded permutation.
IntervalResult prediction_interval_convolution(const ErrorLaw& parameter_error, const StepCdf& innovation,
                                               double sigma2_hat, const Gammas& gammas,
                                               std::size_t n_draws = 100000, std::uint64_t seed = 1);

}  // namespace condint
