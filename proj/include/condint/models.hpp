#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "condint/series.hpp"

namespace condint {

struct Ar1Params {
  double beta = 0.0;
  double noise_sd = 1.0;

  /// Finite values, |beta| < 1, noise_sd > 0.
  void validate() const;
  bool operator==(const Ar1Params&) const = default;
};

struct Garch11Params {
  double omega = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  /// omega > 0, alpha >= 0, 0 <= beta < 1; with `stationary` also alpha + beta < 1.
  void validate(bool stationary) const;
  /// omega / (1 - alpha - beta).
  double unconditional_variance() const;
  std::vector<double> theta() const { return {omega, alpha, beta}; }
  static Garch11Params from_theta(const std::vector<double>& theta);
  bool operator==(const Garch11Params&) const = default;
};

enum class InnovationKind { Gaussian, StudentT };

struct InnovationSpec {
  InnovationKind kind = InnovationKind::Gaussian;
  double df = 0.0;  // StudentT only; must exceed 4

  void validate() const;
  bool operator==(const InnovationSpec&) const = default;
};

/// How unobserved positions of the prediction function are filled: the
/// starting values s_0, s_{-1}, ... and the constants c_1..c_{t1-1}.
struct FillPolicy {
  enum class Kind { Zeros, UnconditionalMoment, Explicit };

  Kind kind = Kind::UnconditionalMoment;
  /// Explicit only. Levels, squared where the model needs squares. For
  /// constants: c_1, c_2, ...; for starting values: s_0, s_{-1}, ...
  std::vector<double> values;

  void validate() const;
  bool operator==(const FillPolicy&) const = default;
};

struct TruncationConfig {
  std::size_t t1 = 1;  // first conditioning index, 1 <= t1 <= T
  FillPolicy start;
  FillPolicy constants;

  bool operator==(const TruncationConfig&) const = default;
};

struct PredictionOutput {
  double psi = 0.0;
  std::vector<double> gradient;  // d psi / d theta
};

TimeSeries simulate_ar1(const Ar1Params& params, std::size_t length, std::uint64_t seed);

struct GarchPath {
  TimeSeries series;
  std::vector<double> sigma2;  // latent conditional variances, aligned with series
};

inline constexpr std::size_t kGarchBurnIn = 1000;

GarchPath simulate_garch11(const Garch11Params& params, std::size_t length, std::uint64_t seed,
                           const InnovationSpec& innovation = {});

/// Conditional mean beta * x_T. Independent of the truncation settings.
PredictionOutput predict_ar1(const Ar1Params& params, const TimeSeries& series,
                             const TruncationConfig& trunc = {});

/// Conditional variance sigma^2_{T+1} from the truncated expansion
///   omega/(1-beta) + alpha * sum_t beta^{T-t} v_t,
/// where v_t = x_t^2 for t >= t1, c_t^2 for 1 <= t < t1, and s_t^2 for t <= 0.
/// Infinite tails are summed in closed form; the gradient is analytic in
/// (omega, alpha, beta) and includes the dependence of unconditional-moment
/// fill values on theta.
PredictionOutput predict_garch11(const Garch11Params& params, const TimeSeries& series,
                                 const TruncationConfig& trunc = {});

/// Number of explicit starting values predict_garch11 needs for a sample of
/// length T: terms with beta^{T+j} below 1e-16 are dropped.
std::size_t required_start_values(double beta, std::size_t T);

/// |psi(x^c_{t1:T}) - psi(x_{1:T})| with the fill policies of `base`.
double truncation_gap(const Garch11Params& params, const TimeSeries& series, std::size_t t1,
                      const TruncationConfig& base = {});

}  // namespace condint
