#include "condint/intervals.hpp"

#include <cmath>
#include <numeric>

#include "condint/error.hpp"
#include "condint/normal.hpp"
#include "condint/rng.hpp"

namespace condint {

SplitPlan make_split_plan(std::size_t T, std::size_t t_e, std::size_t t_p, double l_t) {
  require(1 < t_e && t_e < t_p && t_p + 1 <= T, ErrorCode::Contract,
          "split plan needs 1 < t_e < t_p <= T - 1");
  return {T, t_e, t_p, l_t, t_p - t_e};
}

SplitPlan default_split_plan(std::size_t T, const SplitRule& rule) {
  require(T >= kMinSplitLength, ErrorCode::Precondition, "split plan infeasible: T must be at least 200");
  const double lnT = std::log(static_cast<double>(T));
  double l = lnT;
  if (rule.kind == SplitRule::Kind::Custom) {
    require(std::isfinite(rule.value) && rule.value > 0.0, ErrorCode::InvalidParameter, "l_T must be positive");
    l = rule.value;
  }
  const double g = std::floor(l * lnT);
  require(g >= 1.0 && 2.0 * g + 1.0 < static_cast<double>(T), ErrorCode::Precondition,
          "split plan infeasible for this T and l_T");
  const auto gap = static_cast<std::size_t>(g);
  return make_split_plan(T, T - 2 * gap, T - gap, l);
}

const char* to_string(Variant v) noexcept {
  switch (v) {
    case Variant::TwoIP: return "2ip";
    case Variant::SPL: return "spl";
    case Variant::STA: return "sta";
  }
  return "?";
}

Variant parse_variant(std::string_view text) {
  if (text == "2ip") return Variant::TwoIP;
  if (text == "spl") return Variant::SPL;
  if (text == "sta") return Variant::STA;
  fail(ErrorCode::Configuration, "unknown variant '" + std::string(text) + "' (expected 2ip, spl or sta)");
}

void Gammas::validate() const {
  require(std::isfinite(gamma1) && std::isfinite(gamma2) && gamma1 > 0.0 && gamma2 > 0.0 && gamma1 + gamma2 < 1.0,
          ErrorCode::InvalidParameter, "tail masses need gamma1, gamma2 > 0 and gamma1 + gamma2 < 1");
}

double delta_variance(const std::vector<double>& gradient, const Matrix& cov) {
  const std::size_t r = gradient.size();
  require(cov.rows == r && cov.cols == r, ErrorCode::Contract, "gradient and covariance dimensions differ");
  double v = 0.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) v += gradient[i] * cov(i, j) * gradient[j];
  return std::max(v, kDeltaVarianceFloor);
}

double delta_variance(const PredictionOutput& pred, const EstimationResult& est) {
  return delta_variance(pred.gradient, est.cov);
}

IntervalResult normal_interval(double center, double variance, double rate, const Gammas& gammas, Variant variant) {
  gammas.validate();
  require(std::isfinite(variance) && variance >= 0.0, ErrorCode::InvalidParameter, "variance must be >= 0");
  require(std::isfinite(rate) && rate > 0.0, ErrorCode::InvalidParameter, "rate must be > 0");
  const double sd = std::sqrt(variance);
  IntervalResult r;
  r.center = center;
  r.gamma1 = gammas.gamma1;
  r.gamma2 = gammas.gamma2;
  r.variant = variant;
  r.variance = variance;
  r.rate = rate;
  r.quantile_low = sd * normal_quantile(gammas.gamma1);
  r.quantile_high = sd * normal_quantile(1.0 - gammas.gamma2);
  r.lower = center - r.quantile_high / rate;
  r.upper = center - r.quantile_low / rate;
  return r;
}

PluginCdf plugin_cdf(const std::vector<double>& gradient, const CdfEstimate& ghat) {
  if (ghat.kind == CdfEstimate::Kind::Normal) return NormalPlugin{delta_variance(gradient, ghat.cov)};
  require(ghat.draws.cols == gradient.size(), ErrorCode::Contract, "gradient and draw dimensions differ");
  require(ghat.draws.rows >= kMinPluginDraws, ErrorCode::Precondition, "insufficient draws: need at least 100");
  std::vector<double> values(ghat.draws.rows);
  for (std::size_t b = 0; b < ghat.draws.rows; ++b) {
    double s = 0.0;
    for (std::size_t j = 0; j < gradient.size(); ++j) s += gradient[j] * ghat.draws(b, j);
    values[b] = s;
  }
  return SamplePlugin{StepCdf::from_samples(values), ghat.draws.rows};
}

IntervalResult quantile_interval(double center, const PluginCdf& fhat, double rate, const Gammas& gammas,
                                 Variant variant) {
  if (const auto* n = std::get_if<NormalPlugin>(&fhat)) return normal_interval(center, n->variance, rate, gammas, variant);
  const auto& s = std::get<SamplePlugin>(fhat);
  gammas.validate();
  require(s.draws >= kMinPluginDraws, ErrorCode::Precondition, "insufficient draws: need at least 100");
  require(std::isfinite(rate) && rate > 0.0, ErrorCode::InvalidParameter, "rate must be > 0");
  IntervalResult r;
  r.center = center;
  r.gamma1 = gammas.gamma1;
  r.gamma2 = gammas.gamma2;
  r.variant = variant;
  r.rate = rate;
  r.quantile_low = s.cdf.inverse(gammas.gamma1);
  r.quantile_high = s.cdf.inverse(1.0 - gammas.gamma2);
  r.lower = center - r.quantile_high / rate;
  r.upper = center - r.quantile_low / rate;
  return r;
}

namespace {

IntervalResult plug_in(const TimeSeries& x, const TimeSeries& y, const Model& model, const Gammas& gammas,
                       const TruncationConfig& trunc, Variant variant) {
  require(x.size() == y.size(), ErrorCode::Contract, "conditioning and estimation paths differ in length");
  const EstimationResult est = model.estimate(y);
  TruncationConfig t = trunc;
  t.t1 = 1;
  const PredictionOutput pred = model.predict(est.theta, x, t);
  return normal_interval(pred.psi, delta_variance(pred, est), est.rate, gammas, variant);
}

}  // namespace

IntervalResult build_interval_2ip(const TimeSeries& x, const TimeSeries& y, const Model& model, const Gammas& gammas,
                                  const TruncationConfig& trunc) {
  return plug_in(x, y, model, gammas, trunc, Variant::TwoIP);
}

IntervalResult build_interval_sta(const TimeSeries& series, const Model& model, const Gammas& gammas,
                                  const TruncationConfig& trunc) {
  return plug_in(series, series, model, gammas, trunc, Variant::STA);
}

IntervalResult build_interval_spl(const TimeSeries& series, const SplitPlan& plan, const Model& model,
                                  const Gammas& gammas, const TruncationConfig& trunc) {
  require(plan.T == series.size(), ErrorCode::Contract, "split plan length differs from the series");
  make_split_plan(plan.T, plan.t_e, plan.t_p);
  const EstimationResult est = model.estimate(series.slice(1, plan.t_e));
  TruncationConfig t = trunc;
  t.t1 = plan.t_p;
  const PredictionOutput pred = model.predict(est.theta, series, t);
  const double rate = std::sqrt(static_cast<double>(plan.T));
  return normal_interval(pred.psi, delta_variance(pred, est), rate, gammas, Variant::SPL);
}

StepCdf chi_square1_minus_one_table(std::size_t n) {
  require(n >= 1, ErrorCode::Precondition, "table size must be positive");
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j)
    v[j] = chi_square1_quantile((static_cast<double>(j) + 0.5) / static_cast<double>(n)) - 1.0;
  return StepCdf::from_samples(v);
}

StepCdf innovation_table_from_residuals(std::span<const double> standardized) {
  std::vector<double> v(standardized.begin(), standardized.end());
  for (double& e : v) e = e * e - 1.0;
  return StepCdf::from_samples(v);
}

IntervalResult prediction_interval_convolution(const ErrorLaw& parameter_error, const StepCdf& innovation,
                                               double sigma2_hat, const Gammas& gammas, std::size_t n_draws,
                                               std::uint64_t seed) {
  gammas.validate();
  require(n_draws >= kMinConvolutionDraws, ErrorCode::Precondition, "insufficient resolution: need at least 1e4 draws");
  require(std::isfinite(sigma2_hat) && sigma2_hat > 0.0, ErrorCode::InvalidParameter, "sigma2_hat must be > 0");

  std::vector<std::size_t> perm(n_draws);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Stream rng(seed, "convolution", 0);
  for (std::size_t i = n_draws - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

  const double n = static_cast<double>(n_draws);
  std::vector<double> draws(n_draws);
  for (std::size_t j = 0; j < n_draws; ++j) {
    const double ui = (static_cast<double>(j) + 0.5) / n;
    const double ue = (static_cast<double>(perm[j]) + 0.5) / n;
    double e;
    if (const auto* nrm = std::get_if<NormalPlugin>(&parameter_error))
      e = std::sqrt(nrm->variance) * normal_quantile(ue);
    else
      e = std::get<StepCdf>(parameter_error).inverse(ue);
    draws[j] = sigma2_hat + e + sigma2_hat * innovation.inverse(ui);
  }
  const StepCdf law = StepCdf::from_samples(draws);

  IntervalResult r;
  r.center = sigma2_hat;
  r.gamma1 = gammas.gamma1;
  r.gamma2 = gammas.gamma2;
  r.variant = Variant::STA;
  r.rate = 1.0;
  r.lower = law.inverse(gammas.gamma1);
  r.upper = law.inverse(1.0 - gammas.gamma2);
  r.quantile_low = r.lower - sigma2_hat;
  r.quantile_high = r.upper - sigma2_hat;
  return r;
}

}  // namespace condint
