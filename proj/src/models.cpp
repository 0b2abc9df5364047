#include "condint/models.hpp"

#include <cmath>

#include "condint/error.hpp"
#include "condint/rng.hpp"

namespace condint {

void Ar1Params::validate() const {
  require(std::isfinite(beta) && std::isfinite(noise_sd), ErrorCode::InvalidParameter,
          "AR(1) parameters must be finite");
  require(std::abs(beta) < 1.0, ErrorCode::InvalidParameter, "AR(1) needs |beta| < 1");
  require(noise_sd > 0.0, ErrorCode::InvalidParameter, "AR(1) needs noise_sd > 0");
}

void Garch11Params::validate(bool stationary) const {
  require(std::isfinite(omega) && std::isfinite(alpha) && std::isfinite(beta), ErrorCode::InvalidParameter,
          "GARCH(1,1) parameters must be finite");
  require(omega > 0.0, ErrorCode::InvalidParameter, "GARCH(1,1) needs omega > 0");
  require(alpha >= 0.0, ErrorCode::InvalidParameter, "GARCH(1,1) needs alpha >= 0");
  require(beta >= 0.0 && beta < 1.0, ErrorCode::InvalidParameter, "GARCH(1,1) needs 0 <= beta < 1");
  if (stationary)
    require(alpha + beta < 1.0, ErrorCode::InvalidParameter, "GARCH(1,1) needs alpha + beta < 1");
}

double Garch11Params::unconditional_variance() const {
  require(alpha + beta < 1.0, ErrorCode::InvalidParameter, "unconditional variance needs alpha + beta < 1");
  return omega / (1.0 - alpha - beta);
}

Garch11Params Garch11Params::from_theta(const std::vector<double>& theta) {
  require(theta.size() == 3, ErrorCode::Contract, "GARCH(1,1) theta has 3 components");
  return {theta[0], theta[1], theta[2]};
}

void InnovationSpec::validate() const {
  if (kind == InnovationKind::StudentT)
    require(std::isfinite(df) && df > 4.0, ErrorCode::InvalidParameter, "student-t innovations need df > 4");
}

void FillPolicy::validate() const {
  for (double v : values)
    require(std::isfinite(v), ErrorCode::Configuration, "explicit fill values must be finite");
}

TimeSeries simulate_ar1(const Ar1Params& params, std::size_t length, std::uint64_t seed) {
  params.validate();
  require(length >= 1, ErrorCode::Precondition, "simulation length must be >= 1");
  Stream rng(seed);
  const double sd0 = params.noise_sd / std::sqrt(1.0 - params.beta * params.beta);
  double x = sd0 * rng.normal();
  std::vector<double> out(length);
  for (auto& v : out) {
    x = params.beta * x + params.noise_sd * rng.normal();
    v = x;
  }
  return TimeSeries(std::move(out));
}

GarchPath simulate_garch11(const Garch11Params& params, std::size_t length, std::uint64_t seed,
                           const InnovationSpec& innovation) {
  params.validate(true);
  innovation.validate();
  require(length >= 1, ErrorCode::Precondition, "simulation length must be >= 1");
  Stream rng(seed);
  auto eps = [&] {
    return innovation.kind == InnovationKind::Gaussian ? rng.normal() : rng.student_t_unit(innovation.df);
  };
  double s2 = params.unconditional_variance();
  double x = std::sqrt(s2) * eps();
  std::vector<double> xs(length), s2s(length);
  for (std::size_t i = 0; i < kGarchBurnIn + length; ++i) {
    s2 = params.omega + params.alpha * x * x + params.beta * s2;
    x = std::sqrt(s2) * eps();
    if (i >= kGarchBurnIn) {
      xs[i - kGarchBurnIn] = x;
      s2s[i - kGarchBurnIn] = s2;
    }
  }
  return {TimeSeries(std::move(xs)), std::move(s2s)};
}

PredictionOutput predict_ar1(const Ar1Params& params, const TimeSeries& series, const TruncationConfig&) {
  require(std::isfinite(params.beta), ErrorCode::InvalidParameter, "AR(1) beta must be finite");
  const double xT = series.last();
  return {params.beta * xT, {xT}};
}

std::size_t required_start_values(double beta, std::size_t T) {
  if (beta <= 0.0) return 0;
  const double k = std::ceil(std::log(1e-16) / std::log(beta));
  return k > static_cast<double>(T) ? static_cast<std::size_t>(k) - T : 0;
}

PredictionOutput predict_garch11(const Garch11Params& p, const TimeSeries& series, const TruncationConfig& trunc) {
  const std::size_t T = series.size();
  const std::size_t t1 = trunc.t1;
  require(t1 >= 1 && t1 <= T, ErrorCode::Contract, "t1 must satisfy 1 <= t1 <= T");
  using K = FillPolicy::Kind;
  const bool moment = trunc.start.kind == K::UnconditionalMoment || (t1 > 1 && trunc.constants.kind == K::UnconditionalMoment);
  p.validate(moment);
  trunc.start.validate();
  trunc.constants.validate();
  if (trunc.constants.kind == K::Explicit)
    require(trunc.constants.values.size() >= t1 - 1, ErrorCode::Configuration,
            "explicit constants list shorter than t1 - 1");
  if (trunc.start.kind == K::Explicit)
    require(trunc.start.values.size() >= required_start_values(p.beta, T), ErrorCode::Configuration,
            "explicit start-value list shorter than the required horizon");

  // Weight of position t is beta^{T-t}; walk t = T, T-1, ... carrying the
  // weight and its beta-derivative. F collects fixed values, W the weight of
  // positions filled with the unconditional moment u(theta).
  const auto x = series.values();
  const double beta = p.beta;
  double w = 1.0, dw = 0.0;
  double F = 0.0, dF = 0.0, W = 0.0, dW = 0.0;
  auto step = [&] {
    dw = w + beta * dw;
    w *= beta;
  };
  for (std::size_t t = T; t >= t1; --t) {
    const double v = x[t - 1] * x[t - 1];
    F += w * v;
    dF += dw * v;
    step();
  }
  for (std::size_t t = t1 - 1; t >= 1; --t) {
    switch (trunc.constants.kind) {
      case K::Zeros: break;
      case K::UnconditionalMoment:
        W += w;
        dW += dw;
        break;
      case K::Explicit: {
        const double c = trunc.constants.values[t - 1];
        F += w * c * c;
        dF += dw * c * c;
        break;
      }
    }
    step();
  }
  // Now w = beta^T, dw = T beta^{T-1}.
  switch (trunc.start.kind) {
    case K::Zeros: break;
    case K::UnconditionalMoment:
      W += w / (1.0 - beta);
      dW += dw / (1.0 - beta) + w / ((1.0 - beta) * (1.0 - beta));
      break;
    case K::Explicit:
      for (double s : trunc.start.values) {
        F += w * s * s;
        dF += dw * s * s;
        step();
      }
      break;
  }

  const double one_b = 1.0 - beta;
  double u = 0.0, du = 0.0;  // du = d u / d omega; d u / d alpha = d u / d beta = omega du^2
  if (W != 0.0 || dW != 0.0) {
    du = 1.0 / (1.0 - p.alpha - beta);
    u = p.omega * du;
  }
  const double du_ab = p.omega * du * du;
  PredictionOutput out;
  out.psi = p.omega / one_b + p.alpha * (F + u * W);
  out.gradient = {
      1.0 / one_b + p.alpha * W * du,
      F + u * W + p.alpha * W * du_ab,
      p.omega / (one_b * one_b) + p.alpha * (dF + u * dW + W * du_ab),
  };
  return out;
}

double truncation_gap(const Garch11Params& params, const TimeSeries& series, std::size_t t1,
                      const TruncationConfig& base) {
  TruncationConfig a = base, b = base;
  a.t1 = t1;
  b.t1 = 1;
  return std::abs(predict_garch11(params, series, a).psi - predict_garch11(params, series, b).psi);
}

}  // namespace condint
