#include "condint/model.hpp"

#include "condint/error.hpp"

namespace condint {

const char* to_string(ModelKind kind) noexcept {
  return kind == ModelKind::Ar1 ? "ar1" : "garch11";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "ar1") return ModelKind::Ar1;
  if (text == "garch11") return ModelKind::Garch11;
  fail(ErrorCode::Configuration, "unknown model '" + std::string(text) + "' (expected ar1 or garch11)");
}

namespace {

Ar1Params ar1_params(const std::vector<double>& theta, double noise_sd) {
  require(theta.size() == 1, ErrorCode::Contract, "AR(1) theta has 1 component");
  return {theta[0], noise_sd};
}

}  // namespace

TimeSeries Ar1Model::simulate(const std::vector<double>& theta, std::size_t length, std::uint64_t seed) const {
  return simulate_ar1(ar1_params(theta, noise_sd_), length, seed);
}

EstimationResult Ar1Model::estimate(const TimeSeries& series) const {
  require(series.size() >= min_length(), ErrorCode::Precondition, "AR(1) estimation needs at least 10 observations");
  return estimate_ar1_ols(series);
}

PredictionOutput Ar1Model::predict(const std::vector<double>& theta, const TimeSeries& series,
                                   const TruncationConfig& trunc) const {
  return predict_ar1(ar1_params(theta, noise_sd_), series, trunc);
}

TimeSeries Garch11Model::simulate(const std::vector<double>& theta, std::size_t length, std::uint64_t seed) const {
  return simulate_garch11(Garch11Params::from_theta(theta), length, seed, innovation_).series;
}

EstimationResult Garch11Model::estimate(const TimeSeries& series) const {
  return estimate_garch11_qmle(series, qmle_);
}

PredictionOutput Garch11Model::predict(const std::vector<double>& theta, const TimeSeries& series,
                                       const TruncationConfig& trunc) const {
  return predict_garch11(Garch11Params::from_theta(theta), series, trunc);
}

std::unique_ptr<Model> make_model(ModelKind kind, double noise_sd, const InnovationSpec& innovation) {
  if (kind == ModelKind::Ar1) return std::make_unique<Ar1Model>(noise_sd);
  return std::make_unique<Garch11Model>(innovation);
}

}  // namespace condint
