#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "condint/estimation.hpp"
#include "condint/models.hpp"

namespace condint {

enum class ModelKind { Ar1, Garch11 };

const char* to_string(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view text);

/// A parametric time-series model seen through its prediction function:
/// simulate, estimate theta, evaluate psi and its gradient. New models plug
/// into the interval builders and experiments through this interface.
class Model {
 public:
  virtual ~Model() = default;

  virtual ModelKind kind() const noexcept = 0;
  virtual std::size_t dim() const noexcept = 0;
  /// Shortest sample the estimator accepts.
  virtual std::size_t min_length() const noexcept = 0;
  virtual TimeSeries simulate(const std::vector<double>& theta, std::size_t length,
                              std::uint64_t seed) const = 0;
  virtual EstimationResult estimate(const TimeSeries& series) const = 0;
  virtual PredictionOutput predict(const std::vector<double>& theta, const TimeSeries& series,
                                   const TruncationConfig& trunc) const = 0;
};

class Ar1Model final : public Model {
 public:
  explicit Ar1Model(double noise_sd = 1.0) : noise_sd_(noise_sd) {}

  ModelKind kind() const noexcept override { return ModelKind::Ar1; }
  std::size_t dim() const noexcept override { return 1; }
  std::size_t min_length() const noexcept override { return 10; }
  TimeSeries simulate(const std::vector<double>& theta, std::size_t length,
                      std::uint64_t seed) const override;
  EstimationResult estimate(const TimeSeries& series) const override;
  PredictionOutput predict(const std::vector<double>& theta, const TimeSeries& series,
                           const TruncationConfig& trunc) const override;

 private:
  double noise_sd_;
};

class Garch11Model final : public Model {
 public:
  explicit Garch11Model(InnovationSpec innovation = {}, QmleOptions qmle = {})
      : innovation_(innovation), qmle_(qmle) {}

  ModelKind kind() const noexcept override { return ModelKind::Garch11; }
  std::size_t dim() const noexcept override { return 3; }
  std::size_t min_length() const noexcept override { return kQmleMinLength; }
  TimeSeries simulate(const std::vector<double>& theta, std::size_t length,
                      std::uint64_t seed) const override;
  EstimationResult estimate(const TimeSeries& series) const override;
  PredictionOutput predict(const std::vector<double>& theta, const TimeSeries& series,
                           const TruncationConfig& trunc) const override;

 private:
  InnovationSpec innovation_;
  QmleOptions qmle_;
};

std::unique_ptr<Model> make_model(ModelKind kind, double noise_sd = 1.0,
                                  const InnovationSpec& innovation = {});

}  // namespace condint
