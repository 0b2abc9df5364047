#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "condint/intervals.hpp"
#include "condint/model.hpp"

namespace condint {

struct ExperimentConfig {
  std::string name = "default";
  ModelKind model = ModelKind::Ar1;
  std::vector<double> theta;  // theta_0; empty means the model default
  double noise_sd = 1.0;      // AR(1)
  InnovationSpec innovation;  // GARCH(1,1)
  std::vector<std::size_t> T;
  std::size_t reps = 1000;
  Gammas gammas;
  std::uint64_t seed = 0;
  std::vector<Variant> variants{Variant::TwoIP, Variant::SPL};
  SplitRule split;
  FillPolicy::Kind start_policy = FillPolicy::Kind::UnconditionalMoment;
  FillPolicy::Kind constants_policy = FillPolicy::Kind::UnconditionalMoment;
  std::vector<std::size_t> t1_offsets{5, 10, 20, 40, 80};
  bool dump_samples = false;

  /// reps >= 100, T nonempty and strictly increasing, gammas valid,
  /// theta consistent with the model.
  void validate() const;
  std::vector<double> theta0() const;
  std::unique_ptr<Model> make_model() const;
  TruncationConfig truncation() const;

  bool operator==(const ExperimentConfig&) const = default;
};

inline constexpr std::size_t kMinReps = 100;

std::vector<double> default_theta(ModelKind kind);

struct CoverageReport {
  Variant variant = Variant::TwoIP;
  std::size_t T = 0;
  std::size_t R = 0;
  std::size_t hit_count = 0;
  std::size_t miss_count = 0;
  std::size_t failure_count = 0;
  double coverage = 0.0;     // hits / (hits + misses)
  double binomial_se = 0.0;  // sqrt(coverage (1 - coverage) / (hits + misses))
  double target = 0.0;       // 1 - gamma1 - gamma2
  double psi_target = 0.0;   // conditional target at theta_0
  double x_last = 0.0;       // x_T of the conditioning path
  std::string path_hash;     // FNV-1a of the conditioning path bytes
  double mean_width = 0.0;
  std::size_t t_e = 0;  // SPL only
  std::size_t t_p = 0;  // SPL only
  double l_t = 0.0;     // SPL only

  bool operator==(const CoverageReport&) const = default;
};

struct MergingRow {
  std::size_t T = 0;
  std::size_t n_2ip = 0;
  std::size_t n_spl = 0;
  std::size_t failures = 0;
  double d_bl = 0.0;      // between the 2IP and SPL error laws
  double d_k_2ip = 0.0;   // 2IP error law vs its plug-in normal
  double d_k_spl = 0.0;   // SPL error law vs its plug-in normal
  double x_last = 0.0;
  std::size_t t_e = 0;
  std::size_t t_p = 0;

  bool operator==(const MergingRow&) const = default;
};

struct MergingReport {
  std::size_t R = 0;
  std::vector<MergingRow> rows;

  bool operator==(const MergingReport&) const = default;
};

struct QuantileGap {
  double u = 0.0;
  double median = 0.0;
  double p90 = 0.0;

  bool operator==(const QuantileGap&) const = default;
};

struct EquivalenceRow {
  std::size_t T = 0;
  std::size_t n = 0;
  std::size_t failures = 0;
  double median_center_gap = 0.0;
  double p90_center_gap = 0.0;
  std::vector<QuantileGap> quantile_gaps;  // u = gamma1, 1 - gamma2

  bool operator==(const EquivalenceRow&) const = default;
};

struct EquivalenceReport {
  std::size_t R = 0;
  std::vector<EquivalenceRow> rows;

  bool operator==(const EquivalenceReport&) const = default;
};

struct NegligibilityRow {
  std::size_t offset = 0;  // T - t1
  std::size_t t1 = 0;
  double q10 = 0.0;
  double median = 0.0;
  double q90 = 0.0;
  double max = 0.0;

  bool operator==(const NegligibilityRow&) const = default;
};

struct NegligibilityReport {
  std::size_t T = 0;
  std::size_t R = 0;
  /// Quantiles of m_T * truncation_gap over reps, by offset.
  std::vector<NegligibilityRow> rows;
  /// Least-squares slope of log median against offset, and ln beta_0.
  double slope = 0.0;
  double log_beta = 0.0;
  /// Row for t1 = t_p of the default split plan.
  NegligibilityRow split_row;

  bool operator==(const NegligibilityReport&) const = default;
};

/// Raw per-rep values for external analysis (`rep,value` CSV).
struct SampleTable {
  std::string name;
  std::vector<double> values;  // NaN marks a failed rep
};

struct RunOptions {
  unsigned threads = 0;  // see resolve_threads
  std::vector<SampleTable>* samples = nullptr;
};

/// One conditioning path per T; each rep draws an independent path Y_b and
/// builds the 2IP interval from (x, Y_b). One report per T.
std::vector<CoverageReport> run_coverage_2ip(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// One conditioning path per T; each rep splices a fresh stationary block of
/// length t_e in front of the frozen x_{t_e+1:T} and builds the SPL interval.
std::vector<CoverageReport> run_coverage_spl(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Coverage for every configured variant.
std::vector<CoverageReport> run_coverage(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Error laws m_T (psi_hat - psi) of both estimators on a common conditioning
/// path. Both arms draw from the same per-rep stream; the SPL estimation block
/// is the first t_e values of the 2IP path.
MergingReport run_merging(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// STA vs SPL centers and normal quantile terms on the same path, per rep.
EquivalenceReport run_equivalence(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Distribution of m_T * truncation_gap at theta_0 for t1 = T - offset, using
/// the first T of the grid. GARCH only.
NegligibilityReport run_negligibility(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Reps with estimation failures are excluded; more than 1% aborts the run.
void check_failure_cap(std::size_t failures, std::size_t reps);

}  // namespace condint
