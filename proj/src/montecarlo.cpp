#include "condint/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

#include "condint/error.hpp"
#include "condint/normal.hpp"
#include "condint/parallel.hpp"
#include "condint/rng.hpp"

namespace condint {

std::vector<double> default_theta(ModelKind kind) {
  return kind == ModelKind::Ar1 ? std::vector<double>{0.5} : std::vector<double>{0.1, 0.1, 0.8};
}

std::vector<double> ExperimentConfig::theta0() const { return theta.empty() ? default_theta(model) : theta; }

std::unique_ptr<Model> ExperimentConfig::make_model() const { return condint::make_model(model, noise_sd, innovation); }

TruncationConfig ExperimentConfig::truncation() const {
  TruncationConfig t;
  t.start.kind = start_policy;
  t.constants.kind = constants_policy;
  return t;
}

namespace {

void require_split_feasible(const ExperimentConfig& cfg, std::size_t min_len) {
  for (std::size_t T : cfg.T) {
    require(T >= kMinSplitLength, ErrorCode::Configuration,
            "T = " + std::to_string(T) + " is too short for a split plan (need at least 200)");
    const SplitPlan plan = default_split_plan(T, cfg.split);
    require(plan.t_e >= min_len, ErrorCode::Configuration,
            "T = " + std::to_string(T) + " leaves an estimation block of " + std::to_string(plan.t_e) +
                ", below the estimator's minimum of " + std::to_string(min_len));
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  require(reps >= kMinReps, ErrorCode::Precondition, "reps must be at least 100");
  require(!T.empty(), ErrorCode::Configuration, "T grid is empty");
  for (std::size_t i = 1; i < T.size(); ++i)
    require(T[i] > T[i - 1], ErrorCode::Configuration, "T grid must be strictly increasing");
  gammas.validate();
  const auto th = theta0();
  if (model == ModelKind::Ar1) {
    require(th.size() == 1, ErrorCode::Configuration, "ar1 theta has one component (beta)");
    Ar1Params{th[0], noise_sd}.validate();
  } else {
    require(th.size() == 3, ErrorCode::Configuration, "garch11 theta has three components (omega, alpha, beta)");
    Garch11Params::from_theta(th).validate(true);
    innovation.validate();
  }
  const std::size_t min_len = model == ModelKind::Ar1 ? 10 : kQmleMinLength;
  require(T.front() >= min_len, ErrorCode::Configuration, "T is below the estimator's minimum sample length");
  require(!variants.empty(), ErrorCode::Configuration, "no variants selected");
  for (Variant v : variants)
    require(v != Variant::STA, ErrorCode::Configuration, "coverage variants are 2ip and spl");
  if (std::find(variants.begin(), variants.end(), Variant::SPL) != variants.end()) require_split_feasible(*this, min_len);
  require(!t1_offsets.empty(), ErrorCode::Configuration, "t1_offsets is empty");
  for (std::size_t o : t1_offsets) require(o >= 1, ErrorCode::Configuration, "t1 offsets must be positive");
}

void check_failure_cap(std::size_t failures, std::size_t reps) {
  if (failures * 100 > reps)
    fail(ErrorCode::FailureCap, std::to_string(failures) + " of " + std::to_string(reps) +
                                    " replications failed to estimate (cap is 1%)");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_estimation_failure(const Error& e) {
  return e.code() == ErrorCode::EstimationFailed || e.code() == ErrorCode::SingularInformation ||
         e.code() == ErrorCode::Degenerate;
}

std::string tagged(const char* tag, std::size_t T) { return std::string(tag) + ":" + std::to_string(T); }

std::string fingerprint(const TimeSeries& x) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : x.values()) {
    unsigned char bytes[sizeof v];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

TimeSeries suffix(const TimeSeries& x, std::size_t T) {
  const auto v = x.values();
  return TimeSeries(std::vector<double>(v.end() - static_cast<long>(T), v.end()));
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const double h = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::vector<double> finite(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v)
    if (!std::isnan(x)) out.push_back(x);
  return out;
}

struct RepOutcome {
  bool failed = false;
  bool hit = false;
  double width = 0.0;
  double error = kNaN;  // m_T (psi_hat - psi)
};

CoverageReport summarize(Variant variant, std::size_t T, const ExperimentConfig& cfg, const TimeSeries& x,
                         double psi_target, const std::vector<RepOutcome>& reps) {
  CoverageReport r;
  r.variant = variant;
  r.T = T;
  r.R = reps.size();
  double width = 0.0;
  for (const auto& o : reps) {
    if (o.failed) {
      ++r.failure_count;
      continue;
    }
    (o.hit ? r.hit_count : r.miss_count)++;
    width += o.width;
  }
  check_failure_cap(r.failure_count, r.R);
  const double n = static_cast<double>(r.hit_count + r.miss_count);
  r.coverage = static_cast<double>(r.hit_count) / n;
  r.binomial_se = std::sqrt(r.coverage * (1.0 - r.coverage) / n);
  r.target = 1.0 - cfg.gammas.gamma1 - cfg.gammas.gamma2;
  r.psi_target = psi_target;
  r.x_last = x.last();
  r.path_hash = fingerprint(x);
  r.mean_width = width / n;
  return r;
}

void dump(const RunOptions& opts, std::string name, const std::vector<RepOutcome>& reps) {
  if (!opts.samples) return;
  SampleTable t{std::move(name), {}};
  for (const auto& o : reps) t.values.push_back(o.error);
  opts.samples->push_back(std::move(t));
}

}  // namespace

std::vector<CoverageReport> run_coverage_2ip(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const auto model = cfg.make_model();
  const auto theta = cfg.theta0();
  const unsigned threads = resolve_threads(opts.threads);
  TruncationConfig trunc = cfg.truncation();
  std::vector<CoverageReport> out;
  for (std::size_t T : cfg.T) {
    const TimeSeries x = model->simulate(theta, T, derive_seed(cfg.seed, "coverage-path", T));
    const double target = model->predict(theta, x, trunc).psi;
    const std::string tag = tagged("coverage-2ip", T);
    std::vector<RepOutcome> reps(cfg.reps);
    parallel_for(cfg.reps, threads, [&](std::size_t b) {
      const TimeSeries y = model->simulate(theta, T, derive_seed(cfg.seed, tag, b));
      try {
        const auto iv = build_interval_2ip(x, y, *model, cfg.gammas, trunc);
        reps[b] = {false, iv.contains(target), iv.width(), iv.rate * (iv.center - target)};
      } catch (const Error& e) {
        if (!is_estimation_failure(e)) throw;
        reps[b].failed = true;
      }
    });
    out.push_back(summarize(Variant::TwoIP, T, cfg, x, target, reps));
    if (cfg.dump_samples) dump(opts, "coverage_2ip_T" + std::to_string(T), reps);
  }
  return out;
}

std::vector<CoverageReport> run_coverage_spl(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const auto model = cfg.make_model();
  const auto theta = cfg.theta0();
  const unsigned threads = resolve_threads(opts.threads);
  std::vector<CoverageReport> out;
  for (std::size_t T : cfg.T) {
    const SplitPlan plan = default_split_plan(T, cfg.split);
    const TimeSeries x = model->simulate(theta, T, derive_seed(cfg.seed, "coverage-path", T));
    TruncationConfig trunc = cfg.truncation();
    trunc.t1 = plan.t_p;
    const double target = model->predict(theta, x, trunc).psi;
    const std::string tag = tagged("coverage-spl", T);
    const auto xv = x.values();
    std::vector<RepOutcome> reps(cfg.reps);
    parallel_for(cfg.reps, threads, [&](std::size_t b) {
      const TimeSeries block = model->simulate(theta, plan.t_e, derive_seed(cfg.seed, tag, b));
      std::vector<double> spliced(block.values().begin(), block.values().end());
      spliced.insert(spliced.end(), xv.begin() + static_cast<long>(plan.t_e), xv.end());
      try {
        const auto iv = build_interval_spl(TimeSeries(std::move(spliced)), plan, *model, cfg.gammas, trunc);
        reps[b] = {false, iv.contains(target), iv.width(), iv.rate * (iv.center - target)};
      } catch (const Error& e) {
        if (!is_estimation_failure(e)) throw;
        reps[b].failed = true;
      }
    });
    CoverageReport r = summarize(Variant::SPL, T, cfg, x, target, reps);
    r.t_e = plan.t_e;
    r.t_p = plan.t_p;
    r.l_t = plan.l_t;
    out.push_back(std::move(r));
    if (cfg.dump_samples) dump(opts, "coverage_spl_T" + std::to_string(T), reps);
  }
  return out;
}

std::vector<CoverageReport> run_coverage(const ExperimentConfig& cfg, const RunOptions& opts) {
  std::vector<CoverageReport> out;
  for (Variant v : cfg.variants) {
    auto part = v == Variant::TwoIP ? run_coverage_2ip(cfg, opts) : run_coverage_spl(cfg, opts);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

MergingReport run_merging(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  require(cfg.T.size() >= 3, ErrorCode::Configuration, "merging needs a T grid of at least 3 points");
  const auto model = cfg.make_model();
  require_split_feasible(cfg, model->min_length());
  const auto theta = cfg.theta0();
  const unsigned threads = resolve_threads(opts.threads);
  const TimeSeries base = model->simulate(theta, cfg.T.back(), derive_seed(cfg.seed, "merging-path", 0));

  MergingReport rep;
  rep.R = cfg.reps;
  for (std::size_t T : cfg.T) {
    const TimeSeries x = suffix(base, T);
    const SplitPlan plan = default_split_plan(T, cfg.split);
    TruncationConfig full = cfg.truncation();
    TruncationConfig cond = full;
    cond.t1 = plan.t_p;
    const double target_2ip = model->predict(theta, x, full).psi;
    const double target_spl = model->predict(theta, x, cond).psi;
    const double m = std::sqrt(static_cast<double>(T));
    const std::string tag = tagged("merging", T);

    std::vector<double> e2(cfg.reps, kNaN), es(cfg.reps, kNaN), v2(cfg.reps, kNaN), vs(cfg.reps, kNaN);
    parallel_for(cfg.reps, threads, [&](std::size_t b) {
      const TimeSeries y = model->simulate(theta, T, derive_seed(cfg.seed, tag, b));
      try {
        const auto est2 = model->estimate(y);
        const auto ests = model->estimate(y.slice(1, plan.t_e));
        const auto p2 = model->predict(est2.theta, x, full);
        const auto ps = model->predict(ests.theta, x, cond);
        e2[b] = m * (p2.psi - target_2ip);
        es[b] = m * (ps.psi - target_spl);
        v2[b] = delta_variance(p2, est2);
        vs[b] = delta_variance(ps, ests);
      } catch (const Error& e) {
        if (!is_estimation_failure(e)) throw;
      }
    });

    MergingRow row;
    row.T = T;
    row.x_last = x.last();
    row.t_e = plan.t_e;
    row.t_p = plan.t_p;
    for (double v : e2) row.failures += std::isnan(v) ? 1 : 0;
    check_failure_cap(row.failures, cfg.reps);
    const auto a = finite(e2), s = finite(es), va = finite(v2), vsf = finite(vs);
    row.n_2ip = a.size();
    row.n_spl = s.size();
    const StepCdf fa = StepCdf::from_samples(a), fs = StepCdf::from_samples(s);
    row.d_bl = d_bounded_lipschitz(fa, fs);
    auto mixture = [](const std::vector<double>& vars) {
      std::vector<double> sd(vars.size());
      for (std::size_t i = 0; i < vars.size(); ++i) sd[i] = std::sqrt(vars[i]);
      return [sd](double tau) {
        double acc = 0.0;
        for (double s : sd) acc += normal_cdf(tau / s);
        return acc / static_cast<double>(sd.size());
      };
    };
    row.d_k_2ip = d_kolmogorov(fa, mixture(va));
    row.d_k_spl = d_kolmogorov(fs, mixture(vsf));
    rep.rows.push_back(row);

    if (cfg.dump_samples && opts.samples) {
      opts.samples->push_back({"merging_2ip_T" + std::to_string(T), e2});
      opts.samples->push_back({"merging_spl_T" + std::to_string(T), es});
    }
  }
  return rep;
}

EquivalenceReport run_equivalence(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  require(cfg.T.size() >= 3, ErrorCode::Configuration, "equivalence needs a T grid of at least 3 points");
  const auto model = cfg.make_model();
  require_split_feasible(cfg, model->min_length());
  const auto theta = cfg.theta0();
  const unsigned threads = resolve_threads(opts.threads);
  const std::size_t nT = cfg.T.size();
  const double us[2] = {cfg.gammas.gamma1, 1.0 - cfg.gammas.gamma2};
  const double zs[2] = {normal_quantile(us[0]), normal_quantile(us[1])};
  std::vector<SplitPlan> plans;
  for (std::size_t T : cfg.T) plans.push_back(default_split_plan(T, cfg.split));

  // [rep][T index][0: center gap, 1..2: quantile gaps]
  std::vector<double> gaps(cfg.reps * nT * 3, kNaN);
  parallel_for(cfg.reps, threads, [&](std::size_t b) {
    const TimeSeries path = model->simulate(theta, cfg.T.back(), derive_seed(cfg.seed, "equivalence", b));
    for (std::size_t k = 0; k < nT; ++k) {
      const TimeSeries x = suffix(path, cfg.T[k]);
      TruncationConfig full = cfg.truncation();
      TruncationConfig cond = full;
      cond.t1 = plans[k].t_p;
      try {
        const auto sta = model->estimate(x);
        const auto spl = model->estimate(x.slice(1, plans[k].t_e));
        const auto ps = model->predict(sta.theta, x, full);
        const auto pp = model->predict(spl.theta, x, cond);
        const double sd_sta = std::sqrt(delta_variance(ps, sta));
        const double sd_spl = std::sqrt(delta_variance(pp, spl));
        double* g = &gaps[(b * nT + k) * 3];
        g[0] = std::abs(ps.psi - pp.psi);
        g[1] = std::abs((sd_sta - sd_spl) * zs[0]);
        g[2] = std::abs((sd_sta - sd_spl) * zs[1]);
      } catch (const Error& e) {
        if (!is_estimation_failure(e)) throw;
      }
    }
  });

  EquivalenceReport rep;
  rep.R = cfg.reps;
  for (std::size_t k = 0; k < nT; ++k) {
    std::vector<double> col[3];
    EquivalenceRow row;
    row.T = cfg.T[k];
    for (std::size_t b = 0; b < cfg.reps; ++b) {
      const double* g = &gaps[(b * nT + k) * 3];
      if (std::isnan(g[0])) {
        ++row.failures;
        continue;
      }
      for (int j = 0; j < 3; ++j) col[j].push_back(g[j]);
    }
    check_failure_cap(row.failures, cfg.reps);
    row.n = col[0].size();
    row.median_center_gap = quantile(col[0], 0.5);
    row.p90_center_gap = quantile(col[0], 0.9);
    for (int j = 0; j < 2; ++j) row.quantile_gaps.push_back({us[j], quantile(col[j + 1], 0.5), quantile(col[j + 1], 0.9)});
    rep.rows.push_back(row);
    if (cfg.dump_samples && opts.samples) {
      SampleTable t{"equivalence_center_gap_T" + std::to_string(row.T), {}};
      for (std::size_t b = 0; b < cfg.reps; ++b) t.values.push_back(gaps[(b * nT + k) * 3]);
      opts.samples->push_back(std::move(t));
    }
  }
  return rep;
}

NegligibilityReport run_negligibility(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  require(cfg.model == ModelKind::Garch11, ErrorCode::Configuration, "negligibility needs the garch11 model");
  const auto theta = cfg.theta0();
  const Garch11Params params = Garch11Params::from_theta(theta);
  const std::size_t T = cfg.T.front();
  const SplitPlan plan = default_split_plan(T, cfg.split);
  const unsigned threads = resolve_threads(opts.threads);
  const double m = std::sqrt(static_cast<double>(T));
  const TruncationConfig trunc = cfg.truncation();

  std::vector<std::size_t> t1s;
  for (std::size_t o : cfg.t1_offsets) {
    require(o < T, ErrorCode::Configuration, "t1 offset must be below T");
    t1s.push_back(T - o);
  }
  t1s.push_back(plan.t_p);
  const std::size_t nc = t1s.size();

  std::vector<double> gaps(cfg.reps * nc);
  parallel_for(cfg.reps, threads, [&](std::size_t b) {
    const auto path = simulate_garch11(params, T, derive_seed(cfg.seed, "negligibility", b), cfg.innovation);
    for (std::size_t k = 0; k < nc; ++k) gaps[b * nc + k] = m * truncation_gap(params, path.series, t1s[k], trunc);
  });

  auto row_for = [&](std::size_t k) {
    std::vector<double> col(cfg.reps);
    for (std::size_t b = 0; b < cfg.reps; ++b) col[b] = gaps[b * nc + k];
    NegligibilityRow r;
    r.t1 = t1s[k];
    r.offset = T - t1s[k];
    r.q10 = quantile(col, 0.1);
    r.median = quantile(col, 0.5);
    r.q90 = quantile(col, 0.9);
    r.max = *std::max_element(col.begin(), col.end());
    return r;
  };

  NegligibilityReport rep;
  rep.T = T;
  rep.R = cfg.reps;
  for (std::size_t k = 0; k + 1 < nc; ++k) rep.rows.push_back(row_for(k));
  rep.split_row = row_for(nc - 1);
  rep.log_beta = std::log(params.beta);

  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (const auto& r : rep.rows) {
    if (!(r.median > 0.0)) continue;
    const double xo = static_cast<double>(r.offset), yo = std::log(r.median);
    sx += xo;
    sy += yo;
    sxx += xo * xo;
    sxy += xo * yo;
    n += 1;
  }
  rep.slope = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : kNaN;

  if (cfg.dump_samples && opts.samples) {
    for (std::size_t k = 0; k < nc; ++k) {
      SampleTable t{"negligibility_offset" + std::to_string(T - t1s[k]), {}};
      for (std::size_t b = 0; b < cfg.reps; ++b) t.values.push_back(gaps[b * nc + k]);
      opts.samples->push_back(std::move(t));
    }
  }
  return rep;
}

}  // namespace condint
