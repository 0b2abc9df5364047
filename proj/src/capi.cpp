#include "condint.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "condint/config.hpp"
#include "condint/error.hpp"
#include "condint/intervals.hpp"
#include "condint/metrics.hpp"
#include "condint/model.hpp"
#include "condint/montecarlo.hpp"
#include "condint/report.hpp"

struct condint_series {
  condint::TimeSeries value;
};

struct condint_cdf {
  condint::StepCdf value;
};

struct condint_config {
  std::vector<condint::ExperimentConfig> experiments;
};

struct condint_report {
  condint::Report value;
  std::vector<condint::SampleTable> samples;
};

namespace {

thread_local std::string last_error;

condint_status status_of(condint::ErrorCode code) {
  using condint::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidParameter: return CONDINT_E_INVALID_PARAMETER;
    case ErrorCode::Configuration: return CONDINT_E_CONFIGURATION;
    case ErrorCode::Precondition: return CONDINT_E_PRECONDITION;
    case ErrorCode::Degenerate: return CONDINT_E_DEGENERATE;
    case ErrorCode::EstimationFailed: return CONDINT_E_ESTIMATION_FAILED;
    case ErrorCode::SingularInformation: return CONDINT_E_SINGULAR_INFORMATION;
    case ErrorCode::Contract: return CONDINT_E_CONTRACT;
    case ErrorCode::FailureCap: return CONDINT_E_FAILURE_CAP;
    case ErrorCode::Io: return CONDINT_E_IO;
  }
  return CONDINT_E_INTERNAL;
}

template <class F>
condint_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return CONDINT_OK;
  } catch (const condint::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CONDINT_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CONDINT_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw condint::Error(condint::ErrorCode::Contract, std::string("null argument: ") + what);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

std::unique_ptr<condint::Model> model_of(const condint_model_spec& spec, std::vector<double>& theta) {
  condint::InnovationSpec innov;
  if (spec.student_df > 0.0) innov = {condint::InnovationKind::StudentT, spec.student_df};
  const auto kind = spec.model == CONDINT_AR1 ? condint::ModelKind::Ar1 : condint::ModelKind::Garch11;
  if (spec.model != CONDINT_AR1 && spec.model != CONDINT_GARCH11)
    throw condint::Error(condint::ErrorCode::InvalidParameter, "unknown model");
  auto model = condint::make_model(kind, spec.noise_sd > 0.0 ? spec.noise_sd : 1.0, innov);
  if (spec.dim != model->dim()) throw condint::Error(condint::ErrorCode::Contract, "theta dimension does not match the model");
  theta.assign(spec.theta, spec.theta + spec.dim);
  return model;
}

condint::KeyValues spec_fields(const condint_model_spec& spec) {
  condint::KeyValues kv;
  kv.emplace_back("model", spec.model == CONDINT_AR1 ? "ar1" : "garch11");
  return kv;
}

condint::IntervalResult interval_of(const condint_model_spec* spec, condint_variant variant, const condint_series* x,
                                    const condint_series* y, double gamma1, double gamma2) {
  need(spec, "spec");
  need(x, "x");
  std::vector<double> theta;
  const auto model = model_of(*spec, theta);
  const condint::Gammas g{gamma1, gamma2};
  switch (variant) {
    case CONDINT_2IP:
      need(y, "y");
      return condint::build_interval_2ip(x->value, y->value, *model, g);
    case CONDINT_SPL:
      return condint::build_interval_spl(x->value, condint::default_split_plan(x->value.size()), *model, g);
    case CONDINT_STA:
      return condint::build_interval_sta(x->value, *model, g);
  }
  throw condint::Error(condint::ErrorCode::InvalidParameter, "unknown variant");
}

}  // namespace

extern "C" {

const char* condint_version(void) { return CONDINT_VERSION; }

const char* condint_status_string(condint_status status) {
  switch (status) {
    case CONDINT_OK: return "ok";
    case CONDINT_E_INVALID_PARAMETER: return "invalid-parameter";
    case CONDINT_E_CONFIGURATION: return "configuration";
    case CONDINT_E_PRECONDITION: return "precondition";
    case CONDINT_E_DEGENERATE: return "degenerate";
    case CONDINT_E_ESTIMATION_FAILED: return "estimation-failed";
    case CONDINT_E_SINGULAR_INFORMATION: return "singular-information";
    case CONDINT_E_CONTRACT: return "contract";
    case CONDINT_E_FAILURE_CAP: return "failure-cap";
    case CONDINT_E_IO: return "io";
    case CONDINT_E_NULL_ARGUMENT: return "null-argument";
    case CONDINT_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* condint_last_error(void) { return last_error.c_str(); }

void condint_string_free(char* s) { std::free(s); }

condint_status condint_series_create(const double* values, size_t n, condint_series** out) {
  if (!out || (!values && n)) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] { *out = new condint_series{condint::TimeSeries(std::vector<double>(values, values + n))}; });
}

condint_status condint_series_read_csv(const char* path, condint_series** out) {
  if (!path || !out) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] { *out = new condint_series{condint::read_series_csv(path)}; });
}

condint_status condint_series_to_csv(const condint_series* series, char** out) {
  if (!series || !out) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] { *out = dup(condint::series_to_csv(series->value)); });
}

size_t condint_series_length(const condint_series* series) { return series ? series->value.size() : 0; }

condint_status condint_series_values(const condint_series* series, double* out, size_t n) {
  if (!series || (!out && n)) return CONDINT_E_NULL_ARGUMENT;
  const auto v = series->value.values();
  std::memcpy(out, v.data(), std::min(n, v.size()) * sizeof(double));
  return CONDINT_OK;
}

void condint_series_free(condint_series* series) { delete series; }

condint_status condint_simulate(const condint_model_spec* spec, size_t length, uint64_t seed, condint_series** out) {
  if (!spec || !out) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] {
    std::vector<double> theta;
    const auto model = model_of(*spec, theta);
    *out = new condint_series{model->simulate(theta, length, seed)};
  });
}

condint_status condint_estimate_model(const condint_model_spec* spec, const condint_series* series,
                                      condint_estimate* out) {
  if (!spec || !series || !out) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] {
    std::vector<double> theta;
    const auto model = model_of(*spec, theta);
    const auto est = model->estimate(series->value);
    *out = condint_estimate{};
    out->dim = est.theta.size();
    for (size_t i = 0; i < out->dim; ++i) {
      out->theta[i] = est.theta[i];
      for (size_t j = 0; j < out->dim; ++j) out->cov[i * out->dim + j] = est.cov(i, j);
    }
    out->rate = est.rate;
    out->n_used = est.n_used;
    out->iterations = est.diagnostics.iterations;
    out->objective = est.diagnostics.objective;
    out->beta_unidentified = est.diagnostics.beta_unidentified ? 1 : 0;
  });
}

condint_status condint_build_interval(const condint_model_spec* spec, condint_variant variant, const condint_series* x,
                                      const condint_series* y, double gamma1, double gamma2, condint_interval* out) {
  if (!spec || !x || !out) return CONDINT_E_NULL_ARGUMENT;
  if (variant == CONDINT_2IP && !y) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] {
    const auto r = interval_of(spec, variant, x, y, gamma1, gamma2);
    *out = {r.lower, r.upper, r.center, r.gamma1, r.gamma2, r.variance, r.quantile_low, r.quantile_high, r.rate, variant};
  });
}

condint_status condint_cdf_from_samples(const double* samples, size_t n, condint_cdf** out) {
  if (!out || (!samples && n)) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] { *out = new condint_cdf{condint::StepCdf::from_samples(std::span<const double>(samples, n))}; });
}

double condint_cdf_eval(const condint_cdf* cdf, double tau) { return cdf ? cdf->value.eval(tau) : 0.0; }

condint_status condint_cdf_inverse(const condint_cdf* cdf, double u, double* out) {
  if (!cdf || !out) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] { *out = cdf->value.inverse(u); });
}

void condint_cdf_free(condint_cdf* cdf) { delete cdf; }

condint_status condint_distance(const condint_cdf* f, const condint_cdf* g, condint_metric metric, double* out) {
  if (!f || !g || !out) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] {
    switch (metric) {
      case CONDINT_KOLMOGOROV: *out = condint::d_kolmogorov(f->value, g->value); return;
      case CONDINT_LEVY: *out = condint::d_levy(f->value, g->value); return;
      case CONDINT_BOUNDED_LIPSCHITZ: *out = condint::d_bounded_lipschitz(f->value, g->value); return;
    }
    throw condint::Error(condint::ErrorCode::InvalidParameter, "unknown metric");
  });
}

condint_status condint_config_parse_file(const char* path, condint_config** out) {
  if (!path || !out) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] { *out = new condint_config{condint::parse_config(path)}; });
}

condint_status condint_config_parse_text(const char* text, condint_config** out) {
  if (!text || !out) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] { *out = new condint_config{condint::parse_config_text(text)}; });
}

size_t condint_config_count(const condint_config* config) { return config ? config->experiments.size() : 0; }

condint_status condint_config_name(const condint_config* config, size_t index, char** out) {
  if (!config || !out) return CONDINT_E_NULL_ARGUMENT;
  if (index >= config->experiments.size()) return CONDINT_E_CONTRACT;
  return guard([&] { *out = dup(config->experiments[index].name); });
}

condint_status condint_config_seed(const condint_config* config, size_t index, uint64_t* out) {
  if (!config || !out) return CONDINT_E_NULL_ARGUMENT;
  if (index >= config->experiments.size()) return CONDINT_E_CONTRACT;
  *out = config->experiments[index].seed;
  return CONDINT_OK;
}

condint_status condint_config_set_seed(condint_config* config, uint64_t seed) {
  if (!config) return CONDINT_E_NULL_ARGUMENT;
  for (auto& e : config->experiments) e.seed = seed;
  return CONDINT_OK;
}

condint_status condint_config_echo(const condint_config* config, char** out) {
  if (!config || !out) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] { *out = dup(condint::echo_config(config->experiments)); });
}

condint_status condint_config_reference(char** out) {
  if (!out) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] { *out = dup(condint::config_reference()); });
}

void condint_config_free(condint_config* config) { delete config; }

condint_status condint_run(const condint_config* config, size_t index, const char* kind, unsigned threads,
                           condint_report** out) {
  if (!config || !kind || !out) return CONDINT_E_NULL_ARGUMENT;
  if (index >= config->experiments.size()) return CONDINT_E_CONTRACT;
  return guard([&] {
    const auto& cfg = config->experiments[index];
    auto rep = std::make_unique<condint_report>();
    condint::RunOptions opts{threads, &rep->samples};
    const std::string k = kind;
    if (k == "coverage") rep->value.results = condint::run_coverage(cfg, opts);
    else if (k == "merging") rep->value.results = condint::run_merging(cfg, opts);
    else if (k == "equivalence") rep->value.results = condint::run_equivalence(cfg, opts);
    else if (k == "negligibility") rep->value.results = condint::run_negligibility(cfg, opts);
    else throw condint::Error(condint::ErrorCode::Configuration, "unknown experiment kind '" + k + "'");
    rep->value.kind = k;
    rep->value.config = condint::config_fields(cfg);
    rep->value.seed = cfg.seed;
    *out = rep.release();
  });
}

condint_status condint_report_simulation(const condint_model_spec* spec, const condint_series* series, uint64_t seed,
                                         condint_report** out) {
  if (!spec || !series || !out) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] {
    const auto v = series->value.values();
    condint::SimulationSummary s;
    s.length = v.size();
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    for (double x : v) s.variance += (x - s.mean) * (x - s.mean);
    s.variance /= static_cast<double>(v.size());
    s.x_last = v.back();
    auto kv = spec_fields(*spec);
    for (size_t i = 0; i < spec->dim; ++i) kv.emplace_back("theta" + std::to_string(i + 1), condint::format_double(spec->theta[i]));
    kv.emplace_back("length", std::to_string(v.size()));
    *out = new condint_report{{"simulate", kv, s, seed}, {}};
  });
}

condint_status condint_report_estimate(const condint_model_spec* spec, const condint_series* series,
                                       condint_report** out) {
  if (!spec || !series || !out) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] {
    std::vector<double> theta;
    const auto model = model_of(*spec, theta);
    auto kv = spec_fields(*spec);
    kv.emplace_back("length", std::to_string(series->value.size()));
    *out = new condint_report{{"estimate", kv, model->estimate(series->value), 0}, {}};
  });
}

condint_status condint_report_interval(const condint_model_spec* spec, condint_variant variant, const condint_series* x,
                                       const condint_series* y, double gamma1, double gamma2, condint_report** out) {
  if (!spec || !x || !out) return CONDINT_E_NULL_ARGUMENT;
  if (variant == CONDINT_2IP && !y) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] {
    const auto r = interval_of(spec, variant, x, y, gamma1, gamma2);
    auto kv = spec_fields(*spec);
    kv.emplace_back("variant", condint::to_string(r.variant));
    kv.emplace_back("gamma1", condint::format_double(gamma1));
    kv.emplace_back("gamma2", condint::format_double(gamma2));
    kv.emplace_back("length", std::to_string(x->value.size()));
    *out = new condint_report{{"interval", kv, r, 0}, {}};
  });
}

condint_status condint_report_metrics(const condint_cdf* a, const condint_cdf* b, condint_report** out) {
  if (!a || !b || !out) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] {
    condint::MetricsReport m;
    m.n_a = a->value.size();
    m.n_b = b->value.size();
    m.d_k = condint::d_kolmogorov(a->value, b->value);
    m.d_l = condint::d_levy(a->value, b->value);
    m.d_bl = condint::d_bounded_lipschitz(a->value, b->value);
    *out = new condint_report{{"metrics", {}, m, 0}, {}};
  });
}

condint_status condint_report_json(const condint_report* report, char** out) {
  if (!report || !out) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] { *out = dup(condint::report_to_json(report->value)); });
}

condint_status condint_report_csv(const condint_report* report, char** out) {
  if (!report || !out) return CONDINT_E_NULL_ARGUMENT;
  return guard([&] { *out = dup(condint::report_to_csv(report->value)); });
}

size_t condint_report_sample_count(const condint_report* report) { return report ? report->samples.size() : 0; }

condint_status condint_report_sample(const condint_report* report, size_t index, char** name, char** csv) {
  if (!report || !name || !csv) return CONDINT_E_NULL_ARGUMENT;
  if (index >= report->samples.size()) return CONDINT_E_CONTRACT;
  return guard([&] {
    *name = dup(report->samples[index].name);
    *csv = dup(condint::samples_to_csv(report->samples[index]));
  });
}

void condint_report_free(condint_report* report) { delete report; }

}  // extern "C"
