#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "condint.h"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kFailureCap = 3, kIo = 4 };

struct CliError {
  int exit_code;
  std::string message;
};

int exit_for(condint_status s) {
  switch (s) {
    case CONDINT_OK: return kOk;
    case CONDINT_E_CONFIGURATION:
    case CONDINT_E_INVALID_PARAMETER: return kConfig;
    case CONDINT_E_FAILURE_CAP: return kFailureCap;
    case CONDINT_E_IO: return kIo;
    default: return kFailure;
  }
}

void check(condint_status s) {
  if (s != CONDINT_OK) throw CliError{exit_for(s), std::string(condint_status_string(s)) + ": " + condint_last_error()};
}

std::string take(char* s) {
  std::string out(s);
  condint_string_free(s);
  return out;
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};

using Series = Handle<condint_series, condint_series_free>;
using Cdf = Handle<condint_cdf, condint_cdf_free>;
using Config = Handle<condint_config, condint_config_free>;
using Report = Handle<condint_report, condint_report_free>;

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Files are staged under temporary names and renamed only after every write
// succeeded, so a failing run leaves no partial report set behind.
void write_all(const fs::path& dir, const std::vector<std::pair<std::string, std::string>>& files) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliError{kIo, "cannot create output directory " + dir.string() + ": " + ec.message()};
  std::vector<fs::path> staged;
  auto cleanup = [&] {
    for (const auto& p : staged) fs::remove(p, ec);
  };
  for (const auto& [name, text] : files) {
    const fs::path tmp = dir / (name + ".tmp");
    std::ofstream out(tmp, std::ios::binary);
    if (out) out << text;
    if (!out) {
      cleanup();
      throw CliError{kIo, "cannot write " + tmp.string()};
    }
    staged.push_back(tmp);
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    fs::rename(staged[i], dir / files[i].first, ec);
    if (ec) {
      cleanup();
      throw CliError{kIo, "cannot write " + (dir / files[i].first).string() + ": " + ec.message()};
    }
  }
}

void write_error_manifest(const fs::path& dir, const std::string& command, int code, const std::string& message) {
  nlohmann::ordered_json m;
  m["tool"] = "condint";
  m["version"] = condint_version();
  m["command"] = command;
  m["status"] = "error";
  m["exit_code"] = code;
  m["error"] = message;
  m["finished"] = utc_now();
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (out) out << m.dump(2) << "\n";
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CliError{kConfig, "not a number: '" + item + "'"};
    }
  }
  return out;
}

condint_model_spec model_spec(const std::string& model, const std::string& theta, double noise_sd, double df) {
  condint_model_spec spec{};
  if (model == "ar1")
    spec.model = CONDINT_AR1;
  else if (model == "garch11")
    spec.model = CONDINT_GARCH11;
  else
    throw CliError{kConfig, "unknown model '" + model + "' (expected ar1 or garch11)"};
  std::vector<double> t = theta.empty() ? (spec.model == CONDINT_AR1 ? std::vector<double>{0.5}
                                                                      : std::vector<double>{0.1, 0.1, 0.8})
                                        : parse_list(theta);
  const std::size_t dim = spec.model == CONDINT_AR1 ? 1 : 3;
  if (t.size() != dim) throw CliError{kConfig, "theta needs " + std::to_string(dim) + " values for " + model};
  for (std::size_t i = 0; i < dim; ++i) spec.theta[i] = t[i];
  spec.dim = dim;
  spec.noise_sd = noise_sd;
  spec.student_df = df;
  return spec;
}

// Accepts `t,x`, `rep,value` or single-column CSV; the last column is read.
std::vector<double> read_column(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kIo, "cannot open " + path};
  std::vector<double> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string cell = line.substr(line.find_last_of(',') == std::string::npos ? 0 : line.find_last_of(',') + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument(cell);
      out.push_back(v);
    } catch (const std::exception&) {
      if (!first) throw CliError{kIo, path + ": malformed value '" + cell + "'"};
    }
    first = false;
  }
  if (out.empty()) throw CliError{kIo, path + ": no values"};
  return out;
}

struct Output {
  std::vector<std::pair<std::string, std::string>> files;
  std::vector<std::string> reports;
  std::string config_echo;
  std::optional<std::uint64_t> seed;

  void add_report(const std::string& stem, const condint_report* rep, bool csv) {
    char* s = nullptr;
    check(condint_report_json(rep, &s));
    files.emplace_back(stem + ".json", take(s));
    reports.push_back(stem + ".json");
    if (csv) {
      check(condint_report_csv(rep, &s));
      files.emplace_back(stem + ".csv", take(s));
      reports.push_back(stem + ".csv");
    }
    for (std::size_t i = 0; i < condint_report_sample_count(rep); ++i) {
      char* name = nullptr;
      char* body = nullptr;
      check(condint_report_sample(rep, i, &name, &body));
      const std::string file = "samples_" + take(name) + ".csv";
      files.emplace_back(file, take(body));
      reports.push_back(file);
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional confidence intervals for time-series prediction functions"};
  app.require_subcommand(1);
  char* ref = nullptr;
  std::string reference = condint_config_reference(&ref) == CONDINT_OK ? take(ref) : std::string();
  app.footer("Exit codes: 0 ok, 1 other failure, 2 configuration error, 3 estimation-failure cap, 4 I/O error.\n"
             "CONDINT_THREADS sets the worker count (default: all cores).\n\n" +
             reference);

  std::string out_dir;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string model = "ar1", theta, series_path, y_path, variant = "sta", a_path, b_path;
  double noise_sd = 1.0, df = 0.0, gamma = 0.1;
  std::optional<double> gamma1, gamma2;
  std::size_t length = 1000;

  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", out_dir, "Output directory")->required(); };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", model, "ar1 or garch11")->capture_default_str();
    sub->add_option("--theta", theta, "Comma-separated parameters (model default if omitted)");
    sub->add_option("--noise-sd", noise_sd, "AR(1) innovation sd")->capture_default_str();
    sub->add_option("--df", df, "Student-t innovations with this many degrees of freedom (GARCH)");
  };

  auto* simulate = app.add_subcommand("simulate", "Simulate a stationary path; writes series.csv");
  add_out(simulate);
  add_model(simulate);
  simulate->add_option("--length", length, "Path length")->capture_default_str();
  simulate->add_option("--seed", seed, "Seed")->required();

  auto* estimate = app.add_subcommand("estimate", "Estimate theta and its covariance from a `t,x` CSV");
  add_out(estimate);
  add_model(estimate);
  estimate->add_option("--series", series_path, "Series CSV")->required();

  auto* interval = app.add_subcommand("interval", "Conditional confidence interval for the next-step prediction");
  add_out(interval);
  add_model(interval);
  interval->add_option("--series", series_path, "Conditioning series CSV")->required();
  interval->add_option("--y", y_path, "Independent estimation series (2ip)");
  interval->add_option("--variant", variant, "sta, spl or 2ip")->capture_default_str();
  interval->add_option("--gamma", gamma, "Total tail mass, split equally")->capture_default_str();
  interval->add_option("--gamma1", gamma1, "Lower tail mass");
  interval->add_option("--gamma2", gamma2, "Upper tail mass");

  auto* metrics = app.add_subcommand("metrics", "Kolmogorov, Levy and bounded-Lipschitz distances of two samples");
  add_out(metrics);
  metrics->add_option("--a", a_path, "First sample CSV (last column)")->required();
  metrics->add_option("--b", b_path, "Second sample CSV (last column)")->required();

  std::vector<CLI::App*> experiments;
  for (const char* name : {"coverage", "merging", "equivalence", "negligibility"}) {
    auto* sub = app.add_subcommand(name, std::string("Run the ") + name + " experiment of every config section");
    add_out(sub);
    sub->add_option("--config", config_path, "Experiment config file")->required();
    sub->add_option("--seed", seed, "Override the master seed");
    experiments.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (e.get_exit_code() != 0) {
      std::cerr << app.help();
      return kConfig;
    }
    return kOk;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const std::string started = utc_now();
  Output out;

  try {
    if (sub == simulate) {
      const auto spec = model_spec(model, theta, noise_sd, df);
      Series s;
      check(condint_simulate(&spec, length, *seed, s.out()));
      char* csv = nullptr;
      check(condint_series_to_csv(s.get(), &csv));
      out.files.emplace_back("series.csv", take(csv));
      out.reports.push_back("series.csv");
      Report r;
      check(condint_report_simulation(&spec, s.get(), *seed, r.out()));
      out.add_report("simulate", r.get(), false);
      out.seed = *seed;
    } else if (sub == estimate) {
      const auto spec = model_spec(model, theta, noise_sd, df);
      Series s;
      check(condint_series_read_csv(series_path.c_str(), s.out()));
      Report r;
      check(condint_report_estimate(&spec, s.get(), r.out()));
      out.add_report("estimate", r.get(), false);
    } else if (sub == interval) {
      const auto spec = model_spec(model, theta, noise_sd, df);
      condint_variant v;
      if (variant == "sta") v = CONDINT_STA;
      else if (variant == "spl") v = CONDINT_SPL;
      else if (variant == "2ip") v = CONDINT_2IP;
      else throw CliError{kConfig, "unknown variant '" + variant + "'"};
      if (v == CONDINT_2IP && y_path.empty()) throw CliError{kConfig, "variant 2ip needs --y"};
      if (gamma1.has_value() != gamma2.has_value()) throw CliError{kConfig, "--gamma1 and --gamma2 go together"};
      const double g1 = gamma1 ? *gamma1 : gamma / 2.0;
      const double g2 = gamma2 ? *gamma2 : gamma / 2.0;
      Series x, y;
      check(condint_series_read_csv(series_path.c_str(), x.out()));
      if (!y_path.empty()) check(condint_series_read_csv(y_path.c_str(), y.out()));
      Report r;
      check(condint_report_interval(&spec, v, x.get(), y.get(), g1, g2, r.out()));
      out.add_report("interval", r.get(), false);
    } else if (sub == metrics) {
      const auto a = read_column(a_path), b = read_column(b_path);
      Cdf fa, fb;
      check(condint_cdf_from_samples(a.data(), a.size(), fa.out()));
      check(condint_cdf_from_samples(b.data(), b.size(), fb.out()));
      Report r;
      check(condint_report_metrics(fa.get(), fb.get(), r.out()));
      out.add_report("metrics", r.get(), false);
    } else {
      Config cfg;
      check(condint_config_parse_file(config_path.c_str(), cfg.out()));
      if (seed) check(condint_config_set_seed(cfg.get(), *seed));
      char* echo = nullptr;
      check(condint_config_echo(cfg.get(), &echo));
      out.config_echo = take(echo);
      const std::size_t n = condint_config_count(cfg.get());
      std::uint64_t first_seed = 0;
      check(condint_config_seed(cfg.get(), 0, &first_seed));
      out.seed = first_seed;
      for (std::size_t i = 0; i < n; ++i) {
        char* name = nullptr;
        check(condint_config_name(cfg.get(), i, &name));
        const std::string section = take(name);
        const std::string stem = n == 1 ? command : command + "-" + section;
        Report r;
        check(condint_run(cfg.get(), i, command.c_str(), 0, r.out()));
        out.add_report(stem, r.get(), true);
      }
    }

    nlohmann::ordered_json m;
    m["tool"] = "condint";
    m["version"] = condint_version();
    m["command"] = command;
    m["status"] = "ok";
    m["config"] = out.config_echo;
    if (out.seed) m["master_seed"] = *out.seed;
    m["started"] = started;
    m["finished"] = utc_now();
    m["reports"] = out.reports;
    out.files.emplace_back("manifest.json", m.dump(2) + "\n");
    write_all(out_dir, out.files);
    return kOk;
  } catch (const CliError& e) {
    std::cerr << "condint " << command << ": " << e.message << "\n";
    if (e.exit_code != kIo || fs::is_directory(out_dir)) write_error_manifest(out_dir, command, e.exit_code, e.message);
    return e.exit_code;
  }
}
