#include "condint/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "condint/error.hpp"

namespace condint {

namespace {

struct Entry {
  std::string value;
  std::size_t line;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::map<std::string, Entry> keys;
};

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "model", "T",          "gamma",          "gamma1",           "gamma2",     "seed",        "reps",
      "theta", "noise_sd",   "innovation",     "df",               "variants",   "l_t",         "start_policy",
      "constants_policy",    "t1_offsets",     "dump_samples"};
  return keys;
}

[[noreturn]] void config_error(std::size_t line, const std::string& what) {
  fail(ErrorCode::Configuration, "config line " + std::to_string(line) + ": " + what);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    out.push_back(trim(std::string_view(s).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_real(const std::string& key, const Entry& e) {
  double v = 0.0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  const auto r = std::from_chars(b, end, v);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(v))
    config_error(e.line, "key '" + key + "': expected a finite number, got '" + e.value + "'");
  return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& text, std::size_t line) {
  std::uint64_t v = 0;
  const char* b = text.data();
  const char* end = b + text.size();
  const auto r = std::from_chars(b, end, v);
  if (r.ec != std::errc() || r.ptr != end || text.empty())
    config_error(line, "key '" + key + "': expected a nonnegative integer, got '" + text + "'");
  return v;
}

double probability(const std::string& key, const Entry& e) {
  const double v = parse_real(key, e);
  if (!(v > 0.0 && v < 1.0)) config_error(e.line, "key '" + key + "' out of range: must lie in (0, 1)");
  return v;
}

FillPolicy::Kind parse_policy(const std::string& key, const Entry& e) {
  if (e.value == "zeros") return FillPolicy::Kind::Zeros;
  if (e.value == "moment") return FillPolicy::Kind::UnconditionalMoment;
  config_error(e.line, "key '" + key + "': expected zeros or moment");
}

std::string shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += f(v[i]);
  }
  return out;
}

ExperimentConfig build(const Section& s) {
  auto get = [&](const std::string& k) -> const Entry* {
    const auto it = s.keys.find(k);
    return it == s.keys.end() ? nullptr : &it->second;
  };
  for (const char* k : {"model", "T", "gamma", "seed"})
    if (!get(k)) config_error(s.line, "experiment '" + s.name + "' is missing required key '" + k + "'");

  ExperimentConfig c;
  c.name = s.name;
  try {
    c.model = parse_model_kind(get("model")->value);
  } catch (const Error&) {
    config_error(get("model")->line, "key 'model': expected ar1 or garch11");
  }
  {
    const Entry& e = *get("T");
    for (const auto& t : split_list(e.value)) c.T.push_back(parse_count("T", t, e.line));
  }
  const double gamma = probability("gamma", *get("gamma"));
  c.gammas = Gammas::equal_tailed(gamma);
  if (get("gamma1") || get("gamma2")) {
    if (!get("gamma1") || !get("gamma2"))
      config_error((get("gamma1") ? get("gamma1") : get("gamma2"))->line, "gamma1 and gamma2 must be given together");
    c.gammas = {probability("gamma1", *get("gamma1")), probability("gamma2", *get("gamma2"))};
    if (std::abs(c.gammas.gamma1 + c.gammas.gamma2 - gamma) > 1e-12)
      config_error(get("gamma1")->line, "gamma1 + gamma2 must equal gamma");
  }
  c.seed = parse_count("seed", get("seed")->value, get("seed")->line);
  if (const Entry* e = get("reps")) {
    c.reps = parse_count("reps", e->value, e->line);
    if (c.reps < kMinReps) config_error(e->line, "key 'reps' out of range: must be at least 100");
  }
  if (const Entry* e = get("theta"))
    for (const auto& t : split_list(e->value)) c.theta.push_back(parse_real("theta", {t, e->line}));
  if (const Entry* e = get("noise_sd")) {
    c.noise_sd = parse_real("noise_sd", *e);
    if (!(c.noise_sd > 0.0)) config_error(e->line, "key 'noise_sd' out of range: must be positive");
  }
  if (const Entry* e = get("innovation")) {
    if (e->value == "gaussian")
      c.innovation.kind = InnovationKind::Gaussian;
    else if (e->value == "student_t")
      c.innovation.kind = InnovationKind::StudentT;
    else
      config_error(e->line, "key 'innovation': expected gaussian or student_t");
  }
  if (const Entry* e = get("df")) {
    if (c.innovation.kind != InnovationKind::StudentT) config_error(e->line, "key 'df' needs innovation = student_t");
    c.innovation.df = parse_real("df", *e);
    if (!(c.innovation.df > 4.0)) config_error(e->line, "key 'df' out of range: must exceed 4");
  } else if (c.innovation.kind == InnovationKind::StudentT) {
    config_error(get("innovation")->line, "innovation = student_t needs key 'df'");
  }
  if (const Entry* e = get("variants")) {
    c.variants.clear();
    for (const auto& v : split_list(e->value)) {
      if (v == "2ip")
        c.variants.push_back(Variant::TwoIP);
      else if (v == "spl")
        c.variants.push_back(Variant::SPL);
      else
        config_error(e->line, "key 'variants': expected a list of 2ip, spl");
    }
  }
  if (const Entry* e = get("l_t")) {
    if (e->value == "log") {
      c.split = {};
    } else {
      c.split = {SplitRule::Kind::Custom, parse_real("l_t", *e)};
      if (!(c.split.value > 0.0)) config_error(e->line, "key 'l_t' out of range: must be positive");
    }
  }
  if (const Entry* e = get("start_policy")) c.start_policy = parse_policy("start_policy", *e);
  if (const Entry* e = get("constants_policy")) c.constants_policy = parse_policy("constants_policy", *e);
  if (const Entry* e = get("t1_offsets")) {
    c.t1_offsets.clear();
    for (const auto& t : split_list(e->value)) c.t1_offsets.push_back(parse_count("t1_offsets", t, e->line));
  }
  if (const Entry* e = get("dump_samples")) {
    if (e->value != "true" && e->value != "false") config_error(e->line, "key 'dump_samples': expected true or false");
    c.dump_samples = e->value == "true";
  }
  try {
    c.validate();
  } catch (const Error& err) {
    config_error(s.line, "experiment '" + s.name + "': " + err.what());
  }
  return c;
}

}  // namespace

std::vector<ExperimentConfig> parse_config_text(std::string_view text) {
  Section shared{"default", 1, {}};
  std::vector<Section> sections;
  std::set<std::string> names;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') config_error(lineno, "malformed section header");
      const std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
      if (name.empty() || name.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-") !=
                              std::string::npos)
        config_error(lineno, "section names use letters, digits, '_' and '-'");
      if (!names.insert(name).second) config_error(lineno, "duplicate section [" + name + "]");
      sections.push_back({name, lineno, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_error(lineno, "expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!known_keys().count(key)) config_error(lineno, "unknown key '" + key + "'");
    if (value.empty()) config_error(lineno, "key '" + key + "' has an empty value");
    Section& target = sections.empty() ? shared : sections.back();
    if (!target.keys.emplace(key, Entry{value, lineno}).second) config_error(lineno, "duplicate key '" + key + "'");
  }

  std::vector<ExperimentConfig> out;
  if (sections.empty()) {
    out.push_back(build(shared));
    return out;
  }
  for (Section& s : sections) {
    for (const auto& [k, e] : shared.keys) s.keys.emplace(k, e);
    out.push_back(build(s));
  }
  return out;
}

std::vector<ExperimentConfig> parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

KeyValues config_fields(const ExperimentConfig& c) {
  auto policy = [](FillPolicy::Kind k) { return k == FillPolicy::Kind::Zeros ? "zeros" : "moment"; };
  KeyValues kv;
  kv.emplace_back("model", to_string(c.model));
  kv.emplace_back("T", join(c.T, [](std::size_t t) { return std::to_string(t); }));
  kv.emplace_back("gamma", shortest(c.gammas.gamma1 + c.gammas.gamma2));
  kv.emplace_back("gamma1", shortest(c.gammas.gamma1));
  kv.emplace_back("gamma2", shortest(c.gammas.gamma2));
  kv.emplace_back("seed", std::to_string(c.seed));
  kv.emplace_back("reps", std::to_string(c.reps));
  if (!c.theta.empty()) kv.emplace_back("theta", join(c.theta, shortest));
  kv.emplace_back("noise_sd", shortest(c.noise_sd));
  if (c.innovation.kind == InnovationKind::StudentT) {
    kv.emplace_back("innovation", "student_t");
    kv.emplace_back("df", shortest(c.innovation.df));
  } else {
    kv.emplace_back("innovation", "gaussian");
  }
  kv.emplace_back("variants", join(c.variants, [](Variant v) { return std::string(to_string(v)); }));
  kv.emplace_back("l_t", c.split.kind == SplitRule::Kind::Log ? "log" : shortest(c.split.value));
  kv.emplace_back("start_policy", policy(c.start_policy));
  kv.emplace_back("constants_policy", policy(c.constants_policy));
  kv.emplace_back("t1_offsets", join(c.t1_offsets, [](std::size_t t) { return std::to_string(t); }));
  kv.emplace_back("dump_samples", c.dump_samples ? "true" : "false");
  return kv;
}

std::string echo_config(const std::vector<ExperimentConfig>& experiments) {
  std::string out;
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    if (i) out += '\n';
    out += "[" + experiments[i].name + "]\n";
    for (const auto& [k, v] : config_fields(experiments[i])) out += k + " = " + v + "\n";
  }
  return out;
}

std::string config_reference() {
  return R"(Config file: `key = value` lines, `#` comments. Keys before the first
[section] are shared; each [section] is one experiment.

Required:
  model             ar1 | garch11
  T                 sample length, or a comma list (strictly increasing)
  gamma             total tail mass in (0, 1); tails are gamma/2 each
  seed              master seed (unsigned 64-bit); --seed overrides

Optional (default):
  gamma1, gamma2    unequal tails; must sum to gamma
  reps              Monte Carlo replications, >= 100 (1000)
  theta             true parameters: beta for ar1 (0.5);
                    omega,alpha,beta for garch11 (0.1,0.1,0.8)
  noise_sd          ar1 innovation sd (1)
  innovation        gaussian | student_t (gaussian); garch11 only
  df                student-t degrees of freedom, > 4
  variants          coverage variants, list of 2ip, spl (2ip,spl)
  l_t               split memory scale: log or a positive number (log);
                    the split gap is floor(l_t * ln T)
  start_policy      zeros | moment, values before the sample (moment)
  constants_policy  zeros | moment, values before t1 (moment)
  t1_offsets        negligibility offsets T - t1 (5,10,20,40,80)
  dump_samples      true | false, write per-rep CSV tables (false)
)";
}

}  // namespace condint
