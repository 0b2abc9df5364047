#include "condint/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"

#include "condint/error.hpp"

namespace condint {

using Json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void write(const Json& j, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(k).dump() + ": ";
        write(v, out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write(j[i], out, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

double real(const Json& j) { return j.is_null() ? kNaN : j.get<double>(); }
std::size_t count(const Json& j) { return j.get<std::size_t>(); }

Json to_json(const SimulationSummary& s) {
  return {{"length", s.length}, {"mean", s.mean}, {"variance", s.variance}, {"x_last", s.x_last}};
}

Json to_json(const EstimationResult& e) {
  Json cov = Json::array();
  for (std::size_t i = 0; i < e.cov.rows; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < e.cov.cols; ++j) row.push_back(e.cov(i, j));
    cov.push_back(row);
  }
  return {{"theta", e.theta},
          {"cov", cov},
          {"rate", e.rate},
          {"n_used", e.n_used},
          {"diagnostics",
           {{"iterations", e.diagnostics.iterations},
            {"objective", e.diagnostics.objective},
            {"converged_starts", e.diagnostics.converged_starts},
            {"beta_unidentified", e.diagnostics.beta_unidentified}}}};
}

Json to_json(const IntervalResult& r) {
  return {{"variant", to_string(r.variant)}, {"lower", r.lower},       {"upper", r.upper},
          {"center", r.center},              {"gamma1", r.gamma1},     {"gamma2", r.gamma2},
          {"variance", r.variance},          {"quantile_low", r.quantile_low},
          {"quantile_high", r.quantile_high}, {"rate", r.rate}};
}

Json to_json(const CoverageReport& r) {
  return {{"variant", to_string(r.variant)},
          {"T", r.T},
          {"R", r.R},
          {"hit_count", r.hit_count},
          {"miss_count", r.miss_count},
          {"failure_count", r.failure_count},
          {"coverage", r.coverage},
          {"binomial_se", r.binomial_se},
          {"target", r.target},
          {"psi_target", r.psi_target},
          {"x_last", r.x_last},
          {"path_hash", r.path_hash},
          {"mean_width", r.mean_width},
          {"t_e", r.t_e},
          {"t_p", r.t_p},
          {"l_t", r.l_t}};
}

Json to_json(const std::vector<CoverageReport>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(to_json(r));
  return a;
}

Json to_json(const MergingReport& m) {
  Json rows = Json::array();
  for (const auto& r : m.rows)
    rows.push_back({{"T", r.T},
                    {"n_2ip", r.n_2ip},
                    {"n_spl", r.n_spl},
                    {"failures", r.failures},
                    {"d_bl", r.d_bl},
                    {"d_k_2ip", r.d_k_2ip},
                    {"d_k_spl", r.d_k_spl},
                    {"x_last", r.x_last},
                    {"t_e", r.t_e},
                    {"t_p", r.t_p}});
  return {{"R", m.R}, {"rows", rows}};
}

Json to_json(const EquivalenceReport& e) {
  Json rows = Json::array();
  for (const auto& r : e.rows) {
    Json gaps = Json::array();
    for (const auto& g : r.quantile_gaps) gaps.push_back({{"u", g.u}, {"median", g.median}, {"p90", g.p90}});
    rows.push_back({{"T", r.T},
                    {"n", r.n},
                    {"failures", r.failures},
                    {"median_center_gap", r.median_center_gap},
                    {"p90_center_gap", r.p90_center_gap},
                    {"quantile_gaps", gaps}});
  }
  return {{"R", e.R}, {"rows", rows}};
}

Json to_json(const NegligibilityRow& r) {
  return {{"offset", r.offset}, {"t1", r.t1},   {"q10", r.q10},
          {"median", r.median}, {"q90", r.q90}, {"max", r.max}};
}

Json to_json(const NegligibilityReport& n) {
  Json rows = Json::array();
  for (const auto& r : n.rows) rows.push_back(to_json(r));
  return {{"T", n.T},         {"R", n.R},       {"slope", n.slope}, {"log_beta", n.log_beta},
          {"rows", rows},     {"split_row", to_json(n.split_row)}};
}

Json to_json(const MetricsReport& m) {
  return {{"n_a", m.n_a}, {"n_b", m.n_b}, {"d_k", m.d_k}, {"d_l", m.d_l}, {"d_bl", m.d_bl}};
}

SimulationSummary simulation_from(const Json& j) {
  return {count(j.at("length")), real(j.at("mean")), real(j.at("variance")), real(j.at("x_last"))};
}

EstimationResult estimate_from(const Json& j) {
  EstimationResult e;
  for (const auto& v : j.at("theta")) e.theta.push_back(real(v));
  const auto& cov = j.at("cov");
  e.cov = Matrix(cov.size(), cov.empty() ? 0 : cov[0].size());
  for (std::size_t i = 0; i < e.cov.rows; ++i)
    for (std::size_t k = 0; k < e.cov.cols; ++k) e.cov(i, k) = real(cov[i][k]);
  e.rate = real(j.at("rate"));
  e.n_used = count(j.at("n_used"));
  const auto& d = j.at("diagnostics");
  e.diagnostics = {count(d.at("iterations")), real(d.at("objective")), count(d.at("converged_starts")),
                   d.at("beta_unidentified").get<bool>()};
  return e;
}

IntervalResult interval_from(const Json& j) {
  IntervalResult r;
  r.variant = parse_variant(j.at("variant").get<std::string>());
  r.lower = real(j.at("lower"));
  r.upper = real(j.at("upper"));
  r.center = real(j.at("center"));
  r.gamma1 = real(j.at("gamma1"));
  r.gamma2 = real(j.at("gamma2"));
  r.variance = real(j.at("variance"));
  r.quantile_low = real(j.at("quantile_low"));
  r.quantile_high = real(j.at("quantile_high"));
  r.rate = real(j.at("rate"));
  return r;
}

std::vector<CoverageReport> coverage_from(const Json& j) {
  std::vector<CoverageReport> out;
  for (const auto& x : j) {
    CoverageReport r;
    r.variant = parse_variant(x.at("variant").get<std::string>());
    r.T = count(x.at("T"));
    r.R = count(x.at("R"));
    r.hit_count = count(x.at("hit_count"));
    r.miss_count = count(x.at("miss_count"));
    r.failure_count = count(x.at("failure_count"));
    r.coverage = real(x.at("coverage"));
    r.binomial_se = real(x.at("binomial_se"));
    r.target = real(x.at("target"));
    r.psi_target = real(x.at("psi_target"));
    r.x_last = real(x.at("x_last"));
    r.path_hash = x.at("path_hash").get<std::string>();
    r.mean_width = real(x.at("mean_width"));
    r.t_e = count(x.at("t_e"));
    r.t_p = count(x.at("t_p"));
    r.l_t = real(x.at("l_t"));
    out.push_back(std::move(r));
  }
  return out;
}

MergingReport merging_from(const Json& j) {
  MergingReport m;
  m.R = count(j.at("R"));
  for (const auto& x : j.at("rows"))
    m.rows.push_back({count(x.at("T")), count(x.at("n_2ip")), count(x.at("n_spl")), count(x.at("failures")),
                      real(x.at("d_bl")), real(x.at("d_k_2ip")), real(x.at("d_k_spl")), real(x.at("x_last")),
                      count(x.at("t_e")), count(x.at("t_p"))});
  return m;
}

EquivalenceReport equivalence_from(const Json& j) {
  EquivalenceReport e;
  e.R = count(j.at("R"));
  for (const auto& x : j.at("rows")) {
    EquivalenceRow r;
    r.T = count(x.at("T"));
    r.n = count(x.at("n"));
    r.failures = count(x.at("failures"));
    r.median_center_gap = real(x.at("median_center_gap"));
    r.p90_center_gap = real(x.at("p90_center_gap"));
    for (const auto& g : x.at("quantile_gaps")) r.quantile_gaps.push_back({real(g.at("u")), real(g.at("median")), real(g.at("p90"))});
    e.rows.push_back(std::move(r));
  }
  return e;
}

NegligibilityRow negligibility_row_from(const Json& x) {
  return {count(x.at("offset")), count(x.at("t1")), real(x.at("q10")),
          real(x.at("median")),  real(x.at("q90")), real(x.at("max"))};
}

NegligibilityReport negligibility_from(const Json& j) {
  NegligibilityReport n;
  n.T = count(j.at("T"));
  n.R = count(j.at("R"));
  n.slope = real(j.at("slope"));
  n.log_beta = real(j.at("log_beta"));
  for (const auto& x : j.at("rows")) n.rows.push_back(negligibility_row_from(x));
  n.split_row = negligibility_row_from(j.at("split_row"));
  return n;
}

MetricsReport metrics_from(const Json& j) {
  return {count(j.at("n_a")), count(j.at("n_b")), real(j.at("d_k")), real(j.at("d_l")), real(j.at("d_bl"))};
}

std::string fmt(double v) { return format_double(v); }

void row(std::string& out, const std::string& key, const std::string& metric, double value) {
  out += key + "," + metric + "," + fmt(value) + "\n";
}

}  // namespace

const char* report_kind(const ReportResults& results) noexcept {
  static constexpr const char* kinds[] = {"simulate", "estimate", "interval", "coverage",
                                          "merging",  "equivalence", "negligibility", "metrics"};
  return kinds[results.index()];
}

std::string report_to_json(const Report& report) {
  Json config = Json::object();
  for (const auto& [k, v] : report.config) config[k] = v;
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = report.kind;
  j["config"] = config;
  j["results"] = std::visit([](const auto& r) { return to_json(r); }, report.results);
  j["seed"] = report.seed;
  std::string out;
  write(j, out, 0);
  out += '\n';
  return out;
}

Report report_from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::Io, std::string("report JSON does not parse: ") + e.what());
  }
  try {
    require(j.at("schema_version").get<int>() == kSchemaVersion, ErrorCode::Io, "unsupported report schema version");
    Report r;
    r.kind = j.at("kind").get<std::string>();
    for (const auto& [k, v] : j.at("config").items()) r.config.emplace_back(k, v.get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    const Json& res = j.at("results");
    if (r.kind == "simulate") r.results = simulation_from(res);
    else if (r.kind == "estimate") r.results = estimate_from(res);
    else if (r.kind == "interval") r.results = interval_from(res);
    else if (r.kind == "coverage") r.results = coverage_from(res);
    else if (r.kind == "merging") r.results = merging_from(res);
    else if (r.kind == "equivalence") r.results = equivalence_from(res);
    else if (r.kind == "negligibility") r.results = negligibility_from(res);
    else if (r.kind == "metrics") r.results = metrics_from(res);
    else fail(ErrorCode::Io, "unknown report kind '" + r.kind + "'");
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Io, std::string("malformed report: ") + e.what());
  }
}

std::string report_to_csv(const Report& report) {
  std::string out;
  if (const auto* cov = std::get_if<std::vector<CoverageReport>>(&report.results)) {
    out = "T,metric,value\n";
    for (const auto& r : *cov) {
      const std::string t = std::to_string(r.T), v = std::string("_") + to_string(r.variant);
      row(out, t, "coverage" + v, r.coverage);
      row(out, t, "binomial_se" + v, r.binomial_se);
      row(out, t, "target" + v, r.target);
      row(out, t, "hit_count" + v, static_cast<double>(r.hit_count));
      row(out, t, "failure_count" + v, static_cast<double>(r.failure_count));
      row(out, t, "mean_width" + v, r.mean_width);
    }
  } else if (const auto* m = std::get_if<MergingReport>(&report.results)) {
    out = "T,metric,value\n";
    for (const auto& r : m->rows) {
      const std::string t = std::to_string(r.T);
      row(out, t, "d_bl", r.d_bl);
      row(out, t, "d_k_2ip", r.d_k_2ip);
      row(out, t, "d_k_spl", r.d_k_spl);
    }
  } else if (const auto* e = std::get_if<EquivalenceReport>(&report.results)) {
    out = "T,metric,value\n";
    for (const auto& r : e->rows) {
      const std::string t = std::to_string(r.T);
      row(out, t, "median_center_gap", r.median_center_gap);
      row(out, t, "p90_center_gap", r.p90_center_gap);
      for (const auto& g : r.quantile_gaps) {
        char u[32];
        std::snprintf(u, sizeof u, "%g", g.u);
        row(out, t, std::string("median_quantile_gap_u") + u, g.median);
        row(out, t, std::string("p90_quantile_gap_u") + u, g.p90);
      }
    }
  } else if (const auto* n = std::get_if<NegligibilityReport>(&report.results)) {
    out = "offset,metric,value\n";
    auto emit = [&](const NegligibilityRow& r, const std::string& suffix) {
      const std::string o = std::to_string(r.offset);
      row(out, o, "q10" + suffix, r.q10);
      row(out, o, "median" + suffix, r.median);
      row(out, o, "q90" + suffix, r.q90);
      row(out, o, "max" + suffix, r.max);
    };
    for (const auto& r : n->rows) emit(r, "");
    emit(n->split_row, "_split");
  } else {
    out = "metric,value\n";
    Json j = std::visit([](const auto& r) { return to_json(r); }, report.results);
    for (const auto& [k, v] : j.items())
      if (v.is_number()) out += k + "," + (v.is_number_float() ? fmt(v.get<double>()) : v.dump()) + "\n";
  }
  return out;
}

std::string samples_to_csv(const SampleTable& table) {
  std::string out = "rep,value\n";
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    out += std::to_string(i) + ",";
    out += std::isnan(table.values[i]) ? "nan" : fmt(table.values[i]);
    out += "\n";
  }
  return out;
}

}  // namespace condint
