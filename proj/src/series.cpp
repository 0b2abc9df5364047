#include "condint/series.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "condint/error.hpp"

namespace condint {

TimeSeries::TimeSeries(std::vector<double> values, long origin) : values_(std::move(values)), origin_(origin) {
  require(!values_.empty(), ErrorCode::InvalidParameter, "time series must be nonempty");
  for (double v : values_) require(std::isfinite(v), ErrorCode::InvalidParameter, "time series values must be finite");
}

TimeSeries TimeSeries::unchecked(std::vector<double> values, long origin) {
  TimeSeries s;
  s.values_ = std::move(values);
  s.origin_ = origin;
  return s;
}

double TimeSeries::at(std::size_t t) const {
  require(t >= 1 && t <= values_.size(), ErrorCode::Contract, "time index out of range");
  return values_[t - 1];
}

TimeSeries TimeSeries::slice(std::size_t from, std::size_t to) const {
  require(from >= 1 && from <= to && to <= values_.size(), ErrorCode::Contract, "slice out of range");
  return unchecked(std::vector<double>(values_.begin() + static_cast<long>(from - 1),
                                       values_.begin() + static_cast<long>(to)),
                   origin_ + static_cast<long>(from - 1));
}

TimeSeries TimeSeries::scaled(double k) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= k;
  return TimeSeries(std::move(v), origin_);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string series_to_csv(const TimeSeries& series) {
  std::string out = "t,x\n";
  const auto values = series.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += std::to_string(series.origin() + static_cast<long>(i));
    out += ',';
    out += format_double(values[i]);
    out += '\n';
  }
  return out;
}

TimeSeries series_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> values;
  long origin = 1;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      require(line == "t,x", ErrorCode::Io, "series CSV: expected header `t,x`");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    require(comma != std::string::npos, ErrorCode::Io, "series CSV line " + std::to_string(lineno) + ": missing comma");
    long t = 0;
    double x = 0.0;
    const char* b = line.data();
    auto r1 = std::from_chars(b, b + comma, t);
    auto r2 = std::from_chars(b + comma + 1, b + line.size(), x);
    require(r1.ec == std::errc() && r1.ptr == b + comma && r2.ec == std::errc() && r2.ptr == b + line.size(),
            ErrorCode::Io, "series CSV line " + std::to_string(lineno) + ": malformed row");
    if (values.empty()) origin = t;
    require(t == origin + static_cast<long>(values.size()), ErrorCode::Io,
            "series CSV line " + std::to_string(lineno) + ": time index not consecutive");
    values.push_back(x);
  }
  require(header && !values.empty(), ErrorCode::Io, "series CSV: no observations");
  return TimeSeries(std::move(values), origin);
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return series_from_csv(buf.str());
}

void write_series_csv(const TimeSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::Io, "cannot write " + path.string());
  out << series_to_csv(series);
  require(static_cast<bool>(out), ErrorCode::Io, "write failed: " + path.string());
}

}  // namespace condint
