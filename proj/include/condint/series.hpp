#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace condint {

/// Observed or simulated path x_origin, ..., x_{origin+n-1}. Time indices
/// used by at() are 1-based relative to the first element.
class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> values, long origin = 1);

  /// Skips the finiteness check. Used by tests that plant sentinel values in
  /// positions an algorithm must never read.
  static TimeSeries unchecked(std::vector<double> values, long origin = 1);

  std::size_t size() const noexcept { return values_.size(); }
  long origin() const noexcept { return origin_; }
  std::span<const double> values() const noexcept { return values_; }

  /// x_t for 1 <= t <= size().
  double at(std::size_t t) const;
  double last() const noexcept { return values_.back(); }

  /// Sub-path x_from..x_to (inclusive, 1-based); origin is preserved.
  TimeSeries slice(std::size_t from, std::size_t to) const;
  TimeSeries scaled(double k) const;

  bool operator==(const TimeSeries&) const = default;

 private:
  TimeSeries() = default;
  std::vector<double> values_;
  long origin_ = 1;
};

/// CSV with header `t,x`, one row per observation.
TimeSeries read_series_csv(const std::filesystem::path& path);
void write_series_csv(const TimeSeries& series, const std::filesystem::path& path);
std::string series_to_csv(const TimeSeries& series);
TimeSeries series_from_csv(const std::string& text);

/// Decimal text with 17 significant digits; reads back to the same double.
std::string format_double(double v);

}  // namespace condint
