#include "condint/rng.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "condint/error.hpp"

namespace condint {

namespace {

std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index) noexcept {
  const std::uint64_t a = mix64(master ^ fnv1a(tag));
  return mix64(a + mix64(index + 0x632be59bd9b4e019ULL));
}

double Stream::uniform() noexcept {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Stream::below(std::uint64_t n) noexcept {
  // Lemire's multiply-shift with rejection.
  std::uint64_t x = (*this)();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = -n % n;
    while (low < threshold) {
      x = (*this)();
      m = static_cast<unsigned __int128>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Stream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double phi = 2.0 * std::numbers::pi * uniform();
  spare_normal_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

double Stream::student_t_unit(double df) {
  require(std::isfinite(df) && df > 2.0, ErrorCode::InvalidParameter, "student-t needs df > 2");
  const double z = normal();
  std::gamma_distribution<double> gamma(df / 2.0, 2.0);
  const double chi2 = gamma(*this);
  return z / std::sqrt(chi2 / df) * std::sqrt((df - 2.0) / df);
}

}  // namespace condint
