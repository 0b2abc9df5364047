#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace condint {

/// SplitMix64 output mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Key for an independent substream. Depends only on its three arguments.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index) noexcept;

/// Counter-based generator: draw n is mix64(key + (n + 1) * golden gamma).
/// Satisfies UniformRandomBitGenerator so it can feed <random> distributions.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key) noexcept : key_(key) {}
  Stream(std::uint64_t master, std::string_view tag, std::uint64_t index) noexcept
      : key_(derive_seed(master, tag, index)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  /// Uniform index in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;
  double normal() noexcept;
  /// Student-t rescaled to unit variance; df > 2.
  double student_t_unit(double df);

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace condint
