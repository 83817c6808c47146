#pragma once

#include <cstdint>
#include <random>

namespace mrp {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// A per-caller random stream. Streams are keyed by (seed, index, purpose) so
/// that results never depend on how work is split across threads.
class RandomStream {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit RandomStream(std::uint64_t seed, std::uint64_t index = 0, std::uint64_t purpose = 0)
      : engine_(derive(seed, index, purpose)) {}

  /// Uniform draw on the open interval (0, 1), 53 bits of resolution.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // UniformRandomBitGenerator interface, for library distributions.
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  static constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t index,
                                        std::uint64_t purpose) noexcept {
    return detail::splitmix64(detail::splitmix64(detail::splitmix64(seed) ^ index) ^
                              (purpose * 0xd1b54a32d192ed03ULL));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mrp
