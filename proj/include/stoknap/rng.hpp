#ifndef STOKNAP_RNG_HPP
#define STOKNAP_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace stoknap {

/// Mixes (master seed, tag, a, b) into a child seed. All randomness in one
/// run flows from a single master seed; subsystems and per-candidate Monte
/// Carlo gates derive their own streams so results do not depend on
/// evaluation order or thread count.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                          std::uint64_t a = 0, std::uint64_t b = 0);

/// A seeded random stream. Not thread-safe; each task derives its own.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::mt19937_64& engine() { return engine_; }

  std::uint64_t seed() const { return seed_; }

  /// Child stream addressed by (tag, a, b) relative to this stream's seed.
  RngStream derive(std::string_view tag, std::uint64_t a = 0, std::uint64_t b = 0) const {
    return RngStream(derive_seed(seed_, tag, a, b));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace stoknap

#endif
