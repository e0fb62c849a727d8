#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace rlab {

// Deterministic random stream. All draws are explicit transforms of raw
// mt19937_64 output, so a seed fully determines every sequence produced by
// the program, independent of standard-library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  // Uniform integer in [0, n), n >= 1. Rejection keeps the draw exact.
  int uniform_int(int n) {
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = (std::numeric_limits<std::uint64_t>::max() / un) * un;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return static_cast<int>(r % un);
  }

 private:
  std::mt19937_64 engine_;
};

// Splitmix64-style derivation of independent substream seeds (environment,
// network init, agent, ...) from one run seed. Keeping the streams separate
// means e.g. environment resets at run index i are identical across
// configurations whose networks consume different numbers of draws.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace seed_stream {
inline constexpr std::uint64_t kEnv = 0;
inline constexpr std::uint64_t kNet = 1;
inline constexpr std::uint64_t kAgent = 2;
inline constexpr std::uint64_t kDataset = 9999;
}  // namespace seed_stream

}  // namespace rlab
