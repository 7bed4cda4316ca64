#pragma once

#include <cstdint>
#include <random>

namespace mapalign::detail {

// Deterministic sampling on top of the bit-exact mt19937_64 stream. The
// distribution math is done here rather than with std::*_distribution so
// identical seeds give identical streams on every standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() {  // [0, 1), 53-bit resolution
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal(double mean, double sigma);

  // Uniform index in [0, n) without modulo bias.
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace mapalign::detail
