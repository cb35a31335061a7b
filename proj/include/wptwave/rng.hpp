#pragma once

#include <cstdint>
#include <random>

namespace wptwave {

// Deterministic uniform source for reproducible experiments: std::mt19937_64
// with the explicit 53-bit mapping u = (x >> 11) * 2^-53. Avoids
// std::uniform_real_distribution, whose output is implementation-defined.
class UniformRng {
  public:
    explicit UniformRng(std::uint64_t seed) : engine_(seed) {}

    // uniform in [0, 1)
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double next(double lo, double hi) { return lo + (hi - lo) * next(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace wptwave
