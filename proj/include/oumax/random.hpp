#pragma once

// Seedable random stream with a documented counter-based substream scheme:
// substream i of master seed s is seeded with splitmix64(s + (i+1)*GOLDEN),
// so parallel tasks draw from independent engines and the task -> stream
// mapping never depends on execution order.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace oumax {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    static RandomStream substream(std::uint64_t master_seed, std::uint64_t index) {
        return RandomStream(detail::splitmix64(master_seed + (index + 1) * detail::kGolden));
    }

    std::uint64_t next_u64() { return engine_(); }

    // strictly inside (0,1): (k + 1/2) * 2^-53 with k in [0, 2^53)
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Box-Muller; both uniforms are consumed every call so the draw count per
    // variate is fixed (determinism under stream splitting).
    double gaussian() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi_v<double> * u2);
    }

    double exponential() { return -std::log1p(-uniform01()); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace oumax
