#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace wigner_opo {

namespace detail {

/// SplitMix64 finalizer. Bijective on 64-bit words.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Per-trajectory stream seed. Injective in the trajectory index for a fixed
/// master seed (odd multiplier, bijective mix), so streams never collide and
/// results are independent of execution order or thread count.
inline std::uint64_t derive_trajectory_seed(std::uint64_t seed, std::uint64_t trajectory_index) {
    return detail::splitmix64(seed + (trajectory_index + 1) * 0x9e3779b97f4a7c15ULL);
}

/// Deterministic normal generator: mt19937_64 uniforms through Box-Muller.
/// Draws are pair-at-a-time with no cached state, so the stream is fully
/// reproducible across platforms and standard libraries.
class NormalRng {
  public:
    explicit NormalRng(std::uint64_t stream_seed) : engine_(stream_seed) {}

    /// Uniform on (0, 1].
    double uniform_pos() {
        const std::uint64_t bits = engine_() >> 11;  // 53 random bits
        return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
    }

    /// Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    void normal_pair(double& z0, double& z1) {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.28318530717958647692 * u2;
        z0 = r * std::cos(t);
        z1 = r * std::sin(t);
    }

    /// Fills an even-sized buffer with independent standard normals.
    void fill_normal(double* out, int n) {
        for (int i = 0; i + 1 < n; i += 2) normal_pair(out[i], out[i + 1]);
        if (n % 2 != 0) {
            double z0, z1;
            normal_pair(z0, z1);
            out[n - 1] = z0;
        }
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace wigner_opo
