#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace trisma {

/// splitmix64 step; used both as a generator seeder and as a seed mixer.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from (seed, tag). Chaining calls with
/// several tags yields hierarchical substreams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t s = seed ^ (0x517cc1b727220a95ULL + tag * 0x2545f4914f6cdd1dULL);
    return splitmix64(s);
}

/// Deterministic random stream. Transforms are hand-rolled (not the
/// implementation-defined <random> distributions) so that identical seeds
/// give identical values on every platform.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    static RandomStream substream(std::uint64_t root_seed, std::uint64_t tag) {
        return RandomStream(mix_seed(root_seed, tag));
    }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; the paired value is cached.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = 1.0 - uniform01();  // in (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

    /// Circularly-symmetric complex normal with unit total variance.
    std::complex<double> cnormal() {
        const double re = normal();
        const double im = normal();
        return {re * 0.7071067811865476, im * 0.7071067811865476};
    }

  private:
    std::mt19937_64 gen_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Substream tags. Keeping them in one place guarantees that geometry and the
// per-user fading draws never alias.
namespace stream_tag {
inline constexpr std::uint64_t geometry_cu = 0x01;
inline constexpr std::uint64_t geometry_pu = 0x02;
inline constexpr std::uint64_t fading_cu = 0x10;
inline constexpr std::uint64_t fading_pu = 0x11;
inline constexpr std::uint64_t direct_cu = 0x20;
inline constexpr std::uint64_t direct_pu = 0x21;
inline constexpr std::uint64_t random_precoding = 0x30;
inline constexpr std::uint64_t randomization = 0x31;
inline constexpr std::uint64_t sweep_point = 0x40;
}  // namespace stream_tag

}  // namespace trisma
