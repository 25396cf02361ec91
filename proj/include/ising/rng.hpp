#pragma once

#include <cstdint>
#include <random>

namespace ising {

/// Stateless 64-bit mixer used to derive independent seed streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a child seed from a parent seed and a stream index. The result is
/// stable across platforms, so hierarchical runs are reproducible everywhere.
inline std::uint64_t seed_combine(std::uint64_t parent, std::uint64_t stream) {
    return splitmix64(parent ^ (splitmix64(stream) + 0x9e3779b97f4a7c15ULL));
}

/// Thin wrapper around mt19937_64 that produces uniform doubles with a fixed
/// bit-level recipe instead of std::uniform_real_distribution, whose output is
/// implementation defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). Modulo bias is irrelevant at the sizes used here.
    int uniform_int(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

    /// Fair spin in {-1, +1}.
    int spin() { return uniform01() < 0.5 ? -1 : 1; }

private:
    std::mt19937_64 engine_;
};

}  // namespace ising
