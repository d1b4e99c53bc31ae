#ifndef JDD_RNG_HPP
#define JDD_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace jdd {

/**
 * SplitMix64 stream generator.
 *
 * Small, fast, and seedable from a single 64-bit key. Every sampler in this
 * library draws from an explicitly seeded SplitMix64 stream so that results
 * are reproducible bit-for-bit for a fixed (seed, count) pair, independent
 * of thread count (parallel samplers split work into fixed-size chunks, each
 * with a derived stream).
 */
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double next_double_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; generates pairs and caches the spare.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double_pos();
        double u2 = next_double();
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = 6.283185307179586477 * u2;
        spare_ = rad * std::sin(ang);
        have_spare_ = true;
        return rad * std::cos(ang);
    }

    bool next_bernoulli(double prob) { return next_double() < prob; }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Mixes one 64-bit key into a seed (SplitMix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (key + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives a task seed from a master seed and a list of keys. Used for the
/// per-task seeding contract: the same (master, keys...) always yields the
/// same stream, regardless of evaluation order or thread count.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t s = mix_seed(0x6A09E667F3BCC909ULL, master);
    for (std::uint64_t k : keys) s = mix_seed(s, k);
    return s;
}

/// Key a double's exact bit pattern (so p = 0.5 and rho values key streams).
inline std::uint64_t key_of(double x) {
    union { double d; std::uint64_t u; } conv{x};
    return conv.u;
}

} // namespace jdd

#endif // JDD_RNG_HPP
