#ifndef THEMEFIT_RNG_HPP_
#define THEMEFIT_RNG_HPP_

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace themefit {

/// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed ^ mix64(stream));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(seed, a), b);
}

/// Seeded generator with portable draws. mt19937_64's output sequence is
/// pinned by the standard; std::uniform_*_distribution and std::shuffle are
/// not, so every draw below is built directly on the raw 64-bit stream.
/// Identical seeds give identical draws on any conforming platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t u64() { return gen_(); }

    /// Unbiased draw from [0, n). Rejection-sampled.
    std::size_t index(std::size_t n) {
        assert(n > 0);
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        std::uint64_t x = gen_();
        // 2^64 mod bound, computed without 128-bit arithmetic.
        const std::uint64_t rem =
            (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
        if (rem != 0) {
            const std::uint64_t limit = 0 - rem;
            while (x >= limit) x = gen_();
        }
        return static_cast<std::size_t>(x % bound);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double real01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double range(double lo, double hi) { return lo + (hi - lo) * real01(); }

    /// Standard normal via Box-Muller. Consumes two draws per call.
    double gaussian() {
        const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
        const double u2 = real01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    /// Fisher-Yates shuffle using index().
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[index(i)]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace themefit

#endif  // THEMEFIT_RNG_HPP_
