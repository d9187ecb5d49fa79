#ifndef THEMEFIT_PROJECTION_HPP_
#define THEMEFIT_PROJECTION_HPP_

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "themefit/corpus.hpp"
#include "themefit/error.hpp"
#include "themefit/rng.hpp"

namespace themefit {

/// Trainable linear map from raw item features (dimension d) to the shared
/// embedding space (dimension n). Stands in for the paper-scale CNN backbone:
/// raw features arrive precomputed, only this layer learns.
struct Projection {
    int n = 0;
    int d = 0;
    std::vector<float> weight;  // n x d, row-major
    std::vector<float> bias;    // n

    void check_shape() const {
        if (n < 1 || d < 1) throw ArgumentError("projection dims must be >= 1");
        if (weight.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(d) ||
            bias.size() != static_cast<std::size_t>(n))
            throw ArgumentError("projection parameter shapes inconsistent");
    }
};

/// Glorot-style uniform init: weights in [-a, a] with a = sqrt(6/(n+d)),
/// bias zero. Seeded and bitwise reproducible.
inline Projection init_projection(int n, int d, std::uint64_t seed) {
    if (n < 1 || d < 1) throw ArgumentError("projection dims must be >= 1");
    Projection p;
    p.n = n;
    p.d = d;
    p.weight.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
    p.bias.assign(static_cast<std::size_t>(n), 0.0f);
    const double a = std::sqrt(6.0 / (static_cast<double>(n) + static_cast<double>(d)));
    Rng rng(derive_seed(seed, 0x1217));
    for (auto& w : p.weight) w = static_cast<float>(rng.range(-a, a));
    return p;
}

/// Embedding values in double precision; the workhorse for distances, losses
/// and gradients (parameters stay 32-bit, accumulation is 64-bit).
inline std::vector<double> embed_values(const Projection& p, std::span<const float> features) {
    if (static_cast<int>(features.size()) != p.d)
        throw ArgumentError("feature length " + std::to_string(features.size()) +
                            " != projection input dim " + std::to_string(p.d));
    std::vector<double> out(static_cast<std::size_t>(p.n));
    for (int i = 0; i < p.n; ++i) {
        double acc = static_cast<double>(p.bias[static_cast<std::size_t>(i)]);
        const float* row = p.weight.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(p.d);
        for (int j = 0; j < p.d; ++j)
            acc += static_cast<double>(row[j]) * static_cast<double>(features[static_cast<std::size_t>(j)]);
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

inline std::vector<double> embed_values(const Projection& p, const Item& item) {
    return embed_values(p, std::span<const float>(item.features));
}

/// f(o; theta): weight . features + bias, stored 32-bit.
inline std::vector<float> embed(const Projection& p, const Item& item) {
    const std::vector<double> v = embed_values(p, item);
    std::vector<float> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<float>(v[i]);
    return out;
}

struct ProjectionGrad {
    std::vector<double> weight;  // n x d
    std::vector<double> bias;    // n
};

/// Backprop through embed: grad_weight = upstream (x) features (outer product),
/// grad_bias = upstream.
inline ProjectionGrad embed_grad(const Projection& p, const Item& item,
                                 std::span<const double> upstream) {
    if (static_cast<int>(item.features.size()) != p.d)
        throw ArgumentError("feature length != projection input dim");
    if (static_cast<int>(upstream.size()) != p.n)
        throw ArgumentError("upstream length != projection output dim");
    ProjectionGrad g;
    g.weight.assign(static_cast<std::size_t>(p.n) * static_cast<std::size_t>(p.d), 0.0);
    g.bias.assign(static_cast<std::size_t>(p.n), 0.0);
    for (int i = 0; i < p.n; ++i) {
        const double u = upstream[static_cast<std::size_t>(i)];
        g.bias[static_cast<std::size_t>(i)] = u;
        double* row = g.weight.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(p.d);
        for (int j = 0; j < p.d; ++j)
            row[j] = u * static_cast<double>(item.features[static_cast<std::size_t>(j)]);
    }
    return g;
}

}  // namespace themefit

#endif  // THEMEFIT_PROJECTION_HPP_
