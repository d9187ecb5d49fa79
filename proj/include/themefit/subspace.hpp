#ifndef THEMEFIT_SUBSPACE_HPP_
#define THEMEFIT_SUBSPACE_HPP_

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "themefit/corpus.hpp"
#include "themefit/error.hpp"
#include "themefit/projection.hpp"

namespace themefit {

/// Per-category-pair gate vectors. One mask per unordered pair, keyed
/// canonically (u < v), which makes the masked distance symmetric by
/// construction. Pairs never trained fall back to default_mask (all-ones,
/// i.e. the unmasked shared space).
struct MaskTable {
    std::map<CategoryPair, std::vector<float>> masks;
    std::vector<float> default_mask;

    const std::vector<float>& mask_for(int u, int v) const {
        const CategoryPair key = canonical_pair(u, v);
        auto it = masks.find(key);
        return it == masks.end() ? default_mask : it->second;
    }

    int dim() const { return static_cast<int>(default_mask.size()); }
};

/// All-ones masks for the given pairs: at step 0 the masked distance equals
/// the plain squared Euclidean distance.
inline MaskTable make_mask_table(int n, const std::vector<CategoryPair>& pairs) {
    if (n < 1) throw ArgumentError("mask dim must be >= 1");
    MaskTable table;
    table.default_mask.assign(static_cast<std::size_t>(n), 1.0f);
    for (const auto& p : pairs) table.masks[p] = table.default_mask;
    return table;
}

namespace detail {

inline double masked_sq_distance(std::span<const float> mask, std::span<const double> ea,
                                 std::span<const double> eb) {
    double acc = 0.0;
    for (std::size_t t = 0; t < mask.size(); ++t) {
        const double m = static_cast<double>(mask[t]);
        const double diff = m * ea[t] - m * eb[t];
        acc += diff * diff;
    }
    return acc;
}

}  // namespace detail

/// Squared Euclidean distance between the two items' embeddings after both
/// are gated by the pair's mask. Symmetric in (a, b).
inline double masked_distance(const Projection& proj, const MaskTable& masks, const Item& a,
                              const Item& b) {
    if (a.category == b.category)
        throw ArgumentError("masked_distance requires items of distinct categories (got '" +
                            a.id + "' and '" + b.id + "')");
    const std::vector<float>& mask = masks.mask_for(a.category, b.category);
    const std::vector<double> ea = embed_values(proj, a);
    const std::vector<double> eb = embed_values(proj, b);
    if (mask.size() != ea.size()) throw ArgumentError("mask length != embedding dim");
    return detail::masked_sq_distance(mask, ea, eb);
}

/// Anchor item of category u plus a compatible and an incompatible item of
/// category v. The positive shares the anchor's outfit; the negative does not.
struct Triplet {
    const Item* anchor = nullptr;
    const Item* positive = nullptr;
    const Item* negative = nullptr;
    std::string outfit_id;  // anchor's outfit

    void check() const {
        if (!anchor || !positive || !negative) throw ArgumentError("triplet has null item");
        if (positive->category != negative->category)
            throw ArgumentError("triplet positive/negative categories differ");
        if (anchor->category == positive->category)
            throw ArgumentError("triplet anchor shares the positive's category");
    }
};

/// Hinge on the masked distances: max{0, d(a,p) - d(a,n) + margin}.
inline double triplet_loss(const Projection& proj, const MaskTable& masks, const Triplet& t,
                           double margin) {
    t.check();
    const double d_pos = masked_distance(proj, masks, *t.anchor, *t.positive);
    const double d_neg = masked_distance(proj, masks, *t.anchor, *t.negative);
    return std::max(0.0, d_pos - d_neg + margin);
}

struct TripletGrad {
    double loss = 0.0;
    bool active = false;           // hinge engaged; all grads zero otherwise
    std::vector<double> weight;    // n x d
    std::vector<double> bias;      // n
    CategoryPair pair{0, 0};       // the mask these grads apply to
    std::vector<double> mask;      // n
};

/// Analytic gradients of triplet_loss w.r.t. projection weight, bias and the
/// pair's mask. At the hinge kink the zero subgradient is chosen.
inline TripletGrad triplet_grad(const Projection& proj, const MaskTable& masks, const Triplet& t,
                                double margin) {
    t.check();
    const std::size_t n = static_cast<std::size_t>(proj.n);
    TripletGrad g;
    g.pair = canonical_pair(t.anchor->category, t.positive->category);
    g.weight.assign(static_cast<std::size_t>(proj.n) * static_cast<std::size_t>(proj.d), 0.0);
    g.bias.assign(n, 0.0);
    g.mask.assign(n, 0.0);

    const std::vector<float>& mask = masks.mask_for(t.anchor->category, t.positive->category);
    const std::vector<double> ea = embed_values(proj, *t.anchor);
    const std::vector<double> ep = embed_values(proj, *t.positive);
    const std::vector<double> en = embed_values(proj, *t.negative);
    const double d_pos = detail::masked_sq_distance(mask, ea, ep);
    const double d_neg = detail::masked_sq_distance(mask, ea, en);
    const double z = d_pos - d_neg + margin;
    if (z <= 0.0) return g;  // flat region (and the kink itself)

    g.loss = z;
    g.active = true;

    std::vector<double> ua(n), up(n), un(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double m = static_cast<double>(mask[i]);
        const double m2 = m * m;
        const double dp = ea[i] - ep[i];
        const double dn = ea[i] - en[i];
        g.mask[i] = 2.0 * m * (dp * dp - dn * dn);
        ua[i] = 2.0 * m2 * (dp - dn);
        up[i] = -2.0 * m2 * dp;
        un[i] = 2.0 * m2 * dn;
    }
    const auto accumulate = [&](const Item& item, const std::vector<double>& upstream) {
        for (std::size_t i = 0; i < n; ++i) {
            g.bias[i] += upstream[i];
            double* row = g.weight.data() + i * static_cast<std::size_t>(proj.d);
            for (int j = 0; j < proj.d; ++j)
                row[j] += upstream[i] * static_cast<double>(item.features[static_cast<std::size_t>(j)]);
        }
    };
    accumulate(*t.anchor, ua);
    accumulate(*t.positive, up);
    accumulate(*t.negative, un);
    return g;
}

}  // namespace themefit

#endif  // THEMEFIT_SUBSPACE_HPP_
