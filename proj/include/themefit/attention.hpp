#ifndef THEMEFIT_ATTENTION_HPP_
#define THEMEFIT_ATTENTION_HPP_

#include <cmath>
#include <map>
#include <vector>

#include "themefit/corpus.hpp"
#include "themefit/error.hpp"
#include "themefit/subspace.hpp"

namespace themefit {

/// Per-theme attention over category pairs plus a per-theme calibration bias.
/// Pairs absent from a theme's map score with default_weight.
struct ThemeAttention {
    std::map<int, std::map<CategoryPair, double>> weights;  // theme id -> pair -> w
    std::map<int, double> bias;                             // theme id -> beta
    double default_weight = 0.0;

    bool has_theme(int theme_id) const { return weights.count(theme_id) > 0; }

    double weight_for(int theme_id, const CategoryPair& pair) const {
        auto t = weights.find(theme_id);
        if (t == weights.end())
            throw ArgumentError("no attention for theme id " + std::to_string(theme_id));
        auto w = t->second.find(pair);
        return w == t->second.end() ? default_weight : w->second;
    }

    double bias_for(int theme_id) const {
        auto b = bias.find(theme_id);
        if (b == bias.end())
            throw ArgumentError("no attention bias for theme id " + std::to_string(theme_id));
        return b->second;
    }
};

struct PairDistance {
    CategoryPair pair{0, 0};
    double dist = 0.0;
};

/// Masked distance for every unordered item pair of the outfit. Embeddings
/// are computed once per item.
inline std::vector<PairDistance> outfit_pair_distances(const Projection& proj,
                                                       const MaskTable& masks,
                                                       const Corpus& corpus,
                                                       const Outfit& outfit) {
    if (outfit.item_ids.size() < 2)
        throw ArgumentError("outfit '" + outfit.id + "' has fewer than 2 items");
    std::vector<const Item*> items;
    items.reserve(outfit.item_ids.size());
    for (const auto& iid : outfit.item_ids) items.push_back(&corpus.item(iid));
    std::vector<std::vector<double>> emb;
    emb.reserve(items.size());
    for (const Item* it : items) emb.push_back(embed_values(proj, *it));

    std::vector<PairDistance> out;
    out.reserve(items.size() * (items.size() - 1) / 2);
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t j = i + 1; j < items.size(); ++j) {
            const CategoryPair key = canonical_pair(items[i]->category, items[j]->category);
            const std::vector<float>& mask = masks.mask_for(items[i]->category, items[j]->category);
            out.push_back({key, detail::masked_sq_distance(mask, emb[i], emb[j])});
        }
    }
    return out;
}

/// Theme-ignored outfit score: mean of all pairwise masked distances.
inline double baseline_score(const Projection& proj, const MaskTable& masks, const Corpus& corpus,
                             const Outfit& outfit) {
    const std::vector<PairDistance> dists = outfit_pair_distances(proj, masks, corpus, outfit);
    double acc = 0.0;
    for (const auto& pd : dists) acc += pd.dist;
    return acc / static_cast<double>(dists.size());
}

/// Theme-aware outfit score: attention-weighted sum of pairwise masked
/// distances under theme P.
inline double theme_score(const Projection& proj, const MaskTable& masks,
                          const ThemeAttention& att, const Corpus& corpus, const Outfit& outfit,
                          int theme_id) {
    if (!att.has_theme(theme_id))
        throw ArgumentError("unknown theme id " + std::to_string(theme_id) + " in attention table");
    const std::vector<PairDistance> dists = outfit_pair_distances(proj, masks, corpus, outfit);
    double acc = 0.0;
    for (const auto& pd : dists) acc += att.weight_for(theme_id, pd.pair) * pd.dist;
    return acc;
}

/// sigma(beta - y): larger distance score means less compatible. Saturates
/// without NaN for any finite input.
inline double predict_probability(double score, double beta) {
    const double z = beta - score;
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

/// Cross-entropy against a binary label; probability clamped to
/// [1e-7, 1 - 1e-7] before the logs.
inline double xent_loss(double probability, int truth) {
    constexpr double kEps = 1e-7;
    const double p = std::min(1.0 - kEps, std::max(kEps, probability));
    const double t = truth ? 1.0 : 0.0;
    return -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
}

/// One attention training example: the outfit's precomputed pair distances
/// plus its compatibility label.
struct AttentionExample {
    std::vector<PairDistance> pairs;
    int label = 1;
};

struct AttentionGrad {
    double loss = 0.0;
    double probability = 0.0;
    std::map<CategoryPair, double> weight;  // only pairs present in the example
    double bias = 0.0;
};

/// Loss and analytic gradients of the cross-entropy w.r.t. the theme's
/// attention weights and bias, for a single example.
inline AttentionGrad attention_loss_grad(const std::map<CategoryPair, double>& weights,
                                         double default_weight, double beta,
                                         const AttentionExample& ex) {
    double y = 0.0;
    for (const auto& pd : ex.pairs) {
        auto it = weights.find(pd.pair);
        y += (it == weights.end() ? default_weight : it->second) * pd.dist;
    }
    AttentionGrad g;
    const double p = predict_probability(y, beta);
    g.probability = p;
    g.loss = xent_loss(p, ex.label);
    const double t = ex.label ? 1.0 : 0.0;
    g.bias = p - t;
    for (const auto& pd : ex.pairs) g.weight[pd.pair] += (t - p) * pd.dist;
    return g;
}

}  // namespace themefit

#endif  // THEMEFIT_ATTENTION_HPP_
