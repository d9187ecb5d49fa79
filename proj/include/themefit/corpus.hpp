#ifndef THEMEFIT_CORPUS_HPP_
#define THEMEFIT_CORPUS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "themefit/error.hpp"
#include "themefit/rng.hpp"

namespace themefit {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

inline const std::array<std::string, 7>& coarse_category_names() {
    static const std::array<std::string, 7> names = {
        "inner-top", "outer-top", "bottom", "shoe", "bag", "accessory", "other"};
    return names;
}

inline const std::array<std::string, 5>& theme_group_names() {
    static const std::array<std::string, 5> names = {
        "occasion", "style", "fit", "gender", "synthetic"};
    return names;
}

struct Category {
    int id = 0;
    std::string name;
    std::string coarse;  // one of coarse_category_names()
};

struct Theme {
    int id = 0;
    std::string name;
    std::string group;  // one of theme_group_names()
};

struct Item {
    std::string id;
    int category = 0;
    std::vector<float> features;
};

struct Outfit {
    std::string id;
    std::vector<std::string> item_ids;  // length >= 2, categories all distinct
    std::vector<int> theme_ids;         // >= 1, sorted ascending
    int label = 1;                      // 1 = compatible
};

enum class SplitPart { train, val, test };

inline std::string to_string(SplitPart p) {
    switch (p) {
        case SplitPart::train: return "train";
        case SplitPart::val: return "val";
        case SplitPart::test: return "test";
    }
    return "?";
}

inline SplitPart split_from_string(const std::string& s) {
    if (s == "train") return SplitPart::train;
    if (s == "val") return SplitPart::val;
    if (s == "test") return SplitPart::test;
    throw ArgumentError("unknown split name: " + s);
}

struct Corpus {
    std::vector<Category> categories;
    std::vector<Theme> themes;
    std::map<std::string, Item> items;  // keyed by item id
    std::vector<Outfit> outfits;
    std::map<std::string, SplitPart> split;  // outfit id -> part; empty until assigned

    const Item& item(const std::string& id) const {
        auto it = items.find(id);
        if (it == items.end()) throw ArgumentError("unknown item id: " + id);
        return it->second;
    }

    const Category& category(int id) const {
        if (id < 0 || id >= static_cast<int>(categories.size()))
            throw ArgumentError("category id out of range: " + std::to_string(id));
        return categories[static_cast<std::size_t>(id)];
    }

    const Theme& theme(int id) const {
        if (id < 0 || id >= static_cast<int>(themes.size()))
            throw ArgumentError("theme id out of range: " + std::to_string(id));
        return themes[static_cast<std::size_t>(id)];
    }

    int feature_dim() const {
        return items.empty() ? 0 : static_cast<int>(items.begin()->second.features.size());
    }

    bool split_assigned() const { return !outfits.empty() && split.size() == outfits.size(); }

    SplitPart split_of(const std::string& outfit_id) const {
        auto it = split.find(outfit_id);
        if (it == split.end()) throw ArgumentError("outfit has no split: " + outfit_id);
        return it->second;
    }

    std::vector<const Outfit*> outfits_in(SplitPart part) const {
        std::vector<const Outfit*> out;
        for (const auto& o : outfits) {
            auto it = split.find(o.id);
            if (it != split.end() && it->second == part) out.push_back(&o);
        }
        return out;
    }

    int find_category(const std::string& name) const {
        for (const auto& c : categories)
            if (c.name == name) return c.id;
        return -1;
    }

    /// Resolves a theme reference. Accepts a plain name when globally unique,
    /// or "group:name" when the same name appears in several groups.
    int find_theme(const std::string& ref) const {
        const auto colon = ref.find(':');
        if (colon != std::string::npos) {
            const std::string group = ref.substr(0, colon);
            const std::string name = ref.substr(colon + 1);
            for (const auto& t : themes)
                if (t.group == group && t.name == name) return t.id;
            return -1;
        }
        int found = -1;
        for (const auto& t : themes) {
            if (t.name == ref) {
                if (found >= 0) return -2;  // ambiguous
                found = t.id;
            }
        }
        return found;
    }

    /// Name that find_theme resolves back to this theme: plain when unique,
    /// otherwise group-qualified.
    std::string theme_ref(int theme_id) const {
        const Theme& t = theme(theme_id);
        int count = 0;
        for (const auto& u : themes)
            if (u.name == t.name) ++count;
        return count > 1 ? t.group + ":" + t.name : t.name;
    }
};

// ---------------------------------------------------------------------------
// Ingestion
// ---------------------------------------------------------------------------

namespace detail {

inline std::string loc(const std::string& path, int line) {
    return path + ":" + std::to_string(line) + ": ";
}

inline json parse_line(const std::string& path, int line, const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(loc(path, line) + e.what());
    }
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

}  // namespace detail

inline Corpus load_vocab(const std::string& vocab_path) {
    const json v = detail::load_json_file(vocab_path);
    Corpus corpus;
    try {
        std::set<std::string> cat_names;
        for (const auto& jc : v.at("categories")) {
            Category c;
            c.id = static_cast<int>(corpus.categories.size());
            c.name = jc.at("name").get<std::string>();
            c.coarse = jc.at("coarse").get<std::string>();
            const auto& allowed = coarse_category_names();
            if (std::find(allowed.begin(), allowed.end(), c.coarse) == allowed.end())
                throw ValidationError(vocab_path + ": unknown coarse category '" + c.coarse + "'");
            if (!cat_names.insert(c.name).second)
                throw ValidationError(vocab_path + ": duplicate category name '" + c.name + "'");
            corpus.categories.push_back(std::move(c));
        }
        std::set<std::pair<std::string, std::string>> theme_keys;
        for (const auto& jt : v.at("themes")) {
            Theme t;
            t.id = static_cast<int>(corpus.themes.size());
            t.name = jt.at("name").get<std::string>();
            t.group = jt.at("group").get<std::string>();
            const auto& groups = theme_group_names();
            if (std::find(groups.begin(), groups.end(), t.group) == groups.end())
                throw ValidationError(vocab_path + ": unknown theme group '" + t.group + "'");
            if (!theme_keys.insert({t.group, t.name}).second)
                throw ValidationError(vocab_path + ": duplicate theme '" + t.name +
                                      "' in group '" + t.group + "'");
            corpus.themes.push_back(std::move(t));
        }
    } catch (const json::exception& e) {
        throw ParseError(vocab_path + ": " + e.what());
    }
    return corpus;
}

/// Parses one items.jsonl record. Returns the item; validates against vocab
/// and the feature length observed so far (-1 = not yet fixed).
inline Item parse_item_record(const Corpus& corpus, const std::string& path, int line,
                              const json& j, int expected_dim) {
    Item item;
    try {
        item.id = j.at("id").get<std::string>();
        const std::string cat_name = j.at("category").get<std::string>();
        const int cat = corpus.find_category(cat_name);
        if (cat < 0)
            throw ValidationError(detail::loc(path, line) + "unknown category '" + cat_name + "'");
        item.category = cat;
        for (const auto& f : j.at("features")) {
            const double x = f.get<double>();
            if (!std::isfinite(x))
                throw ValidationError(detail::loc(path, line) + "non-finite feature in item '" +
                                      item.id + "'");
            item.features.push_back(static_cast<float>(x));
        }
    } catch (const json::exception& e) {
        throw ParseError(detail::loc(path, line) + e.what());
    }
    if (item.features.empty())
        throw ValidationError(detail::loc(path, line) + "item '" + item.id + "' has no features");
    if (expected_dim >= 0 && static_cast<int>(item.features.size()) != expected_dim)
        throw ValidationError(detail::loc(path, line) + "item '" + item.id + "' has " +
                              std::to_string(item.features.size()) + " features, expected " +
                              std::to_string(expected_dim));
    return item;
}

inline Outfit parse_outfit_record(const Corpus& corpus, const std::string& path, int line,
                                  const json& j) {
    Outfit outfit;
    std::vector<std::string> theme_refs;
    try {
        outfit.id = j.at("id").get<std::string>();
        outfit.item_ids = j.at("items").get<std::vector<std::string>>();
        theme_refs = j.at("themes").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw ParseError(detail::loc(path, line) + e.what());
    }
    if (outfit.item_ids.size() < 2)
        throw ValidationError(detail::loc(path, line) + "outfit '" + outfit.id +
                              "' has fewer than 2 items");
    if (theme_refs.empty())
        throw ValidationError(detail::loc(path, line) + "outfit '" + outfit.id + "' has no themes");

    std::set<std::string> seen_ids;
    std::set<int> seen_cats;
    for (const auto& iid : outfit.item_ids) {
        if (!seen_ids.insert(iid).second)
            throw ValidationError(detail::loc(path, line) + "outfit '" + outfit.id +
                                  "' references item '" + iid + "' more than once");
        auto it = corpus.items.find(iid);
        if (it == corpus.items.end())
            throw ValidationError(detail::loc(path, line) + "outfit '" + outfit.id +
                                  "' references missing item '" + iid + "'");
        if (!seen_cats.insert(it->second.category).second)
            throw ValidationError(detail::loc(path, line) + "outfit '" + outfit.id +
                                  "' has two items of category '" +
                                  corpus.category(it->second.category).name + "'");
    }
    std::set<int> tids;
    for (const auto& ref : theme_refs) {
        const int tid = corpus.find_theme(ref);
        if (tid == -2)
            throw ValidationError(detail::loc(path, line) + "ambiguous theme '" + ref +
                                  "' (use group:name)");
        if (tid < 0)
            throw ValidationError(detail::loc(path, line) + "unknown theme '" + ref + "'");
        tids.insert(tid);
    }
    outfit.theme_ids.assign(tids.begin(), tids.end());
    outfit.label = 1;
    return outfit;
}

inline Corpus load_corpus(const std::string& items_path, const std::string& outfits_path,
                          const std::string& vocab_path) {
    Corpus corpus = load_vocab(vocab_path);

    std::ifstream items_in(items_path);
    if (!items_in) throw ParseError(items_path + ": cannot open file");
    std::string text;
    int line = 0;
    int dim = -1;
    while (std::getline(items_in, text)) {
        ++line;
        if (text.empty()) continue;
        const json j = detail::parse_line(items_path, line, text);
        Item item = parse_item_record(corpus, items_path, line, j, dim);
        if (dim < 0) dim = static_cast<int>(item.features.size());
        if (!corpus.items.emplace(item.id, item).second)
            throw ValidationError(detail::loc(items_path, line) + "duplicate item id '" +
                                  item.id + "'");
    }

    std::ifstream outfits_in(outfits_path);
    if (!outfits_in) throw ParseError(outfits_path + ": cannot open file");
    line = 0;
    std::set<std::string> outfit_ids;
    while (std::getline(outfits_in, text)) {
        ++line;
        if (text.empty()) continue;
        const json j = detail::parse_line(outfits_path, line, text);
        Outfit o = parse_outfit_record(corpus, outfits_path, line, j);
        if (!outfit_ids.insert(o.id).second)
            throw ValidationError(detail::loc(outfits_path, line) + "duplicate outfit id '" +
                                  o.id + "'");
        corpus.outfits.push_back(std::move(o));
    }
    return corpus;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline void write_corpus(const Corpus& corpus, const std::string& items_path,
                         const std::string& outfits_path, const std::string& vocab_path) {
    {
        json v;
        v["categories"] = json::array();
        for (const auto& c : corpus.categories)
            v["categories"].push_back({{"name", c.name}, {"coarse", c.coarse}});
        v["themes"] = json::array();
        for (const auto& t : corpus.themes)
            v["themes"].push_back({{"name", t.name}, {"group", t.group}});
        std::ofstream out(vocab_path);
        if (!out) throw ParseError(vocab_path + ": cannot open for writing");
        out << v.dump(2) << "\n";
    }
    {
        std::ofstream out(items_path);
        if (!out) throw ParseError(items_path + ": cannot open for writing");
        for (const auto& [id, item] : corpus.items) {
            json j;
            j["id"] = id;
            j["category"] = corpus.category(item.category).name;
            j["features"] = item.features;
            out << j.dump() << "\n";
        }
    }
    {
        std::ofstream out(outfits_path);
        if (!out) throw ParseError(outfits_path + ": cannot open for writing");
        for (const auto& o : corpus.outfits) {
            json j;
            j["id"] = o.id;
            j["items"] = o.item_ids;
            json themes = json::array();
            for (int tid : o.theme_ids) themes.push_back(corpus.theme_ref(tid));
            j["themes"] = themes;
            out << j.dump() << "\n";
        }
    }
}

inline void write_split(const Corpus& corpus, const std::string& path) {
    json j = json::object();
    for (const auto& [oid, part] : corpus.split) j[oid] = to_string(part);
    std::ofstream out(path);
    if (!out) throw ParseError(path + ": cannot open for writing");
    out << j.dump(2) << "\n";
}

/// Applies a split override file. Must cover every outfit exactly.
inline void apply_split(Corpus& corpus, const std::string& path) {
    const json j = detail::load_json_file(path);
    std::map<std::string, SplitPart> split;
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const auto& o : corpus.outfits)
            if (o.id == it.key()) { known = true; break; }
        if (!known)
            throw ValidationError(path + ": split names unknown outfit '" + it.key() + "'");
        try {
            split[it.key()] = split_from_string(it.value().get<std::string>());
        } catch (const ArgumentError& e) {
            throw ValidationError(path + ": " + e.what());
        } catch (const json::exception& e) {
            throw ParseError(path + ": " + e.what());
        }
    }
    for (const auto& o : corpus.outfits)
        if (!split.count(o.id))
            throw ValidationError(path + ": no split for outfit '" + o.id + "'");
    corpus.split = std::move(split);
}

// ---------------------------------------------------------------------------
// Split assignment
// ---------------------------------------------------------------------------

struct SplitFractions {
    double train = 0.8;
    double val = 0.1;
    double test = 0.1;
};

/// Seeded uniform shuffle + largest-remainder allocation. Ties in the
/// remainder go to the earlier part (train, val, test order).
inline void make_split(Corpus& corpus, const SplitFractions& fractions, std::uint64_t seed) {
    const std::array<double, 3> f = {fractions.train, fractions.val, fractions.test};
    for (double x : f)
        if (!(x > 0.0)) throw ArgumentError("split fractions must be positive");
    const double sum = f[0] + f[1] + f[2];
    if (std::abs(sum - 1.0) > 1e-9)
        throw ArgumentError("split fractions must sum to 1, got " + std::to_string(sum));

    const std::size_t n = corpus.outfits.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(derive_seed(seed, 0x59117));
    rng.shuffle(order);

    std::array<std::size_t, 3> counts{};
    std::array<double, 3> remainder{};
    std::size_t assigned = 0;
    for (int k = 0; k < 3; ++k) {
        const double exact = f[static_cast<std::size_t>(k)] * static_cast<double>(n);
        counts[static_cast<std::size_t>(k)] = static_cast<std::size_t>(std::floor(exact));
        remainder[static_cast<std::size_t>(k)] = exact - std::floor(exact);
        assigned += counts[static_cast<std::size_t>(k)];
    }
    while (assigned < n) {
        int best = 0;
        for (int k = 1; k < 3; ++k)
            if (remainder[static_cast<std::size_t>(k)] > remainder[static_cast<std::size_t>(best)])
                best = k;
        counts[static_cast<std::size_t>(best)] += 1;
        remainder[static_cast<std::size_t>(best)] = -1.0;
        ++assigned;
    }

    corpus.split.clear();
    std::size_t pos = 0;
    const std::array<SplitPart, 3> parts = {SplitPart::train, SplitPart::val, SplitPart::test};
    for (int k = 0; k < 3; ++k) {
        for (std::size_t i = 0; i < counts[static_cast<std::size_t>(k)]; ++i, ++pos)
            corpus.split[corpus.outfits[order[pos]].id] = parts[static_cast<std::size_t>(k)];
    }
}

// ---------------------------------------------------------------------------
// Category pairs
// ---------------------------------------------------------------------------

using CategoryPair = std::pair<int, int>;

inline CategoryPair canonical_pair(int u, int v) {
    if (u == v) throw ArgumentError("category pair requires two distinct categories");
    return u < v ? CategoryPair{u, v} : CategoryPair{v, u};
}

inline std::string pair_key(const CategoryPair& p) {
    return std::to_string(p.first) + ":" + std::to_string(p.second);
}

/// Unordered category pairs observed in any training outfit, canonical and
/// sorted lexicographically.
inline std::vector<CategoryPair> category_pairs(const Corpus& corpus) {
    if (!corpus.split_assigned()) throw ArgumentError("corpus split not assigned");
    std::set<CategoryPair> pairs;
    for (const Outfit* o : corpus.outfits_in(SplitPart::train)) {
        for (std::size_t i = 0; i < o->item_ids.size(); ++i) {
            for (std::size_t j = i + 1; j < o->item_ids.size(); ++j) {
                pairs.insert(canonical_pair(corpus.item(o->item_ids[i]).category,
                                            corpus.item(o->item_ids[j]).category));
            }
        }
    }
    return {pairs.begin(), pairs.end()};
}

}  // namespace themefit

#endif  // THEMEFIT_CORPUS_HPP_
