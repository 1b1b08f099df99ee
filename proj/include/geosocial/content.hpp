/**
 * @file
 * @brief Per-region content: binned tweet volume, peak normalization and
 * cross-region aggregation, global mention/hashtag popularity, and TF-IDF
 * region vectors where each region is one document.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "geosocial/corpus.hpp"
#include "geosocial/error.hpp"
#include "geosocial/gazetteer.hpp"
#include "geosocial/text.hpp"

namespace geosocial {

struct BinnedSeries {
    UnitId region_id = 0;
    EpochSeconds bin_width = 300;
    EpochSeconds start = 0;  // multiple of bin_width
    std::vector<std::uint64_t> counts;
};

namespace detail {

inline EpochSeconds floor_div(EpochSeconds a, EpochSeconds b) {
    EpochSeconds q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace detail

/// Tweet counts per fixed-width bin for each region in `regions`, over the
/// common time span of the tweets whose authors are assigned to one of them.
/// Retweets count; tweets of unassigned authors do not.
inline std::vector<BinnedSeries> volume_series(const Corpus& corpus, const RegionAssignment& assignment,
                                               const std::vector<UnitId>& regions, EpochSeconds bin_width = 300) {
    if (bin_width <= 0) throw DomainError("volume_series: bin width must be positive");
    std::unordered_map<UnitId, std::size_t> slot;
    for (std::size_t i = 0; i < regions.size(); ++i) slot.emplace(regions[i], i);

    std::vector<std::pair<std::size_t, EpochSeconds>> hits;  // (region slot, bin index)
    EpochSeconds first_bin = 0, last_bin = -1;
    for (const auto& t : corpus.tweets) {
        auto a = assignment.find(t.author_id);
        if (a == assignment.end()) continue;
        auto s = slot.find(a->second);
        if (s == slot.end()) continue;
        const EpochSeconds bin = detail::floor_div(t.timestamp, bin_width);
        if (hits.empty()) first_bin = last_bin = bin;
        first_bin = std::min(first_bin, bin);
        last_bin = std::max(last_bin, bin);
        hits.emplace_back(s->second, bin);
    }

    const std::size_t length = hits.empty() ? 0 : static_cast<std::size_t>(last_bin - first_bin + 1);
    std::vector<BinnedSeries> out;
    out.reserve(regions.size());
    for (const UnitId r : regions) out.push_back({r, bin_width, first_bin * bin_width, std::vector<std::uint64_t>(length, 0)});
    for (const auto& [s, bin] : hits) ++out[s].counts[static_cast<std::size_t>(bin - first_bin)];
    return out;
}

/// Divides by the series maximum; an all-zero series maps to zeros.
inline std::vector<double> normalize_series(const std::vector<std::uint64_t>& counts) {
    std::vector<double> out(counts.size(), 0.0);
    const auto peak = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
    if (peak == 0) return out;
    for (std::size_t i = 0; i < counts.size(); ++i)
        out[i] = static_cast<double>(counts[i]) / static_cast<double>(peak);
    return out;
}

struct BinProfile {
    double mean = 0.0;
    double std = 0.0;  // population standard deviation
};

inline std::vector<BinProfile> aggregate_profiles(const std::vector<std::vector<double>>& series) {
    if (series.empty()) throw DomainError("aggregate_profiles: no series");
    const std::size_t len = series.front().size();
    for (const auto& s : series)
        if (s.size() != len) throw DomainError("aggregate_profiles: series lengths differ");

    const double n = static_cast<double>(series.size());
    std::vector<BinProfile> out(len);
    for (std::size_t b = 0; b < len; ++b) {
        double sum = 0.0;
        for (const auto& s : series) sum += s[b];
        double mean = sum / n;
        // Corrected two-pass: refine the mean by the mean residual.
        double residual = 0.0;
        for (const auto& s : series) residual += s[b] - mean;
        mean += residual / n;
        double sq = 0.0;
        for (const auto& s : series) sq += (s[b] - mean) * (s[b] - mean);
        out[b] = {mean, std::sqrt(sq / n)};
    }
    return out;
}

struct TermStats {
    std::string term;
    std::size_t tweet_count = 0;

    friend bool operator==(const TermStats&, const TermStats&) = default;
};

/// Most frequent hashtags or mentions, counted once per tweet, retweets included.
inline std::vector<TermStats> popular_terms(const Corpus& corpus, TokenKind kind, std::size_t k) {
    if (kind == TokenKind::word) throw DomainError("popular_terms: kind must be hashtag or mention");
    std::unordered_map<std::string, std::size_t> counts;
    std::vector<const std::string*> distinct;
    for (const auto& t : corpus.tweets) {
        const auto& terms = kind == TokenKind::hashtag ? t.hashtags : t.mentions;
        distinct.clear();
        for (const auto& term : terms) distinct.push_back(&term);
        std::sort(distinct.begin(), distinct.end(), [](auto* a, auto* b) { return *a < *b; });
        distinct.erase(std::unique(distinct.begin(), distinct.end(), [](auto* a, auto* b) { return *a == *b; }),
                       distinct.end());
        for (const auto* term : distinct) ++counts[*term];
    }
    std::vector<TermStats> out;
    out.reserve(counts.size());
    for (auto& [term, n] : counts) out.push_back({term, n});
    std::sort(out.begin(), out.end(), [](const TermStats& a, const TermStats& b) {
        return a.tweet_count != b.tweet_count ? a.tweet_count > b.tweet_count : a.term < b.term;
    });
    if (out.size() > k) out.resize(k);
    return out;
}

struct RegionVector {
    UnitId region_id = 0;
    std::map<std::string, double> weights;  // only weight > 0
};

/// Per-region tweet frequency: for each region with at least one original
/// (non-retweet) tweet, the number of its tweets containing each term.
inline std::map<UnitId, std::unordered_map<std::string, std::size_t>> region_term_frequencies(
    const Corpus& corpus, const RegionAssignment& assignment) {
    std::map<UnitId, std::unordered_map<std::string, std::size_t>> freq;
    std::vector<std::string> terms;
    for (const auto& t : corpus.tweets) {
        if (t.is_retweet()) continue;
        auto a = assignment.find(t.author_id);
        if (a == assignment.end()) continue;
        terms.clear();
        for (auto& tok : tokenize(t.text)) terms.push_back(std::move(tok.surface));
        std::sort(terms.begin(), terms.end());
        terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
        auto& f = freq[a->second];
        for (auto& term : terms) ++f[std::move(term)];
    }
    return freq;
}

/**
 * TF-IDF vectors with regions as documents:
 *   weight(w, r) = freq(w, r) * ln(|R| / |{r in R : w in r}|)
 * R is the set of regions with at least one original tweet. Terms present in
 * every region have weight 0 and are not stored.
 */
inline std::vector<RegionVector> tfidf_vectors(const Corpus& corpus, const RegionAssignment& assignment) {
    const auto freq = region_term_frequencies(corpus, assignment);
    if (freq.size() < 2) throw DomainError("tfidf: need at least two regions with tweets");

    std::unordered_map<std::string_view, std::size_t> df;
    for (const auto& [region, f] : freq)
        for (const auto& [term, n] : f) ++df[term];

    const double region_count = static_cast<double>(freq.size());
    std::vector<RegionVector> out;
    out.reserve(freq.size());
    for (const auto& [region, f] : freq) {
        RegionVector v{region, {}};
        for (const auto& [term, n] : f) {
            const std::size_t d = df.at(term);
            if (d == freq.size()) continue;
            v.weights.emplace(term, static_cast<double>(n) * std::log(region_count / static_cast<double>(d)));
        }
        out.push_back(std::move(v));
    }
    return out;
}

struct TermWeight {
    std::string term;
    double weight = 0.0;
};

struct RegionTopTerms {
    UnitId region_id = 0;
    std::vector<TermWeight> terms;
};

inline std::vector<RegionTopTerms> top_terms_per_region(const std::vector<RegionVector>& vectors, std::size_t k = 25) {
    std::vector<RegionTopTerms> out;
    out.reserve(vectors.size());
    for (const auto& v : vectors) {
        RegionTopTerms top{v.region_id, {}};
        for (const auto& [term, w] : v.weights)
            if (w > 0.0) top.terms.push_back({term, w});
        const std::size_t keep = std::min(k, top.terms.size());
        std::partial_sort(top.terms.begin(), top.terms.begin() + static_cast<std::ptrdiff_t>(keep), top.terms.end(),
                          [](const TermWeight& a, const TermWeight& b) {
                              return a.weight != b.weight ? a.weight > b.weight : a.term < b.term;
                          });
        top.terms.resize(keep);
        out.push_back(std::move(top));
    }
    return out;
}

}  // namespace geosocial
