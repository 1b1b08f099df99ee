/**
 * @file
 * @brief Region-to-region origin-destination matrix of mentions, in/out
 * flow ratios and the flow-diagram edge list.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "geosocial/corpus.hpp"
#include "geosocial/error.hpp"
#include "geosocial/gazetteer.hpp"
#include "geosocial/text.hpp"

namespace geosocial {

/// cells(i, j): tweets authored in regions[i] mentioning at least one account
/// located in regions[j].
class ODMatrix {
public:
    ODMatrix() = default;
    explicit ODMatrix(std::vector<UnitId> regions)
        : regions_(std::move(regions)), cells_(regions_.size() * regions_.size(), 0) {}

    std::size_t size() const noexcept { return regions_.size(); }
    const std::vector<UnitId>& regions() const noexcept { return regions_; }

    std::uint64_t& operator()(std::size_t i, std::size_t j) { return cells_[i * regions_.size() + j]; }
    std::uint64_t operator()(std::size_t i, std::size_t j) const { return cells_[i * regions_.size() + j]; }

    std::uint64_t total() const {
        std::uint64_t s = 0;
        for (const auto c : cells_) s += c;
        return s;
    }

    friend bool operator==(const ODMatrix&, const ODMatrix&) = default;

private:
    std::vector<UnitId> regions_;
    std::vector<std::uint64_t> cells_;
};

/// "@screen_name" (normalized) -> region of that account.
using MentionIndex = std::unordered_map<std::string, UnitId>;

inline MentionIndex build_mention_index(const Corpus& corpus, const RegionAssignment& assignment) {
    MentionIndex idx;
    for (const auto& [id, region] : assignment) {
        const auto* u = corpus.find_user(id);
        if (!u || u->screen_name.empty()) continue;
        idx.emplace("@" + normalize_text(u->screen_name), region);
    }
    return idx;
}

struct ODResult {
    ODMatrix matrix;
    std::size_t dropped_mentions = 0;  // unknown or unlocated accounts
};

/**
 * Each tweet from an assigned author adds 1 to (origin, j) for every distinct
 * destination region j among the accounts it mentions. A retweet also counts
 * as a mention of the original author when the original is in the corpus.
 */
inline ODResult od_matrix(const Corpus& corpus, const RegionAssignment& assignment, const MentionIndex& mentions,
                          const std::vector<UnitId>& regions) {
    ODResult out{ODMatrix(regions), 0};
    std::unordered_map<UnitId, std::size_t> slot;
    for (std::size_t i = 0; i < regions.size(); ++i) slot.emplace(regions[i], i);

    std::unordered_map<TweetId, UserId> author_of;
    author_of.reserve(corpus.tweets.size());
    for (const auto& t : corpus.tweets) author_of.emplace(t.tweet_id, t.author_id);

    auto slot_of_user = [&](UserId u) -> std::optional<std::size_t> {
        auto a = assignment.find(u);
        if (a == assignment.end()) return std::nullopt;
        auto s = slot.find(a->second);
        if (s == slot.end()) return std::nullopt;
        return s->second;
    };

    std::vector<std::size_t> dest;
    for (const auto& t : corpus.tweets) {
        const auto origin = slot_of_user(t.author_id);
        if (!origin) continue;
        dest.clear();
        for (const auto& m : t.mentions) {
            auto hit = mentions.find(m);
            auto s = hit == mentions.end() ? slot.end() : slot.find(hit->second);
            if (s == slot.end()) {
                ++out.dropped_mentions;
                continue;
            }
            dest.push_back(s->second);
        }
        if (t.retweeted_id) {
            if (auto a = author_of.find(*t.retweeted_id); a != author_of.end()) {
                if (auto s = slot_of_user(a->second)) dest.push_back(*s);
            }
        }
        std::sort(dest.begin(), dest.end());
        dest.erase(std::unique(dest.begin(), dest.end()), dest.end());
        for (const auto j : dest) ++out.matrix(*origin, j);
    }
    return out;
}

struct FlowStats {
    UnitId region_id = 0;
    std::uint64_t in = 0;
    std::uint64_t out = 0;
    std::optional<double> in_out_ratio;  // undefined when out == 0
    std::optional<double> intra_share;   // undefined when in == 0
};

inline std::vector<FlowStats> flow_stats(const ODMatrix& m) {
    std::vector<FlowStats> stats;
    stats.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        FlowStats s;
        s.region_id = m.regions()[i];
        for (std::size_t j = 0; j < m.size(); ++j) {
            s.in += m(j, i);
            s.out += m(i, j);
        }
        if (s.out > 0) s.in_out_ratio = static_cast<double>(s.in) / static_cast<double>(s.out);
        if (s.in > 0) s.intra_share = static_cast<double>(m(i, i)) / static_cast<double>(s.in);
        stats.push_back(s);
    }
    return stats;
}

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // population
    std::size_t n = 0;
};

struct FlowSummary {
    MeanStd ratio;
    MeanStd intra_share;
};

namespace detail {

inline std::optional<MeanStd> mean_std(const std::vector<double>& xs) {
    if (xs.empty()) return std::nullopt;
    double sum = 0.0;
    for (const double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double sq = 0.0;
    for (const double x : xs) sq += (x - mean) * (x - mean);
    return MeanStd{mean, std::sqrt(sq / static_cast<double>(xs.size())), xs.size()};
}

}  // namespace detail

/// Mean and population std over the defined ratios and intra shares.
inline FlowSummary flow_summary(const std::vector<FlowStats>& stats) {
    std::vector<double> ratios, intra;
    for (const auto& s : stats) {
        if (s.in_out_ratio) ratios.push_back(*s.in_out_ratio);
        if (s.intra_share) intra.push_back(*s.intra_share);
    }
    auto r = detail::mean_std(ratios);
    auto i = detail::mean_std(intra);
    if (!r || !i) throw DomainError("flow_summary: no defined entries");
    return {*r, *i};
}

struct FlowEdge {
    UnitId source = 0;
    UnitId destination = 0;
    std::uint64_t count = 0;

    friend bool operator==(const FlowEdge&, const FlowEdge&) = default;
};

/// Nonzero cells, count descending then (source, destination).
inline std::vector<FlowEdge> flow_diagram_export(const ODMatrix& m) {
    std::vector<FlowEdge> edges;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (m(i, j) > 0) edges.push_back({m.regions()[i], m.regions()[j], m(i, j)});
    std::sort(edges.begin(), edges.end(), [](const FlowEdge& a, const FlowEdge& b) {
        if (a.count != b.count) return a.count > b.count;
        return std::tie(a.source, a.destination) < std::tie(b.source, b.destination);
    });
    return edges;
}

}  // namespace geosocial
