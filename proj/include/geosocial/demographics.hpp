/**
 * @file
 * @brief Name-based gender classification and biography vocabulary analysis:
 * co-occurrence graph, top-weight edge filter, PageRank ranking and the
 * per-word gender tendency.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "geosocial/corpus.hpp"
#include "geosocial/error.hpp"
#include "geosocial/pagerank.hpp"
#include "geosocial/text.hpp"

namespace geosocial {

enum class Gender : std::uint8_t { male, female, undetermined };

inline std::string_view to_string(Gender g) noexcept {
    switch (g) {
        case Gender::male: return "male";
        case Gender::female: return "female";
        case Gender::undetermined: return "undetermined";
    }
    return "undetermined";
}

struct GenderLexicon {
    std::set<std::string> male_names;
    std::set<std::string> female_names;
};

/// One entry per line, '#' starts a comment line. Entries are normalized and
/// must be a single token.
inline std::set<std::string> load_word_list(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open " + path);
    std::set<std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string entry = collapse_whitespace(normalize_text(line));
        if (entry.empty() || entry.front() == '#') continue;
        if (entry.find(' ') != std::string::npos)
            throw IngestError(path + ":" + std::to_string(lineno) + ": entry must be a single token");
        out.insert(entry);
    }
    return out;
}

/// First whitespace-delimited token of the normalized display name.
inline std::string first_name(std::string_view display_name) {
    const std::string norm = collapse_whitespace(normalize_text(display_name));
    return norm.substr(0, norm.find(' '));
}

inline Gender classify_gender(const GenderLexicon& lex, std::string_view display_name) {
    const std::string name = first_name(display_name);
    if (name.empty()) return Gender::undetermined;
    const bool male = lex.male_names.count(name) > 0;
    const bool female = lex.female_names.count(name) > 0;
    if (male == female) return Gender::undetermined;
    return male ? Gender::male : Gender::female;
}

inline std::map<UserId, Gender> classify_users(const GenderLexicon& lex, const Corpus& corpus) {
    std::map<UserId, Gender> out;
    for (const auto& [id, u] : corpus.users) out.emplace(id, classify_gender(lex, u.display_name));
    return out;
}

/// Sorted, duplicate-free words of one biography.
using WordSet = std::vector<std::string>;

inline WordSet bio_words(std::string_view bio, const std::set<std::string>& stopwords) {
    WordSet words;
    for (auto& tok : tokenize(bio)) {
        if (tok.kind == TokenKind::word && !stopwords.count(tok.surface)) words.push_back(std::move(tok.surface));
    }
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    return words;
}

/// Word sets of male and female users only; empty sets are kept.
inline std::map<UserId, WordSet> bio_word_sets(const Corpus& corpus, const std::map<UserId, Gender>& genders,
                                               const std::set<std::string>& stopwords) {
    std::map<UserId, WordSet> out;
    for (const auto& [id, g] : genders) {
        if (g == Gender::undetermined) continue;
        const auto* user = corpus.find_user(id);
        if (!user) continue;
        out.emplace(id, bio_words(user->bio_text, stopwords));
    }
    return out;
}

struct CooccurrenceEdge {
    std::size_t u = 0;  // u < v, indices into nodes
    std::size_t v = 0;
    std::size_t bios = 0;
    double weight = 0.0;  // bios / total_bios
};

struct CooccurrenceGraph {
    std::vector<std::string> nodes;  // ascending
    std::vector<CooccurrenceEdge> edges;  // ascending (u, v)
    std::size_t total_bios = 0;
};

inline CooccurrenceGraph build_cooccurrence(const std::vector<WordSet>& word_sets) {
    if (word_sets.empty()) throw DomainError("co-occurrence: need at least one word set");
    CooccurrenceGraph g;
    g.total_bios = word_sets.size();

    std::set<std::string> vocab;
    for (const auto& ws : word_sets) vocab.insert(ws.begin(), ws.end());
    g.nodes.assign(vocab.begin(), vocab.end());
    std::unordered_map<std::string_view, std::uint32_t> index;
    index.reserve(g.nodes.size());
    for (std::uint32_t i = 0; i < g.nodes.size(); ++i) index.emplace(g.nodes[i], i);

    std::unordered_map<std::uint64_t, std::size_t> pairs;
    std::vector<std::uint32_t> ids;
    for (const auto& ws : word_sets) {
        ids.clear();
        for (const auto& w : ws) ids.push_back(index.at(w));
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (std::size_t a = 0; a < ids.size(); ++a)
            for (std::size_t b = a + 1; b < ids.size(); ++b)
                ++pairs[(static_cast<std::uint64_t>(ids[a]) << 32) | ids[b]];
    }
    g.edges.reserve(pairs.size());
    for (const auto& [key, count] : pairs) {
        g.edges.push_back({static_cast<std::size_t>(key >> 32), static_cast<std::size_t>(key & 0xffffffffu), count,
                           static_cast<double>(count) / static_cast<double>(g.total_bios)});
    }
    std::sort(g.edges.begin(), g.edges.end(),
              [](const auto& a, const auto& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    return g;
}

inline CooccurrenceGraph build_cooccurrence(const std::map<UserId, WordSet>& word_sets) {
    std::vector<WordSet> sets;
    sets.reserve(word_sets.size());
    for (const auto& [id, ws] : word_sets) sets.push_back(ws);
    return build_cooccurrence(sets);
}

/// Number of edges the top-fraction rule keeps before ties: ceil(f * E), at least 1.
inline std::size_t top_edge_quota(double keep_fraction, std::size_t edge_count) {
    if (edge_count == 0) return 0;
    // Guard against products such as 0.001 * 10000 landing a few ulps above an integer.
    const double raw = keep_fraction * static_cast<double>(edge_count);
    auto quota = static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
    return std::clamp<std::size_t>(quota, 1, edge_count);
}

/// Keeps the top `keep_fraction` of edges by weight, all ties at the cutoff
/// included, and drops nodes left without edges.
inline CooccurrenceGraph filter_top_edges(const CooccurrenceGraph& g, double keep_fraction = 0.001) {
    if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) throw DomainError("keep_fraction must be in (0, 1]");
    CooccurrenceGraph out;
    out.total_bios = g.total_bios;
    if (g.edges.empty()) return out;

    std::vector<std::size_t> counts;
    counts.reserve(g.edges.size());
    for (const auto& e : g.edges) counts.push_back(e.bios);
    const std::size_t quota = top_edge_quota(keep_fraction, counts.size());
    std::nth_element(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(quota - 1), counts.end(),
                     std::greater<>());
    const std::size_t cutoff = counts[quota - 1];

    std::vector<bool> used(g.nodes.size(), false);
    for (const auto& e : g.edges) {
        if (e.bios >= cutoff) used[e.u] = used[e.v] = true;
    }
    std::vector<std::size_t> remap(g.nodes.size(), 0);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        if (!used[i]) continue;
        remap[i] = out.nodes.size();
        out.nodes.push_back(g.nodes[i]);
    }
    for (const auto& e : g.edges) {
        if (e.bios >= cutoff) out.edges.push_back({remap[e.u], remap[e.v], e.bios, e.weight});
    }
    return out;
}

inline PageRankResult pagerank(const CooccurrenceGraph& g, const PageRankOptions& opts = {}) {
    std::vector<WeightedEdge> edges;
    edges.reserve(g.edges.size());
    for (const auto& e : g.edges) edges.push_back({e.u, e.v, e.weight});
    return pagerank(g.nodes.size(), edges, opts);
}

/// (male - female) / (male + female).
inline double word_tendency(std::size_t male_users, std::size_t female_users) {
    const std::size_t total = male_users + female_users;
    if (total == 0) throw DomainError("tendency: word is not used by any classified user");
    return (static_cast<double>(male_users) - static_cast<double>(female_users)) / static_cast<double>(total);
}

struct WordUsage {
    std::size_t male_users = 0;
    std::size_t female_users = 0;
};

/// Per-word user counts by gender over classified users.
struct GenderedWordIndex {
    std::unordered_map<std::string, WordUsage> usage;
    std::size_t classified_users = 0;

    double tendency(const std::string& word) const {
        auto it = usage.find(word);
        if (it == usage.end()) throw DomainError("tendency: word '" + word + "' is not used by any classified user");
        return word_tendency(it->second.male_users, it->second.female_users);
    }
};

inline GenderedWordIndex build_word_index(const std::map<UserId, WordSet>& word_sets,
                                          const std::map<UserId, Gender>& genders) {
    GenderedWordIndex idx;
    for (const auto& [id, words] : word_sets) {
        const Gender g = genders.at(id);
        if (g == Gender::undetermined) continue;
        ++idx.classified_users;
        for (const auto& w : words) {
            auto& u = idx.usage[w];
            (g == Gender::male ? u.male_users : u.female_users) += 1;
        }
    }
    return idx;
}

struct BioKeyword {
    std::string word;
    double pagerank_score = 0.0;
    double tendency = 0.0;
    double user_share = 0.0;  // of classified users
    std::size_t male_users = 0;
    std::size_t female_users = 0;
};

struct BioAnalysisOptions {
    double keep_fraction = 0.001;
    PageRankOptions pagerank;
    std::size_t top_k = 50;
};

struct BioAnalysis {
    std::vector<BioKeyword> keywords;
    std::size_t graph_nodes = 0;
    std::size_t graph_edges = 0;
    std::size_t filtered_nodes = 0;
    std::size_t filtered_edges = 0;
    int pagerank_iterations = 0;
    bool pagerank_converged = true;
};

/// Ranks biography words by PageRank over the filtered co-occurrence graph;
/// ties broken lexicographically.
inline BioAnalysis top_bio_keywords(const std::map<UserId, WordSet>& word_sets, const std::map<UserId, Gender>& genders,
                                    const BioAnalysisOptions& opts = {}) {
    BioAnalysis out;
    if (word_sets.empty()) return out;
    const auto graph = build_cooccurrence(word_sets);
    const auto filtered = filter_top_edges(graph, opts.keep_fraction);
    out.graph_nodes = graph.nodes.size();
    out.graph_edges = graph.edges.size();
    out.filtered_nodes = filtered.nodes.size();
    out.filtered_edges = filtered.edges.size();
    if (filtered.nodes.empty()) return out;

    const auto pr = pagerank(filtered, opts.pagerank);
    out.pagerank_iterations = pr.iterations;
    out.pagerank_converged = pr.converged;
    const auto index = build_word_index(word_sets, genders);

    std::vector<std::size_t> order(filtered.nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (pr.scores[a] != pr.scores[b]) return pr.scores[a] > pr.scores[b];
        return filtered.nodes[a] < filtered.nodes[b];
    });
    order.resize(std::min(order.size(), opts.top_k));
    for (const std::size_t i : order) {
        const auto& word = filtered.nodes[i];
        const auto& usage = index.usage.at(word);
        out.keywords.push_back({word, pr.scores[i], word_tendency(usage.male_users, usage.female_users),
                                static_cast<double>(usage.male_users + usage.female_users) /
                                    static_cast<double>(index.classified_users),
                                usage.male_users, usage.female_users});
    }
    return out;
}

}  // namespace geosocial
