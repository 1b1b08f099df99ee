#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "test_support.hpp"

using namespace geosocial;
using namespace testing_support;

namespace {

constexpr EpochSeconds kT0 = 1351425600;  // 2012-10-28T12:00:00Z, multiple of 300

double weight_of(const std::vector<RegionVector>& vs, UnitId region, const std::string& term) {
    for (const auto& v : vs) {
        if (v.region_id != region) continue;
        auto it = v.weights.find(term);
        return it == v.weights.end() ? 0.0 : it->second;
    }
    return -1.0;
}

// Corpus of `regions` regions with one author each, plus random shared and
// exclusive vocabulary.
struct RegionalFixture {
    Corpus corpus;
    RegionAssignment assignment;
    std::vector<UnitId> regions;
};

RegionalFixture regional_fixture(std::uint64_t seed, std::size_t nregions, std::size_t ntweets) {
    std::mt19937_64 rng(seed);
    RegionalFixture f;
    for (std::size_t r = 0; r < nregions; ++r) {
        f.regions.push_back(static_cast<UnitId>(100 + r));
        f.assignment[static_cast<UserId>(r + 1)] = static_cast<UnitId>(100 + r);
    }
    f.assignment[999] = 100;  // assigned author without tweets
    const std::vector<std::string> words = {"hola", "voto", "mesa", "#municipales", "@servel", "urna", "noche"};
    for (std::size_t i = 0; i < ntweets; ++i) {
        const UserId author = static_cast<UserId>(1 + rng() % (nregions + 2));  // two unassigned authors
        std::string text;
        for (int k = 0; k < 4; ++k) text += words[rng() % words.size()] + " ";
        if (author <= UserId(nregions) && rng() % 2) text += "#solo" + std::to_string(author);
        std::optional<TweetId> rt;
        if (i > 0 && rng() % 5 == 0) rt = static_cast<TweetId>(1 + rng() % i);
        add_tweet(f.corpus, static_cast<TweetId>(i + 1), author, kT0 + static_cast<EpochSeconds>(rng() % 7200), text, rt);
    }
    std::sort(f.corpus.tweets.begin(), f.corpus.tweets.end(),
              [](auto& a, auto& b) { return std::tie(a.timestamp, a.tweet_id) < std::tie(b.timestamp, b.tweet_id); });
    return f;
}

}  // namespace

TEST(VolumeSeries, FiveMinuteBins) {
    Corpus c;
    add_tweet(c, 1, 1, kT0, "a");
    add_tweet(c, 2, 1, kT0 + 100, "b");
    add_tweet(c, 3, 1, kT0 + 400, "c");
    const auto s = volume_series(c, {{1, 7}}, {7, 8});
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].counts, (std::vector<std::uint64_t>{2, 1}));
    EXPECT_EQ(s[0].start, kT0);
    EXPECT_EQ(s[1].region_id, 8);
    EXPECT_EQ(s[1].counts, (std::vector<std::uint64_t>{0, 0}));
}

TEST(VolumeSeries, MatchesGroupByOracle) {
    const auto f = regional_fixture(43, 6, 3000);
    const auto series = volume_series(f.corpus, f.assignment, f.regions, 300);
    std::map<std::pair<UnitId, EpochSeconds>, std::uint64_t> groups;
    for (const auto& t : f.corpus.tweets) {
        auto a = f.assignment.find(t.author_id);
        if (a != f.assignment.end()) ++groups[{a->second, t.timestamp / 300 * 300}];
    }
    std::uint64_t total = 0;
    for (const auto& s : series) {
        EXPECT_EQ(s.counts.size(), series.front().counts.size());
        EXPECT_EQ(s.start, series.front().start);
        for (std::size_t i = 0; i < s.counts.size(); ++i) {
            auto it = groups.find({s.region_id, s.start + EpochSeconds(i) * 300});
            EXPECT_EQ(s.counts[i], it == groups.end() ? 0u : it->second);
            total += s.counts[i];
        }
    }
    std::uint64_t expected = 0;
    for (const auto& [k, n] : groups) expected += n;
    EXPECT_EQ(total, expected);
}

TEST(VolumeSeries, NegativeTimesFloorCorrectly) {
    Corpus c;
    add_tweet(c, 1, 1, -1, "a");
    add_tweet(c, 2, 1, 0, "b");
    const auto s = volume_series(c, {{1, 7}}, {7}, 300);
    EXPECT_EQ(s[0].start, -300);
    EXPECT_EQ(s[0].counts, (std::vector<std::uint64_t>{1, 1}));
    EXPECT_THROW(volume_series(c, {{1, 7}}, {7}, 0), DomainError);
}

TEST(NormalizeSeries, Examples) {
    EXPECT_EQ(normalize_series({2, 1, 4}), (std::vector<double>{0.5, 0.25, 1.0}));
    EXPECT_EQ(normalize_series({0, 0}), (std::vector<double>{0.0, 0.0}));
}

TEST(NormalizeSeries, MaximumMapsToExactlyOne) {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::uint64_t> c(1 + rng() % 50);
        for (auto& v : c) v = rng() % 1000;
        const auto n = normalize_series(c);
        const auto peak = *std::max_element(c.begin(), c.end());
        for (std::size_t i = 0; i < c.size(); ++i) {
            EXPECT_GE(n[i], 0.0);
            EXPECT_LE(n[i], 1.0);
            if (peak > 0 && c[i] == peak) {
                EXPECT_EQ(n[i], 1.0);
            }
            if (peak == 0) {
                EXPECT_EQ(n[i], 0.0);
            }
        }
    }
}

TEST(AggregateProfiles, Examples) {
    const auto p = aggregate_profiles({{1.0, 0.0}, {0.0, 1.0}});
    ASSERT_EQ(p.size(), 2u);
    for (const auto& b : p) {
        EXPECT_DOUBLE_EQ(b.mean, 0.5);
        EXPECT_DOUBLE_EQ(b.std, 0.5);
    }
    for (const auto& b : aggregate_profiles({{0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}})) EXPECT_EQ(b.std, 0.0);
    EXPECT_THROW(aggregate_profiles({{1.0}, {1.0, 2.0}}), DomainError);
    EXPECT_THROW(aggregate_profiles({}), DomainError);
}

TEST(AggregateProfiles, MatchesTwoPassOracle) {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> series(15, std::vector<double>(200));
    for (auto& s : series)
        for (auto& v : s) v = u(rng);
    const auto p = aggregate_profiles(series);
    for (std::size_t i = 0; i < 200; ++i) {
        long double mean = 0;
        for (const auto& s : series) mean += s[i];
        mean /= 15;
        long double var = 0;
        for (const auto& s : series) var += (s[i] - mean) * (s[i] - mean);
        var /= 15;
        EXPECT_NEAR(p[i].mean, double(mean), 1e-12);
        EXPECT_NEAR(p[i].std, double(std::sqrt(var)), 1e-12);
    }
}

TEST(PopularTerms, CountsOncePerTweet) {
    Corpus c;
    add_tweet(c, 1, 1, kT0, "hola @a @a");
    const auto m = popular_terms(c, TokenKind::mention, 10);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(m[0].term, "@a");
    EXPECT_EQ(m[0].tweet_count, 1u);
    EXPECT_THROW(popular_terms(c, TokenKind::word, 10), DomainError);
}

TEST(PopularTerms, MatchesBruteForceIncludingRetweets) {
    const auto f = regional_fixture(59, 4, 800);
    for (const auto kind : {TokenKind::hashtag, TokenKind::mention}) {
        std::map<std::string, std::size_t> counts;
        for (const auto& t : f.corpus.tweets) {
            std::set<std::string> seen;
            for (const auto& tok : tokenize(t.text))
                if (tok.kind == kind) seen.insert(tok.surface);
            for (const auto& s : seen) ++counts[s];
        }
        std::vector<std::pair<std::size_t, std::string>> ranked;
        for (const auto& [term, n] : counts) ranked.emplace_back(n, term);
        std::sort(ranked.begin(), ranked.end(), [](auto& a, auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
        const auto got = popular_terms(f.corpus, kind, 5);
        ASSERT_EQ(got.size(), std::min<std::size_t>(5, ranked.size()));
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_EQ(got[i].term, ranked[i].second);
            EXPECT_EQ(got[i].tweet_count, ranked[i].first);
            EXPECT_LE(got[i].tweet_count, f.corpus.tweets.size());
        }
    }
}

TEST(Tfidf, FormulaExamples) {
    // 15 regions, one author each. "todos" in all regions; "solo" only in
    // region 100 (10 tweets); "tres" in regions 100..102 (2 tweets in 100).
    Corpus c;
    RegionAssignment a;
    TweetId id = 1;
    for (UserId r = 0; r < 15; ++r) {
        a[r + 1] = 100 + r;
        add_tweet(c, id++, r + 1, kT0, "todos");
    }
    for (int i = 0; i < 10; ++i) add_tweet(c, id++, 1, kT0, "solo");
    add_tweet(c, id++, 1, kT0, "tres");
    add_tweet(c, id++, 1, kT0, "tres");
    add_tweet(c, id++, 2, kT0, "tres");
    add_tweet(c, id++, 3, kT0, "tres");
    const auto vs = tfidf_vectors(c, a);
    ASSERT_EQ(vs.size(), 15u);
    EXPECT_NEAR(weight_of(vs, 100, "solo"), 10 * std::log(15.0), 1e-12);
    EXPECT_NEAR(weight_of(vs, 100, "solo"), 27.0805, 1e-4);
    EXPECT_NEAR(weight_of(vs, 100, "tres"), 2 * std::log(5.0), 1e-12);
    for (const auto& v : vs) EXPECT_EQ(v.weights.count("todos"), 0u);
    const auto top = top_terms_per_region(vs, 25);
    EXPECT_EQ(top[0].terms[0].term, "solo");
    EXPECT_TRUE(top[5].terms.empty());
}

TEST(Tfidf, RetweetsAreExcluded) {
    Corpus c;
    add_tweet(c, 1, 1, kT0, "uno");
    add_tweet(c, 2, 2, kT0, "dos");
    add_tweet(c, 3, 2, kT0, "RT @u1: uno", 1);
    const auto vs = tfidf_vectors(c, {{1, 10}, {2, 20}});
    EXPECT_NEAR(weight_of(vs, 10, "uno"), std::log(2.0), 1e-15);
    EXPECT_EQ(weight_of(vs, 20, "uno"), 0.0);
    EXPECT_EQ(weight_of(vs, 20, "@u1"), 0.0);
}

TEST(Tfidf, NeedsTwoNonEmptyRegions) {
    Corpus c;
    add_tweet(c, 1, 1, kT0, "uno");
    EXPECT_THROW(tfidf_vectors(c, {{1, 10}, {2, 20}}), DomainError);
}

TEST(Tfidf, ExhaustiveTwoRegionComputation) {
    const auto f = regional_fixture(61, 2, 300);
    const auto vs = tfidf_vectors(f.corpus, f.assignment);
    std::map<UnitId, std::map<std::string, std::size_t>> freq;
    for (const auto& t : f.corpus.tweets) {
        if (t.is_retweet() || !f.assignment.count(t.author_id)) continue;
        std::set<std::string> terms;
        for (const auto& tok : tokenize(t.text)) terms.insert(tok.surface);
        for (const auto& term : terms) ++freq[f.assignment.at(t.author_id)][term];
    }
    for (const auto& [region, fr] : freq) {
        const UnitId other = region == 100 ? 101 : 100;
        for (const auto& [term, n] : fr) {
            const bool shared = freq[other].count(term) > 0;
            const double expect = shared ? 0.0 : double(n) * std::log(2.0);
            EXPECT_NEAR(weight_of(vs, region, term), expect, 1e-12) << term;
        }
    }
}

TEST(Tfidf, WeightIncreasesWithFrequencyAndIsZeroOnlyForUbiquitousTerms) {
    const auto f = regional_fixture(67, 5, 2000);
    const auto vs = tfidf_vectors(f.corpus, f.assignment);
    for (const auto& v : vs)
        for (const auto& [term, w] : v.weights) EXPECT_GT(w, 0.0) << term;
    // Same document frequency (exclusive tags): more tweets, more weight.
    std::vector<std::pair<std::size_t, double>> solo;
    for (const auto& v : vs) {
        const std::string tag = "#solo" + std::to_string(v.region_id - 99);
        std::size_t n = 0;
        for (const auto& t : f.corpus.tweets)
            if (!t.is_retweet() && f.assignment.count(t.author_id) && f.assignment.at(t.author_id) == v.region_id &&
                std::find(t.hashtags.begin(), t.hashtags.end(), tag) != t.hashtags.end())
                ++n;
        solo.emplace_back(n, v.weights.at(tag));
    }
    std::sort(solo.begin(), solo.end());
    for (std::size_t i = 1; i < solo.size(); ++i)
        if (solo[i].first > solo[i - 1].first) {
            EXPECT_GT(solo[i].second, solo[i - 1].second);
        }
}

TEST(Tfidf, RegionRelabelingPermutesVectors) {
    auto f = regional_fixture(71, 4, 600);
    const auto before = tfidf_vectors(f.corpus, f.assignment);
    RegionAssignment swapped;
    for (const auto& [u, r] : f.assignment) swapped[u] = r == 100 ? 103 : r == 103 ? 100 : r;
    const auto after = tfidf_vectors(f.corpus, swapped);
    for (const auto& v : before) {
        const UnitId mapped = v.region_id == 100 ? 103 : v.region_id == 103 ? 100 : v.region_id;
        for (const auto& [term, w] : v.weights) EXPECT_EQ(weight_of(after, mapped, term), w);
    }
}

TEST(TopTerms, PlantedTermRanksFirstAndTiesAreLexicographic) {
    std::vector<RegionVector> vs = {{1, {{"zz", 9.0}, {"b", 3.0}, {"a", 3.0}, {"c", 1.0}}}, {2, {}}};
    const auto top = top_terms_per_region(vs, 3);
    ASSERT_EQ(top[0].terms.size(), 3u);
    EXPECT_EQ(top[0].terms[0].term, "zz");
    EXPECT_EQ(top[0].terms[1].term, "a");
    EXPECT_EQ(top[0].terms[2].term, "b");
    EXPECT_TRUE(top[1].terms.empty());
}
