#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_support.hpp"

using namespace geosocial;
using namespace testing_support;

namespace {

const LatLon kSantiago{-33.4489, -70.6693};

HexCoord nearest_center(PlanarPoint p, double size) {
    const HexCoord guess = hex_index(p, size);
    HexCoord best = guess;
    double best_d = INFINITY;
    for (std::int64_t dq = -2; dq <= 2; ++dq)
        for (std::int64_t dr = -2; dr <= 2; ++dr) {
            const HexCoord h{guess.q + dq, guess.r + dr};
            const auto c = hex_center(h, size);
            const double d = std::hypot(p.x - c.x, p.y - c.y);
            if (d < best_d) {
                best_d = d;
                best = h;
            }
        }
    return best;
}

// Same search, independent of hex_index: start from a rounded axial guess.
HexCoord nearest_center_exhaustive(PlanarPoint p, double size) {
    const std::int64_t r0 = std::llround(p.y / (1.5 * size));
    const std::int64_t q0 = std::llround(p.x / (std::sqrt(3.0) * size) - double(r0) / 2.0);
    HexCoord best{q0, r0};
    double best_d = INFINITY;
    for (std::int64_t dq = -2; dq <= 2; ++dq)
        for (std::int64_t dr = -2; dr <= 2; ++dr) {
            const HexCoord h{q0 + dq, r0 + dr};
            const double cx = size * std::sqrt(3.0) * (double(h.q) + double(h.r) / 2.0);
            const double cy = size * 1.5 * double(h.r);
            const double d = std::hypot(p.x - cx, p.y - cy);
            if (d < best_d - 1e-9) {
                best_d = d;
                best = h;
            }
        }
    return best;
}

double center_distance(PlanarPoint p, HexCoord h, double size) {
    const auto c = hex_center(h, size);
    return std::hypot(p.x - c.x, p.y - c.y);
}

Corpus points_corpus(const std::vector<LatLon>& pts, std::size_t plain = 0) {
    Corpus c;
    TweetId id = 1;
    for (const auto& p : pts) add_tweet(c, id++, 1, 0, "x").coordinates = p;
    for (std::size_t i = 0; i < plain; ++i) add_tweet(c, id++, 1, 0, "y");
    return c;
}

}  // namespace

TEST(Project, OriginAndNorthwardOffset) {
    const auto spec = HexGridSpec::centered_on(kSantiago);
    const auto o = project(kSantiago, spec);
    EXPECT_EQ(o.x, 0.0);
    EXPECT_EQ(o.y, 0.0);
    const auto n = project({kSantiago.lat + 0.01, kSantiago.lon}, spec);
    EXPECT_NEAR(n.y, 1111.95, 0.01);
    EXPECT_NEAR(n.y, kEarthRadiusMeters * 0.01 * std::numbers::pi / 180.0, 1e-9);
    EXPECT_EQ(n.x, 0.0);
}

TEST(Project, RoundTrip) {
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> lat(-56.0, -17.0), lon(-76.0, -66.0);
    const auto spec = HexGridSpec::centered_on(kSantiago);
    for (int i = 0; i < 1000; ++i) {
        const PlanarPoint p{lon(rng) * 1000.0, lat(rng) * 1000.0};
        const auto back = project(unproject(p, spec), spec);
        EXPECT_NEAR(back.x, p.x, 1e-9);
        EXPECT_NEAR(back.y, p.y, 1e-9);
    }
}

TEST(HexIndex, CentersAreFixedPoints) {
    EXPECT_EQ(hex_index({0, 0}, 500), (HexCoord{0, 0}));
    for (std::int64_t q = -20; q <= 20; ++q)
        for (std::int64_t r = -20; r <= 20; ++r) EXPECT_EQ(hex_index(hex_center({q, r}, 500), 500), (HexCoord{q, r}));
}

TEST(HexIndex, AgreesWithBruteForceNearestCenter) {
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> u(-50000.0, 50000.0);
    std::size_t agree = 0;
    for (int i = 0; i < 10000; ++i) {
        const PlanarPoint p{u(rng), u(rng)};
        const auto got = hex_index(p, 500);
        const auto oracle = nearest_center_exhaustive(p, 500);
        // Points equidistant from two centers may go either way.
        if (got == oracle || std::abs(center_distance(p, got, 500) - center_distance(p, oracle, 500)) < 1e-9) ++agree;
        EXPECT_EQ(got, nearest_center(p, 500));
    }
    EXPECT_EQ(agree, 10000u);
}

TEST(HexIndex, LatticeTranslationShiftsIndices) {
    std::mt19937_64 rng(89);
    std::uniform_real_distribution<double> u(-5000.0, 5000.0);
    for (int i = 0; i < 2000; ++i) {
        const PlanarPoint p{u(rng), u(rng)};
        const HexCoord shift{std::int64_t(rng() % 7) - 3, std::int64_t(rng() % 7) - 3};
        const auto t = hex_center(shift, 250);
        const auto a = hex_index(p, 250);
        const auto b = hex_index({p.x + t.x, p.y + t.y}, 250);
        if (center_distance(p, a, 250) > 0.49 * 250 * std::sqrt(3.0)) continue;  // near an edge: rounding may differ
        EXPECT_EQ(b, (HexCoord{a.q + shift.q, a.r + shift.r}));
    }
}

TEST(Hexbin, ThresholdBoundary) {
    const auto spec = HexGridSpec::centered_on(kSantiago);
    EXPECT_TRUE(hexbin_aggregate(points_corpus(std::vector<LatLon>(19, kSantiago)), spec, 20).empty());
    const auto bins = hexbin_aggregate(points_corpus(std::vector<LatLon>(20, kSantiago)), spec, 20);
    ASSERT_EQ(bins.size(), 1u);
    EXPECT_EQ(bins[0].count, 20u);
    EXPECT_EQ(bins[0].cell, (HexCoord{0, 0}));
    EXPECT_NEAR(bins[0].center.lat, kSantiago.lat, 1e-12);
}

TEST(Hexbin, TwoPlantedClustersAboveScatteredNoise) {
    std::mt19937_64 rng(97);
    std::normal_distribution<double> jitter(0.0, 0.0004);
    std::uniform_real_distribution<double> scatter(-0.5, 0.5);
    const LatLon a = kSantiago, b{-33.4170, -70.6030};
    std::vector<LatLon> pts;
    for (int i = 0; i < 30; ++i) pts.push_back({a.lat + jitter(rng), a.lon + jitter(rng)});
    for (int i = 0; i < 25; ++i) pts.push_back({b.lat + jitter(rng), b.lon + jitter(rng)});
    for (int i = 0; i < 40; ++i) pts.push_back({a.lat + scatter(rng), a.lon + scatter(rng)});
    const auto spec = HexGridSpec::centered_on(a, 500);
    const auto corpus = points_corpus(pts, 10);

    // Per-point oracle counts for the cells of the two clusters.
    std::map<HexCoord, std::uint64_t> oracle;
    for (const auto& p : pts) ++oracle[nearest_center_exhaustive(project(p, spec), 500)];
    const auto bins = hexbin_aggregate(corpus, spec, 20);
    ASSERT_EQ(bins.size(), 2u);
    EXPECT_EQ(bins[0].count, oracle.at(bins[0].cell));
    EXPECT_EQ(bins[1].count, oracle.at(bins[1].cell));
    EXPECT_GE(bins[0].count, bins[1].count);
    for (const auto& bin : bins) EXPECT_GE(bin.count, 20u);

    std::uint64_t total = 0;
    for (const auto& [cell, n] : hexbin_counts(corpus, spec)) total += n;
    EXPECT_EQ(total, pts.size());
}

TEST(Hexbin, OrderIsCountThenCell) {
    const auto spec = HexGridSpec::centered_on({0.0, 0.0}, 1000);
    std::vector<LatLon> pts;
    auto at = [&](HexCoord h, int n) {
        const auto ll = unproject(hex_center(h, 1000), spec);
        for (int i = 0; i < n; ++i) pts.push_back(ll);
    };
    at({3, 0}, 2);
    at({-1, 2}, 5);
    at({0, 0}, 2);
    at({1, -1}, 2);
    const auto bins = hexbin_aggregate(points_corpus(pts), spec, 1);
    ASSERT_EQ(bins.size(), 4u);
    EXPECT_EQ(bins[0].cell, (HexCoord{-1, 2}));
    EXPECT_EQ(bins[1].cell, (HexCoord{0, 0}));
    EXPECT_EQ(bins[2].cell, (HexCoord{1, -1}));
    EXPECT_EQ(bins[3].cell, (HexCoord{3, 0}));
    EXPECT_THROW(hexbin_counts(Corpus{}, HexGridSpec{{0, 0}, 0.0, 0.0}), DomainError);
}

TEST(GeoSummary, MediansAndShare) {
    const auto s = geo_summary(points_corpus({{1, 10}, {3, 30}, {2, 20}}, 1));
    EXPECT_EQ(s.geo_tweet_count, 3u);
    EXPECT_DOUBLE_EQ(s.geo_share, 0.75);
    EXPECT_EQ(*s.median_lat, 2.0);
    EXPECT_EQ(*s.median_lon, 20.0);

    const auto even = geo_summary(points_corpus({{4, 1}, {1, 4}, {3, 2}, {2, 3}}));
    EXPECT_EQ(*even.median_lat, 2.0);
    EXPECT_EQ(*even.median_lon, 2.0);

    const auto single = geo_summary(points_corpus({{-33.45, -70.67}}));
    EXPECT_EQ(*single.median_lat, -33.45);
    EXPECT_EQ(*single.median_lon, -70.67);

    const auto none = geo_summary(points_corpus({}, 3));
    EXPECT_EQ(none.geo_tweet_count, 0u);
    EXPECT_FALSE(none.median_lat);
    EXPECT_FALSE(none.median_lon);
}
