/**
 * @file
 * @brief Hexagonal binning of geotagged tweets.
 *
 * Points are projected equirectangularly about an origin, then assigned to a
 * pointy-top hexagonal lattice in axial coordinates (q, r). The cell size is
 * the centre-to-vertex distance in metres.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <tuple>
#include <vector>

#include "geosocial/corpus.hpp"
#include "geosocial/error.hpp"

namespace geosocial {

inline constexpr double kEarthRadiusMeters = 6371000.0;

struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;
};

struct HexGridSpec {
    LatLon origin;
    double cell_size = 500.0;
    double projection_latitude = 0.0;  // degrees

    static HexGridSpec centered_on(LatLon origin, double cell_size = 500.0) { return {origin, cell_size, origin.lat}; }
};

inline PlanarPoint project(LatLon p, const HexGridSpec& spec) {
    constexpr double deg = std::numbers::pi / 180.0;
    return {kEarthRadiusMeters * (p.lon - spec.origin.lon) * deg * std::cos(spec.projection_latitude * deg),
            kEarthRadiusMeters * (p.lat - spec.origin.lat) * deg};
}

inline LatLon unproject(PlanarPoint p, const HexGridSpec& spec) {
    constexpr double deg = std::numbers::pi / 180.0;
    return {spec.origin.lat + p.y / (kEarthRadiusMeters * deg),
            spec.origin.lon + p.x / (kEarthRadiusMeters * deg * std::cos(spec.projection_latitude * deg))};
}

struct HexCoord {
    std::int64_t q = 0;
    std::int64_t r = 0;

    friend auto operator<=>(const HexCoord&, const HexCoord&) = default;
};

/// Cube rounding: round all three cube coordinates and fix the one with the
/// largest rounding residual so that q + r + s = 0 holds.
inline HexCoord hex_round(double qf, double rf) {
    const double sf = -qf - rf;
    double q = std::round(qf), r = std::round(rf), s = std::round(sf);
    const double dq = std::abs(q - qf), dr = std::abs(r - rf), ds = std::abs(s - sf);
    if (dq > dr && dq > ds) q = -r - s;
    else if (dr > ds) r = -q - s;
    return {static_cast<std::int64_t>(q), static_cast<std::int64_t>(r)};
}

inline HexCoord hex_index(PlanarPoint p, double cell_size) {
    const double qf = (std::sqrt(3.0) / 3.0 * p.x - p.y / 3.0) / cell_size;
    const double rf = (2.0 / 3.0 * p.y) / cell_size;
    return hex_round(qf, rf);
}

inline PlanarPoint hex_center(HexCoord h, double cell_size) {
    return {cell_size * std::sqrt(3.0) * (static_cast<double>(h.q) + static_cast<double>(h.r) / 2.0),
            cell_size * 1.5 * static_cast<double>(h.r)};
}

struct HexBin {
    HexCoord cell;
    std::uint64_t count = 0;
    LatLon center;
};

/// Per-cell counts of every coordinate-bearing tweet, before any threshold.
inline std::map<HexCoord, std::uint64_t> hexbin_counts(const Corpus& corpus, const HexGridSpec& spec) {
    if (!(spec.cell_size > 0.0)) throw DomainError("hexbin: cell size must be positive");
    std::map<HexCoord, std::uint64_t> counts;
    for (const auto& t : corpus.tweets)
        if (t.coordinates) ++counts[hex_index(project(*t.coordinates, spec), spec.cell_size)];
    return counts;
}

/// Cells holding at least `min_count` tweets, count descending then (q, r).
inline std::vector<HexBin> hexbin_aggregate(const Corpus& corpus, const HexGridSpec& spec, std::uint64_t min_count = 20) {
    std::vector<HexBin> bins;
    for (const auto& [cell, n] : hexbin_counts(corpus, spec)) {
        if (n < min_count) continue;
        bins.push_back({cell, n, unproject(hex_center(cell, spec.cell_size), spec)});
    }
    std::stable_sort(bins.begin(), bins.end(), [](const HexBin& a, const HexBin& b) { return a.count > b.count; });
    return bins;
}

struct GeoSummary {
    std::size_t geo_tweet_count = 0;
    double geo_share = 0.0;  // of all tweets, retweets included
    std::optional<double> median_lat;
    std::optional<double> median_lon;
};

namespace detail {

// Lower median: element at nearest rank ceil(n / 2).
inline double lower_median(std::vector<double> xs) {
    const std::size_t k = (xs.size() - 1) / 2;
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(k), xs.end());
    return xs[k];
}

}  // namespace detail

inline GeoSummary geo_summary(const Corpus& corpus) {
    GeoSummary s;
    std::vector<double> lats, lons;
    for (const auto& t : corpus.tweets) {
        if (!t.coordinates) continue;
        lats.push_back(t.coordinates->lat);
        lons.push_back(t.coordinates->lon);
    }
    s.geo_tweet_count = lats.size();
    if (!corpus.tweets.empty()) s.geo_share = static_cast<double>(lats.size()) / static_cast<double>(corpus.tweets.size());
    if (!lats.empty()) {
        s.median_lat = detail::lower_median(std::move(lats));
        s.median_lon = detail::lower_median(std::move(lons));
    }
    return s;
}

}  // namespace geosocial
