#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "geosocial/corpus.hpp"
#include "geosocial/dates.hpp"
#include "geosocial/error.hpp"

namespace geosocial {

/// Consecutive daily counts starting at `start`, gaps zero-filled.
struct DailySeries {
    Date start{};
    std::vector<std::uint64_t> counts;

    Date date_at(std::size_t i) const { return start + std::chrono::days{static_cast<long>(i)}; }
};

struct Peak {
    Date date{};
    std::uint64_t volume = 0;
    double significance = 0.0;

    friend bool operator==(const Peak&, const Peak&) = default;
};

/// Daily account registrations between the earliest and latest creation date.
inline DailySeries registration_series(const Corpus& corpus) {
    if (corpus.users.empty()) throw DomainError("registration series: corpus has no users");
    Date lo = corpus.users.begin()->second.created_at, hi = lo;
    for (const auto& [id, u] : corpus.users) {
        lo = std::min(lo, u.created_at);
        hi = std::max(hi, u.created_at);
    }
    DailySeries s;
    s.start = lo;
    s.counts.assign(static_cast<std::size_t>((hi - lo).count()) + 1, 0);
    for (const auto& [id, u] : corpus.users) ++s.counts[static_cast<std::size_t>((u.created_at - lo).count())];
    return s;
}

/**
 * Windowed peak detector. Day i is a peak when its count is strictly greater
 * than every other count in [i - window, i + window] (clipped at the series
 * ends) and it exceeds the mean of those neighbours. Significance is that
 * excess. Days with no neighbours at all (a one-day series) are never peaks.
 */
inline std::vector<Peak> detect_peaks(const DailySeries& series, std::size_t window = 7) {
    if (series.counts.empty()) throw DomainError("detect_peaks: empty series");
    if (window == 0) throw DomainError("detect_peaks: window must be positive");
    const auto& c = series.counts;
    const std::size_t n = c.size();
    std::vector<Peak> peaks;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= window ? i - window : 0;
        const std::size_t hi = std::min(n - 1, i + window);
        if (hi == lo) continue;
        bool strict_max = true;
        double sum = 0.0;
        for (std::size_t j = lo; j <= hi && strict_max; ++j) {
            if (j == i) continue;
            if (c[j] >= c[i]) strict_max = false;
            sum += static_cast<double>(c[j]);
        }
        if (!strict_max) continue;
        const double significance = static_cast<double>(c[i]) - sum / static_cast<double>(hi - lo);
        if (significance > 0.0) peaks.push_back({series.date_at(i), c[i], significance});
    }
    return peaks;
}

/// Peaks in the top volume decile: the ceil(N/10) largest volumes plus every
/// peak tied with the smallest of them.
inline std::vector<Peak> top_decile_peaks(const std::vector<Peak>& peaks) {
    if (peaks.empty()) return {};
    std::vector<std::uint64_t> volumes;
    volumes.reserve(peaks.size());
    for (const auto& p : peaks) volumes.push_back(p.volume);
    std::sort(volumes.begin(), volumes.end(), std::greater<>());
    const std::size_t quota = (peaks.size() + 9) / 10;
    const std::uint64_t threshold = volumes[quota - 1];
    std::vector<Peak> out;
    for (const auto& p : peaks)
        if (p.volume >= threshold) out.push_back(p);
    return out;
}

struct DecileRow {
    int percent = 0;
    Date date{};
    std::int64_t days_since_previous = 0;  // 0 on the first row
};

/// Nearest-rank registration date for p = 0, 10, ..., 100.
inline std::vector<DecileRow> registration_deciles(const Corpus& corpus) {
    if (corpus.users.empty()) throw DomainError("registration deciles: corpus has no users");
    std::vector<Date> dates;
    dates.reserve(corpus.users.size());
    for (const auto& [id, u] : corpus.users) dates.push_back(u.created_at);
    std::sort(dates.begin(), dates.end());
    const std::size_t n = dates.size();

    std::vector<DecileRow> rows;
    for (int p = 0; p <= 100; p += 10) {
        // rank = ceil(p * n / 100) in integer arithmetic, 1-based, at least 1
        const std::size_t rank = std::max<std::size_t>(1, (static_cast<std::size_t>(p) * n + 99) / 100);
        DecileRow row{p, dates[rank - 1], 0};
        if (!rows.empty()) row.days_since_previous = (row.date - rows.back().date).count();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace geosocial
