/**
 * @file
 * @brief Toponym gazetteer built from an administrative hierarchy
 * (commune -> province -> region -> country) by template expansion, and
 * exact-key resolution of free-text profile locations.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "geosocial/corpus.hpp"
#include "geosocial/csv.hpp"
#include "geosocial/error.hpp"
#include "geosocial/text.hpp"

namespace geosocial {

using UnitId = std::int64_t;

/// Ordered from most to least specific.
enum class AdminLevel : std::uint8_t { commune = 0, province = 1, region = 2, country = 3 };

inline std::string_view to_string(AdminLevel level) noexcept {
    switch (level) {
        case AdminLevel::commune: return "commune";
        case AdminLevel::province: return "province";
        case AdminLevel::region: return "region";
        case AdminLevel::country: return "country";
    }
    return "commune";
}

inline std::optional<AdminLevel> parse_admin_level(std::string_view s) {
    if (s == "commune") return AdminLevel::commune;
    if (s == "province") return AdminLevel::province;
    if (s == "region") return AdminLevel::region;
    if (s == "country") return AdminLevel::country;
    return std::nullopt;
}

struct AdminUnit {
    UnitId unit_id = 0;
    std::string name;
    AdminLevel level = AdminLevel::commune;
    std::optional<UnitId> parent_id;
    std::optional<std::int64_t> population;
};

struct GazetteerEntry {
    UnitId unit_id = 0;
    AdminLevel level = AdminLevel::commune;

    friend bool operator==(const GazetteerEntry&, const GazetteerEntry&) = default;
};

struct Alias {
    std::string alias;
    UnitId unit_id = 0;
};

/// Canonical lookup key: normalized, trimmed, whitespace runs collapsed.
inline std::string toponym_key(std::string_view text) { return collapse_whitespace(normalize_text(text)); }

class Gazetteer {
public:
    const std::map<std::string, GazetteerEntry>& entries() const noexcept { return entries_; }
    const std::map<UnitId, AdminUnit>& hierarchy() const noexcept { return hierarchy_; }

    const AdminUnit& unit(UnitId id) const {
        auto it = hierarchy_.find(id);
        if (it == hierarchy_.end()) throw DomainError("unknown unit " + std::to_string(id));
        return it->second;
    }

    std::optional<GazetteerEntry> find(std::string_view key) const {
        auto it = entries_.find(std::string(key));
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    /// Region that contains `id`; nullopt for the country itself.
    std::optional<UnitId> region_of(UnitId id) const {
        const AdminUnit* u = &unit(id);
        while (u->level < AdminLevel::region) u = &unit(*u->parent_id);
        if (u->level == AdminLevel::region) return u->unit_id;
        return std::nullopt;
    }

    /// All region units, ascending by id.
    std::vector<UnitId> regions() const {
        std::vector<UnitId> out;
        for (const auto& [id, u] : hierarchy_)
            if (u.level == AdminLevel::region) out.push_back(id);
        return out;
    }

private:
    friend Gazetteer build_gazetteer(const std::vector<AdminUnit>&, const std::vector<Alias>&);

    std::map<std::string, GazetteerEntry> entries_;
    std::map<UnitId, AdminUnit> hierarchy_;
};

namespace detail {

inline void validate_hierarchy(const std::map<UnitId, AdminUnit>& units) {
    std::size_t countries = 0;
    for (const auto& [id, u] : units) {
        if (u.name.empty() || toponym_key(u.name).empty()) throw BuildError("unit " + std::to_string(id) + " has an empty name");
        if (u.level == AdminLevel::country) {
            ++countries;
            if (u.parent_id) throw BuildError("country " + std::to_string(id) + " has a parent");
            continue;
        }
        if (!u.parent_id) throw BuildError("orphan unit " + std::to_string(id));
        auto parent = units.find(*u.parent_id);
        if (parent == units.end())
            throw BuildError("unit " + std::to_string(id) + " references missing parent " + std::to_string(*u.parent_id));
        if (static_cast<int>(parent->second.level) != static_cast<int>(u.level) + 1)
            throw BuildError("unit " + std::to_string(id) + ": parent is not one administrative level up");
    }
    if (countries != 1) throw BuildError("hierarchy must contain exactly one country, found " + std::to_string(countries));
}

// Deterministic tie-break: more specific level, then larger population, then lower id.
inline bool preferred(const AdminUnit& a, const AdminUnit& b) {
    if (a.level != b.level) return a.level < b.level;
    const auto pa = a.population.value_or(-1);
    const auto pb = b.population.value_or(-1);
    if (pa != pb) return pa > pb;
    return a.unit_id < b.unit_id;
}

}  // namespace detail

/// Every (key, unit) pair generated by the twelve templates, before collision
/// resolution. Keys are canonical.
inline std::vector<std::pair<std::string, UnitId>> expand_templates(const std::map<UnitId, AdminUnit>& units) {
    std::vector<std::pair<std::string, UnitId>> out;
    auto name = [&](UnitId id) -> const std::string& { return units.at(id).name; };
    auto emit = [&](const std::string& text, UnitId id) { out.emplace_back(toponym_key(text), id); };

    for (const auto& [id, u] : units) {
        switch (u.level) {
            case AdminLevel::commune: {
                const UnitId province = *u.parent_id;
                const UnitId region = *units.at(province).parent_id;
                const std::string& country = name(*units.at(region).parent_id);
                emit(u.name, id);                            // 1
                emit(u.name + ", " + name(province), id);    // 3
                emit(u.name + ", " + country, id);           // 6
                emit(u.name + " de " + country, id);         // 9
                break;
            }
            case AdminLevel::province: {
                const UnitId region = *u.parent_id;
                const std::string& country = name(*units.at(region).parent_id);
                emit(u.name, id);                            // 2
                emit(u.name + ", " + name(region), id);      // 4
                emit(u.name + ", " + country, id);           // 7
                emit(u.name + " de " + country, id);         // 10
                break;
            }
            case AdminLevel::region: {
                const std::string& country = name(*u.parent_id);
                emit(u.name, id);                            // 5
                emit(u.name + ", " + country, id);           // 8
                emit(u.name + " de " + country, id);         // 11
                break;
            }
            case AdminLevel::country:
                emit(u.name, id);                            // 12
                break;
        }
    }
    return out;
}

/// Builds the lookup table. Template collisions keep the most specific unit
/// (see detail::preferred); manual aliases are applied last and override
/// template keys.
inline Gazetteer build_gazetteer(const std::vector<AdminUnit>& units, const std::vector<Alias>& aliases = {}) {
    Gazetteer g;
    for (const auto& u : units) {
        if (!g.hierarchy_.emplace(u.unit_id, u).second) throw BuildError("duplicate unit id " + std::to_string(u.unit_id));
    }
    detail::validate_hierarchy(g.hierarchy_);

    std::unordered_map<std::string, UnitId> best;
    for (auto& [key, id] : expand_templates(g.hierarchy_)) {
        auto [it, inserted] = best.try_emplace(std::move(key), id);
        if (!inserted && detail::preferred(g.hierarchy_.at(id), g.hierarchy_.at(it->second))) it->second = id;
    }
    for (auto& [key, id] : best) g.entries_.emplace(key, GazetteerEntry{id, g.hierarchy_.at(id).level});

    for (const auto& a : aliases) {
        auto unit = g.hierarchy_.find(a.unit_id);
        if (unit == g.hierarchy_.end()) throw BuildError("alias '" + a.alias + "' references unknown unit " + std::to_string(a.unit_id));
        const std::string key = toponym_key(a.alias);
        if (key.empty()) throw BuildError("empty alias");
        g.entries_[key] = GazetteerEntry{a.unit_id, unit->second.level};
    }
    return g;
}

enum class LocationOutcome : std::uint8_t { resolved, undetermined, empty_location };

inline std::string_view to_string(LocationOutcome o) noexcept {
    switch (o) {
        case LocationOutcome::resolved: return "resolved";
        case LocationOutcome::undetermined: return "undetermined";
        case LocationOutcome::empty_location: return "empty_location";
    }
    return "undetermined";
}

struct GeoResolution {
    UserId user_id = 0;
    LocationOutcome outcome = LocationOutcome::undetermined;
    std::optional<GazetteerEntry> entry;  // set iff resolved

    friend bool operator==(const GeoResolution&, const GeoResolution&) = default;
};

inline GeoResolution resolve_location(const Gazetteer& g, std::string_view location_text, UserId user_id = 0) {
    const std::string key = toponym_key(location_text);
    if (key.empty()) return {user_id, LocationOutcome::empty_location, std::nullopt};
    if (auto hit = g.find(key)) return {user_id, LocationOutcome::resolved, hit};
    return {user_id, LocationOutcome::undetermined, std::nullopt};
}

/// One resolution per user of the corpus, ascending by user id.
inline std::vector<GeoResolution> resolve_users(const Gazetteer& g, const Corpus& corpus) {
    std::vector<GeoResolution> out;
    out.reserve(corpus.users.size());
    for (const auto& [id, u] : corpus.users) out.push_back(resolve_location(g, u.location_text, id));
    return out;
}

/// user -> region, for users resolved below country level.
using RegionAssignment = std::map<UserId, UnitId>;

inline RegionAssignment region_assignment(const Gazetteer& g, const std::vector<GeoResolution>& resolutions) {
    RegionAssignment out;
    for (const auto& r : resolutions) {
        if (r.outcome != LocationOutcome::resolved) continue;
        if (auto region = g.region_of(r.entry->unit_id)) out.emplace(r.user_id, *region);
    }
    return out;
}

struct CoverageRow {
    std::string label;  // commune | province | region | country | undetermined
    std::size_t users = 0;
    double user_share = 0.0;
    std::size_t tweets = 0;
    double tweet_share = 0.0;
};

/// Users and tweets per resolution level. Empty locations are folded into the
/// undetermined row. Tweet counts include retweets.
inline std::vector<CoverageRow> coverage_table(const std::vector<GeoResolution>& resolutions, const Corpus& corpus) {
    std::vector<CoverageRow> rows = {{"commune"}, {"province"}, {"region"}, {"country"}, {"undetermined"}};
    std::unordered_map<UserId, std::size_t> tweets_by_user;
    for (const auto& t : corpus.tweets) ++tweets_by_user[t.author_id];

    std::size_t total_users = 0, total_tweets = 0;
    for (const auto& r : resolutions) {
        if (!corpus.find_user(r.user_id)) throw DomainError("resolution for unknown user " + std::to_string(r.user_id));
        const std::size_t row = r.outcome == LocationOutcome::resolved ? static_cast<std::size_t>(r.entry->level) : 4;
        auto it = tweets_by_user.find(r.user_id);
        const std::size_t n = it == tweets_by_user.end() ? 0 : it->second;
        ++rows[row].users;
        rows[row].tweets += n;
        ++total_users;
        total_tweets += n;
    }
    for (auto& row : rows) {
        row.user_share = total_users ? static_cast<double>(row.users) / total_users : 0.0;
        row.tweet_share = total_tweets ? static_cast<double>(row.tweets) / total_tweets : 0.0;
    }
    return rows;
}

/// Pearson correlation of (ln physical, ln virtual).
inline double pearson_log_correlation(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 2) throw DomainError("pearson: need at least two pairs");
    std::vector<double> xs, ys;
    xs.reserve(pairs.size());
    ys.reserve(pairs.size());
    for (const auto& [x, y] : pairs) {
        if (!(x > 0.0) || !(y > 0.0)) throw DomainError("pearson: populations must be strictly positive");
        xs.push_back(std::log(x));
        ys.push_back(std::log(y));
    }
    const double n = static_cast<double>(pairs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DomainError("pearson: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Files

inline std::vector<AdminUnit> load_hierarchy_csv(const std::string& path) {
    std::vector<AdminUnit> units;
    for (const auto& row : csv::read_table(path, {"unit_id", "level", "name", "parent_id", "population"})) {
        AdminUnit u;
        auto id = csv::parse_int<UnitId>(row[0]);
        auto level = parse_admin_level(row[1]);
        if (!id || !level) throw BuildError(path + ": bad unit row '" + row[0] + "'");
        u.unit_id = *id;
        u.level = *level;
        u.name = row[2];
        if (!row[3].empty()) {
            auto p = csv::parse_int<UnitId>(row[3]);
            if (!p) throw BuildError(path + ": bad parent_id for unit " + row[0]);
            u.parent_id = *p;
        }
        if (!row[4].empty()) {
            auto pop = csv::parse_int<std::int64_t>(row[4]);
            if (!pop || *pop < 0) throw BuildError(path + ": bad population for unit " + row[0]);
            u.population = *pop;
        }
        units.push_back(std::move(u));
    }
    return units;
}

inline std::vector<Alias> load_aliases_csv(const std::string& path) {
    std::vector<Alias> out;
    for (const auto& row : csv::read_table(path, {"alias", "unit_id"})) {
        auto id = csv::parse_int<UnitId>(row[1]);
        if (!id) throw BuildError(path + ": bad unit_id for alias '" + row[0] + "'");
        out.push_back({row[0], *id});
    }
    return out;
}

}  // namespace geosocial
