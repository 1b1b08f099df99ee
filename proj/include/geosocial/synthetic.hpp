/**
 * @file
 * @brief Deterministic synthetic corpus generator with planted structure.
 *
 * The generator writes a raw line-delimited archive and returns a manifest
 * describing what it planted: one exclusive hashtag per region, the mention
 * origin-destination matrix implied by the accounts each tweet mentions,
 * registration spike dates, and the number of geotagged tweets. The manifest
 * is computed from the generator's own bookkeeping, never by running the
 * analysis code over the output.
 *
 * Only std::mt19937_64 raw output is used (no std distributions), so the
 * bytes are identical across standard library implementations.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "geosocial/corpus.hpp"
#include "geosocial/dates.hpp"
#include "geosocial/demographics.hpp"
#include "geosocial/error.hpp"
#include "geosocial/gazetteer.hpp"
#include "geosocial/interactions.hpp"
#include "json.hpp"

namespace geosocial {

struct SynthParams {
    std::uint64_t seed = 1;
    std::size_t users = 1000;
    std::size_t tweets = 10000;
    std::size_t regions = 15;
    double geo_share = 0.07;
    double retweet_share = 0.15;
    double mention_share = 0.30;
    std::size_t malformed = 0;
    Date collection_date = Date{std::chrono::year{2012} / std::chrono::October / 28};
};

struct SynthManifest {
    std::vector<UnitId> regions;                 // ascending
    std::map<UnitId, std::string> planted_terms;  // region -> exclusive hashtag
    ODMatrix od;                                  // over `regions`
    std::vector<Date> spike_dates;
    std::size_t spike_users_per_date = 0;
    std::size_t geotagged_tweets = 0;
    std::size_t retweets = 0;
    std::size_t malformed_lines = 0;
    std::size_t located_users = 0;

    nlohmann::ordered_json to_json(const SynthParams& params) const;
};

namespace synth_detail {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
    bool chance(double p) { return uniform() < p; }
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    template <typename T>
    const T& pick(const std::vector<T>& v) { return v[index(v.size())]; }

private:
    std::mt19937_64 engine_;
};

/// Weighted sampling by prefix sums.
class Categorical {
public:
    explicit Categorical(const std::vector<double>& weights) {
        double acc = 0.0;
        for (const double w : weights) cumulative_.push_back(acc += w);
    }
    std::size_t draw(Rng& rng) const {
        const double x = rng.uniform() * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
        return std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
    }

private:
    std::vector<double> cumulative_;
};

inline std::string slug(std::string_view name) {
    std::string out;
    for (const char c : normalize_text(name))
        if (detail::is_word_byte(c)) out.push_back(c);
    return out;
}

inline const std::vector<std::string>& surnames() {
    static const std::vector<std::string> v = {"González", "Muñoz", "Rojas", "Díaz", "Pérez", "Soto", "Contreras",
                                               "Silva", "Martínez", "Sepúlveda", "Morales", "Rodríguez", "López",
                                               "Fuentes", "Hernández", "Torres", "Araya", "Flores", "Espinoza",
                                               "Valenzuela", "Castillo", "Tapia", "Reyes", "Gutiérrez", "Castro"};
    return v;
}

inline const std::vector<std::string>& common_words() {
    static const std::vector<std::string> v = {"hoy", "voto", "vote", "elecciones", "candidato", "alcalde",
                                               "concejal", "mesa", "votar", "resultados", "gente", "dia",
                                               "chile", "ganó", "mañana", "comuna", "todos", "ahora", "bien",
                                               "participación", "urna", "conteo", "noche", "ciudad"};
    return v;
}

inline const std::vector<std::string>& bio_neutral_words() {
    static const std::vector<std::string> v = {"vida", "Música", "familia", "cine", "viajar", "libros", "política",
                                               "derecho", "arte", "Fotografía", "deporte", "naturaleza", "Diseño",
                                               "periodista", "abogado", "amante", "twitter", "chileno", "sueños",
                                               "psicología", "historia", "teatro", "radio", "tecnología"};
    return v;
}

inline const std::vector<std::string>& bio_male_words() {
    static const std::vector<std::string> v = {"fútbol", "ingeniero", "hincha", "colocolino"};
    return v;
}

inline const std::vector<std::string>& bio_female_words() {
    static const std::vector<std::string> v = {"mamá", "profesora", "amiga", "feliz"};
    return v;
}

inline const std::vector<std::string>& nowhere_locations() {
    static const std::vector<std::string> v = {"mi casa", "en el mundo", "planeta tierra", "donde quiero",
                                               "aqui y alla", "la luna", "narnia", "tierra media", "springfield",
                                               "en tu corazon", "mi pieza", "por ahi"};
    return v;
}

inline std::string vary_case(Rng& rng, const std::string& s) {
    switch (rng.index(3)) {
        case 0: return s;
        case 1: {
            std::string out = s;
            for (char& c : out)
                if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
            return out;
        }
        default: return normalize_text(s);
    }
}

struct SynthUser {
    UserId id = 0;
    std::string screen_name;
    std::string name;
    std::string location;
    std::string bio;
    EpochSeconds created = 0;
    std::optional<std::size_t> region;  // slot in the manifest region list
};

struct SynthTweet {
    TweetId id = 0;
    std::size_t author = 0;
    EpochSeconds t = 0;
    std::string text;
    std::vector<std::size_t> mentioned;  // user indices
    std::optional<std::size_t> original; // tweet index for retweets
    std::optional<LatLon> coordinates;
};

}  // namespace synth_detail

inline nlohmann::ordered_json SynthManifest::to_json(const SynthParams& params) const {
    nlohmann::ordered_json j;
    j["seed"] = params.seed;
    j["users"] = params.users;
    j["tweets"] = params.tweets;
    j["collection_date"] = format_date(params.collection_date);
    j["regions"] = regions;
    nlohmann::ordered_json terms = nlohmann::ordered_json::object();
    for (const auto& [id, term] : planted_terms) terms[std::to_string(id)] = term;
    j["planted_terms"] = terms;
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < od.size(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < od.size(); ++k) row.push_back(od(i, k));
        cells.push_back(row);
    }
    j["od_matrix"] = cells;
    nlohmann::ordered_json spikes = nlohmann::ordered_json::array();
    for (const auto d : spike_dates) spikes.push_back(format_date(d));
    j["spike_dates"] = spikes;
    j["spike_users_per_date"] = spike_users_per_date;
    j["geotagged_tweets"] = geotagged_tweets;
    j["retweets"] = retweets;
    j["malformed_lines"] = malformed_lines;
    j["located_users"] = located_users;
    return j;
}

/// Writes a raw archive to `out` and returns the planted ground truth.
inline SynthManifest generate_synthetic(const SynthParams& params, const std::vector<AdminUnit>& hierarchy,
                                        const GenderLexicon& lexicon, std::ostream& out) {
    using namespace synth_detail;
    using std::chrono::days;
    if (params.users == 0) throw DomainError("synth: need at least one user");
    Rng rng(params.seed);

    // Hierarchy lookups. Validation happens in build_gazetteer.
    const Gazetteer gaz = build_gazetteer(hierarchy);
    std::string country;
    for (const auto& [id, u] : gaz.hierarchy())
        if (u.level == AdminLevel::country) country = u.name;

    SynthManifest manifest;
    auto all_regions = gaz.regions();
    if (params.regions < 1 || params.regions > all_regions.size())
        throw DomainError("synth: region count out of range for the hierarchy");
    all_regions.resize(params.regions);
    manifest.regions = all_regions;
    manifest.od = ODMatrix(manifest.regions);

    std::vector<std::vector<const AdminUnit*>> communes(params.regions);
    std::vector<double> region_weight(params.regions, 1.0);
    for (std::size_t s = 0; s < params.regions; ++s) {
        const auto& region = gaz.unit(manifest.regions[s]);
        manifest.planted_terms[region.unit_id] = "#" + slug(region.name);
        if (region.population) region_weight[s] = std::sqrt(static_cast<double>(*region.population));
    }
    for (const auto& [id, u] : gaz.hierarchy()) {
        if (u.level != AdminLevel::commune) continue;
        const auto region = *gaz.region_of(id);
        auto it = std::find(manifest.regions.begin(), manifest.regions.end(), region);
        if (it != manifest.regions.end()) communes[static_cast<std::size_t>(it - manifest.regions.begin())].push_back(&u);
    }
    const std::size_t hub = static_cast<std::size_t>(
        std::max_element(region_weight.begin(), region_weight.end()) - region_weight.begin());
    const Categorical region_dist(region_weight);

    std::vector<std::string> male_only, female_only, both;
    std::set_difference(lexicon.male_names.begin(), lexicon.male_names.end(), lexicon.female_names.begin(),
                        lexicon.female_names.end(), std::back_inserter(male_only));
    std::set_difference(lexicon.female_names.begin(), lexicon.female_names.end(), lexicon.male_names.begin(),
                        lexicon.male_names.end(), std::back_inserter(female_only));
    std::set_intersection(lexicon.male_names.begin(), lexicon.male_names.end(), lexicon.female_names.begin(),
                          lexicon.female_names.end(), std::back_inserter(both));
    if (male_only.empty() || female_only.empty()) throw DomainError("synth: lexicon needs exclusive male and female names");

    // ---- users
    const Date first_day = Date{std::chrono::year{2007} / std::chrono::March / 1};
    const Date last_day = params.collection_date - days{2};
    const auto span_days = static_cast<std::size_t>((last_day - first_day).count());
    manifest.spike_dates = {Date{std::chrono::year{2009} / std::chrono::December / 13},
                            Date{std::chrono::year{2010} / std::chrono::March / 1},
                            Date{std::chrono::year{2010} / std::chrono::October / 13},
                            Date{std::chrono::year{2011} / std::chrono::August / 4},
                            Date{std::chrono::year{2012} / std::chrono::June / 15}};
    manifest.spike_users_per_date = std::max<std::size_t>(1, params.users * 3 / 200);

    std::vector<SynthUser> users(params.users);
    std::vector<std::vector<std::size_t>> located(params.regions);
    for (std::size_t i = 0; i < users.size(); ++i) {
        auto& u = users[i];
        u.id = 100000 + static_cast<UserId>(i);
        u.screen_name = "user" + std::to_string(u.id);

        const double g = rng.uniform();
        std::string first;
        if (g < 0.45) first = rng.pick(male_only);
        else if (g < 0.90) first = rng.pick(female_only);
        else if (g < 0.95 && !both.empty()) first = rng.pick(both);
        else first = "Radio";
        if (first[0] >= 'a' && first[0] <= 'z') first[0] = static_cast<char>(first[0] - 'a' + 'A');
        u.name = vary_case(rng, first) + " " + rng.pick(surnames());

        const double loc = rng.uniform();
        if (loc < 0.55) {
            const std::size_t s = region_dist.draw(rng);
            const AdminUnit& c = *rng.pick(communes[s]);
            const std::string& province = gaz.unit(*c.parent_id).name;
            switch (rng.index(4)) {
                case 0: u.location = c.name; break;
                case 1: u.location = c.name + ", " + province; break;
                case 2: u.location = c.name + ", " + country; break;
                default: u.location = c.name + " de " + country; break;
            }
            u.location = vary_case(rng, u.location);
            if (rng.chance(0.1)) u.location = "  " + u.location + " ";
            u.region = s;
            located[s].push_back(i);
        } else if (loc < 0.65) {
            u.location = vary_case(rng, country);
        } else if (loc < 0.85) {
            u.location = rng.pick(nowhere_locations());
        }

        Date created;
        if (i < manifest.spike_dates.size() * manifest.spike_users_per_date) {
            created = manifest.spike_dates[i / manifest.spike_users_per_date];
        } else {
            // Registration density grows linearly over time.
            created = first_day + days{static_cast<long>(std::sqrt(rng.uniform()) * static_cast<double>(span_days))};
        }
        u.created = created.time_since_epoch().count() * 86400 + static_cast<EpochSeconds>(rng.index(86400));

        if (rng.chance(0.6)) {
            std::vector<std::string> words;
            if (rng.chance(0.35)) {
                words.push_back("Estudiante");
                words.push_back("universidad");
            }
            const std::size_t extra = 1 + rng.index(5);
            for (std::size_t w = 0; w < extra; ++w) words.push_back(rng.pick(bio_neutral_words()));
            if (g < 0.45 && rng.chance(0.5)) words.push_back(rng.pick(bio_male_words()));
            if (g >= 0.45 && g < 0.90 && rng.chance(0.5)) words.push_back(rng.pick(bio_female_words()));
            std::string bio;
            for (const auto& w : words) {
                if (!bio.empty()) bio += rng.chance(0.3) ? " y " : (rng.chance(0.2) ? ", de la " : " ");
                bio += w;
            }
            u.bio = bio + (rng.chance(0.5) ? "." : "");
        }
    }
    manifest.located_users = 0;
    for (const auto& l : located) manifest.located_users += l.size();

    // ---- tweets
    std::vector<double> activity(users.size());
    for (auto& a : activity) a = std::min(50.0, 1.0 / std::sqrt(1.0 - rng.uniform()));
    const Categorical author_dist(activity);

    const EpochSeconds day_start = params.collection_date.time_since_epoch().count() * 86400;
    const EpochSeconds window_start = day_start + 11 * 3600;
    const EpochSeconds window_len = 13 * 3600;
    std::vector<EpochSeconds> times(params.tweets);
    for (auto& t : times) t = window_start + static_cast<EpochSeconds>(rng.index(static_cast<std::size_t>(window_len)));
    std::sort(times.begin(), times.end());

    // Mention targets are restricted to accounts that have already posted, so
    // every mentioned account is present in the emitted corpus.
    std::vector<std::vector<std::size_t>> posted(params.regions);
    std::vector<std::size_t> posted_any;
    std::vector<char> has_posted(users.size(), 0);

    std::vector<SynthTweet> tweets(params.tweets);
    for (std::size_t i = 0; i < tweets.size(); ++i) {
        auto& tw = tweets[i];
        tw.id = 262000000000000000LL + static_cast<TweetId>(i) * 7;
        tw.t = times[i];
        tw.author = author_dist.draw(rng);

        if (i > 0 && rng.chance(params.retweet_share)) {
            std::size_t orig = rng.index(i);
            while (tweets[orig].original) orig = *tweets[orig].original;
            tw.original = orig;
            tw.text = "RT @" + users[tweets[orig].author].screen_name + ": " + tweets[orig].text;
            tw.mentioned.push_back(tweets[orig].author);
            tw.mentioned.insert(tw.mentioned.end(), tweets[orig].mentioned.begin(), tweets[orig].mentioned.end());
            ++manifest.retweets;
        } else {
            std::vector<std::string> parts;
            const std::size_t nwords = 3 + rng.index(5);
            for (std::size_t w = 0; w < nwords; ++w) parts.push_back(vary_case(rng, rng.pick(common_words())));
            if (rng.chance(0.6)) parts.push_back("#municipales2012");
            const auto& author = users[tw.author];
            if (author.region && rng.chance(0.45)) {
                parts.insert(parts.begin() + static_cast<std::ptrdiff_t>(rng.index(parts.size() + 1)),
                             vary_case(rng, manifest.planted_terms.at(manifest.regions[*author.region])));
            }
            if (rng.chance(params.mention_share)) {
                const std::size_t nm = 1 + rng.index(2);
                for (std::size_t m = 0; m < nm; ++m) {
                    const double d = rng.uniform();
                    std::optional<std::size_t> target;
                    if (d < 0.10) {
                        if (!posted_any.empty()) target = rng.pick(posted_any);  // possibly unlocated
                    } else {
                        std::size_t dest = hub;
                        if (d < 0.60 && author.region) dest = *author.region;
                        else if (d >= 0.85) dest = rng.index(params.regions);
                        if (!posted[dest].empty()) target = rng.pick(posted[dest]);
                    }
                    if (!target) continue;
                    tw.mentioned.push_back(*target);
                    parts.insert(parts.begin() + static_cast<std::ptrdiff_t>(rng.index(parts.size() + 1)),
                                 "@" + users[*target].screen_name);
                }
            }
            if (rng.chance(0.05)) parts.push_back("@noexiste" + std::to_string(rng.index(1000)));
            std::string text;
            for (const auto& p : parts) {
                if (!text.empty()) text += rng.chance(0.15) ? ", " : " ";
                text += p;
            }
            if (rng.chance(0.3)) text += "!";
            tw.text = std::move(text);
        }

        if (rng.chance(params.geo_share)) {
            const double c = rng.uniform();
            LatLon p;
            if (c < 0.45) p = {-33.4489 + rng.normal() * 0.0027, -70.6693 + rng.normal() * 0.0032};
            else if (c < 0.70) p = {-33.4170 + rng.normal() * 0.0027, -70.6030 + rng.normal() * 0.0032};
            else p = {-53.0 + rng.uniform() * 35.0, -73.0 + rng.uniform() * 5.0};
            p.lat = std::round(p.lat * 1e6) / 1e6;
            p.lon = std::round(p.lon * 1e6) / 1e6;
            tw.coordinates = p;
            ++manifest.geotagged_tweets;
        }

        if (!has_posted[tw.author]) {
            has_posted[tw.author] = 1;
            posted_any.push_back(tw.author);
            if (const auto r = users[tw.author].region) posted[*r].push_back(tw.author);
        }

        // Ground-truth OD tally from the generator's own bookkeeping.
        if (const auto origin = users[tw.author].region) {
            std::set<std::size_t> dest;
            for (const auto m : tw.mentioned)
                if (users[m].region) dest.insert(*users[m].region);
            for (const auto j : dest) ++manifest.od(*origin, j);
        }
    }

    // ---- emit
    std::vector<std::size_t> malformed_at;
    for (std::size_t m = 0; m < params.malformed; ++m) malformed_at.push_back(rng.index(params.tweets + 1));
    std::sort(malformed_at.begin(), malformed_at.end());
    manifest.malformed_lines = params.malformed;

    std::size_t next_bad = 0;
    auto emit_bad = [&](std::size_t pos) {
        while (next_bad < malformed_at.size() && malformed_at[next_bad] == pos) {
            out << "{\"id\": " << pos << ", \"text\": \"truncated line\n";
            ++next_bad;
        }
    };
    for (std::size_t i = 0; i < tweets.size(); ++i) {
        emit_bad(i);
        const auto& tw = tweets[i];
        const auto& u = users[tw.author];
        nlohmann::ordered_json j;
        j["id"] = tw.id;
        j["text"] = tw.text;
        j["created_at"] = format_api_timestamp(tw.t);
        j["user"] = nlohmann::ordered_json{{"id", u.id},
                                           {"name", u.name},
                                           {"screen_name", u.screen_name},
                                           {"location", u.location},
                                           {"description", u.bio},
                                           {"created_at", format_api_timestamp(u.created)}};
        if (tw.coordinates) {
            j["coordinates"] = nlohmann::ordered_json{
                {"type", "Point"}, {"coordinates", nlohmann::ordered_json::array({tw.coordinates->lon, tw.coordinates->lat})}};
        } else {
            j["coordinates"] = nullptr;
        }
        if (tw.original) j["retweeted_status"] = nlohmann::ordered_json{{"id", tweets[*tw.original].id}};
        out << j.dump() << '\n';
    }
    emit_bad(tweets.size());
    return manifest;
}

}  // namespace geosocial
