/**
 * @file
 * @brief In-memory tweet corpus: record types, archive ingestion, the
 * canonical serialized form, and summary statistics.
 *
 * Raw archives are line-delimited JSON in the classic streaming-API layout.
 * The canonical corpus file is also line-delimited JSON: one header object,
 * then users ascending by id, then tweets in corpus order. Hashtags and
 * mentions are not stored; they are re-derived from the text on load.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "geosocial/dates.hpp"
#include "geosocial/error.hpp"
#include "geosocial/text.hpp"
#include "json.hpp"

namespace geosocial {

using TweetId = std::int64_t;
using UserId = std::int64_t;

struct LatLon {
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const LatLon&, const LatLon&) = default;
};

struct TweetRecord {
    TweetId tweet_id = 0;
    UserId author_id = 0;
    EpochSeconds timestamp = 0;
    std::string text;
    std::vector<std::string> hashtags;  // "#tag", in text order
    std::vector<std::string> mentions;  // "@name", in text order
    std::optional<LatLon> coordinates;
    std::optional<TweetId> retweeted_id;

    bool is_retweet() const noexcept { return retweeted_id.has_value(); }

    friend bool operator==(const TweetRecord&, const TweetRecord&) = default;
};

struct UserProfile {
    UserId user_id = 0;
    std::string screen_name;
    std::string display_name;
    std::string location_text;
    std::string bio_text;
    Date created_at{};

    friend bool operator==(const UserProfile&, const UserProfile&) = default;
};

struct LineWarning {
    std::size_t line = 0;  // 1-based
    std::string message;
};

struct IngestDiagnostics {
    std::size_t lines_read = 0;
    std::size_t skipped = 0;     // malformed lines
    std::size_t duplicates = 0;  // repeated tweet ids, first occurrence kept
    std::vector<LineWarning> warnings;
};

struct Corpus {
    std::vector<TweetRecord> tweets;  // ascending (timestamp, tweet_id)
    std::map<UserId, UserProfile> users;
    Date collection_date{};
    IngestDiagnostics diagnostics;

    const UserProfile* find_user(UserId id) const {
        auto it = users.find(id);
        return it == users.end() ? nullptr : &it->second;
    }
};

struct CorpusStats {
    std::size_t tweet_count = 0;  // excludes retweets
    std::size_t retweet_count = 0;
    std::size_t participant_count = 0;
    std::size_t vocabulary_size = 0;
    double hashtag_tweet_share = 0.0;

    friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

/// Fills hashtags and mentions from the text.
inline void extract_entities(TweetRecord& tweet) {
    tweet.hashtags.clear();
    tweet.mentions.clear();
    for (auto& tok : tokenize(tweet.text)) {
        if (tok.kind == TokenKind::hashtag) tweet.hashtags.push_back(std::move(tok.surface));
        else if (tok.kind == TokenKind::mention) tweet.mentions.push_back(std::move(tok.surface));
    }
}

namespace detail {

struct ParsedLine {
    TweetRecord tweet;
    UserProfile user;
};

inline std::string string_or_empty(const nlohmann::json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return {};
    return it->get<std::string>();
}

inline std::int64_t required_int(const nlohmann::json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number_integer()) throw DomainError(std::string("missing integer field '") + key + "'");
    return it->get<std::int64_t>();
}

inline EpochSeconds required_timestamp(const nlohmann::json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) throw DomainError(std::string("missing timestamp field '") + key + "'");
    auto t = parse_api_timestamp(it->get_ref<const std::string&>());
    if (!t) throw DomainError(std::string("bad timestamp in '") + key + "'");
    return *t;
}

inline ParsedLine parse_raw_record(std::string_view line) {
    const auto j = nlohmann::json::parse(line);
    if (!j.is_object()) throw DomainError("record is not an object");

    ParsedLine out;
    auto& t = out.tweet;
    t.tweet_id = required_int(j, "id");
    auto text_it = j.find("text");
    if (text_it == j.end() || !text_it->is_string()) throw DomainError("missing string field 'text'");
    t.text = text_it->get<std::string>();
    t.timestamp = required_timestamp(j, "created_at");

    auto user_it = j.find("user");
    if (user_it == j.end() || !user_it->is_object()) throw DomainError("missing object field 'user'");
    const auto& u = *user_it;
    auto& p = out.user;
    p.user_id = required_int(u, "id");
    p.display_name = string_or_empty(u, "name");
    p.screen_name = string_or_empty(u, "screen_name");
    p.location_text = string_or_empty(u, "location");
    p.bio_text = string_or_empty(u, "description");
    p.created_at = date_of(required_timestamp(u, "created_at"));
    t.author_id = p.user_id;
    if (p.created_at > date_of(t.timestamp)) throw DomainError("account created after the tweet");

    if (auto c = j.find("coordinates"); c != j.end() && !c->is_null()) {
        const auto& pair = c->at("coordinates");
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
            throw DomainError("coordinates must be [longitude, latitude]");
        const LatLon ll{pair[1].get<double>(), pair[0].get<double>()};
        if (!(ll.lat >= -90.0 && ll.lat <= 90.0) || !(ll.lon >= -180.0 && ll.lon <= 180.0))
            throw DomainError("coordinates out of range");
        t.coordinates = ll;
    }
    if (auto rt = j.find("retweeted_status"); rt != j.end() && !rt->is_null()) {
        t.retweeted_id = required_int(*rt, "id");
    }
    extract_entities(t);
    return out;
}

inline bool is_blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](char c) { return is_space_byte(c); });
}

inline void sort_tweets(std::vector<TweetRecord>& tweets) {
    std::sort(tweets.begin(), tweets.end(), [](const TweetRecord& a, const TweetRecord& b) {
        return std::tie(a.timestamp, a.tweet_id) < std::tie(b.timestamp, b.tweet_id);
    });
}

inline Date latest_date(const std::vector<TweetRecord>& sorted_tweets) {
    return sorted_tweets.empty() ? Date{} : date_of(sorted_tweets.back().timestamp);
}

}  // namespace detail

/// Reads a raw line-delimited archive. Malformed lines are skipped and
/// reported in `diagnostics`; the result does not depend on line order except
/// for which copy of a duplicated tweet id is kept.
inline Corpus ingest(std::istream& in) {
    Corpus corpus;
    auto& diag = corpus.diagnostics;
    std::unordered_set<TweetId> seen;
    // Profile snapshot from the most recent record of each user.
    std::unordered_map<UserId, std::pair<std::pair<EpochSeconds, TweetId>, UserProfile>> latest;

    std::string line;
    while (std::getline(in, line)) {
        ++diag.lines_read;
        if (detail::is_blank(line)) continue;
        detail::ParsedLine parsed;
        try {
            parsed = detail::parse_raw_record(line);
        } catch (const std::exception& e) {
            ++diag.skipped;
            diag.warnings.push_back({diag.lines_read, e.what()});
            continue;
        }
        if (!seen.insert(parsed.tweet.tweet_id).second) {
            ++diag.duplicates;
            continue;
        }
        const auto key = std::make_pair(parsed.tweet.timestamp, parsed.tweet.tweet_id);
        auto [it, inserted] = latest.try_emplace(parsed.user.user_id, key, parsed.user);
        if (!inserted && key > it->second.first) it->second = {key, std::move(parsed.user)};
        corpus.tweets.push_back(std::move(parsed.tweet));
    }
    if (in.bad()) throw IngestError("read error while ingesting");

    detail::sort_tweets(corpus.tweets);
    for (auto& [id, entry] : latest) corpus.users.emplace(id, std::move(entry.second));
    corpus.collection_date = detail::latest_date(corpus.tweets);
    return corpus;
}

inline Corpus ingest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open " + path);
    return ingest(in);
}

inline CorpusStats corpus_stats(const Corpus& corpus) {
    CorpusStats s;
    std::unordered_set<UserId> authors;
    std::unordered_set<std::string> vocabulary;
    std::size_t with_hashtag = 0;
    for (const auto& t : corpus.tweets) {
        authors.insert(t.author_id);
        if (t.is_retweet()) {
            ++s.retweet_count;
        } else {
            ++s.tweet_count;
            if (!t.hashtags.empty()) ++with_hashtag;
        }
        for (auto& tok : tokenize(t.text)) vocabulary.insert(std::move(tok.surface));
    }
    s.participant_count = authors.size();
    s.vocabulary_size = vocabulary.size();
    s.hashtag_tweet_share = s.tweet_count == 0 ? 0.0 : static_cast<double>(with_hashtag) / s.tweet_count;
    return s;
}

// ---------------------------------------------------------------------------
// Canonical corpus file

inline constexpr std::string_view kCorpusFormat = "geosocial-corpus";
inline constexpr int kCorpusVersion = 1;

inline void save_corpus(const Corpus& corpus, std::ostream& os) {
    using nlohmann::ordered_json;
    ordered_json header;
    header["format"] = kCorpusFormat;
    header["version"] = kCorpusVersion;
    header["collection_date"] = format_date(corpus.collection_date);
    header["users"] = corpus.users.size();
    header["tweets"] = corpus.tweets.size();
    header["lines_read"] = corpus.diagnostics.lines_read;
    header["skipped"] = corpus.diagnostics.skipped;
    header["duplicates"] = corpus.diagnostics.duplicates;
    os << header.dump() << '\n';

    for (const auto& [id, u] : corpus.users) {
        ordered_json j;
        j["user"] = ordered_json{{"id", u.user_id},
                                 {"screen_name", u.screen_name},
                                 {"name", u.display_name},
                                 {"location", u.location_text},
                                 {"description", u.bio_text},
                                 {"created_at", format_date(u.created_at)}};
        os << j.dump() << '\n';
    }
    for (const auto& t : corpus.tweets) {
        ordered_json tj{{"id", t.tweet_id}, {"author", t.author_id}, {"t", t.timestamp}, {"text", t.text}};
        tj["coordinates"] = t.coordinates ? ordered_json::array({t.coordinates->lat, t.coordinates->lon}) : ordered_json();
        tj["retweeted_id"] = t.retweeted_id ? ordered_json(*t.retweeted_id) : ordered_json();
        ordered_json j;
        j["tweet"] = std::move(tj);
        os << j.dump() << '\n';
    }
}

inline void save_corpus_file(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write " + path);
    save_corpus(corpus, out);
    if (!out) throw IngestError("write failed for " + path);
}

/// True when the first line of `path` is a canonical corpus header.
inline bool is_canonical_corpus_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open " + path);
    std::string first;
    std::getline(in, first);
    const auto j = nlohmann::json::parse(first, nullptr, false);
    return j.is_object() && j.contains("format") && j["format"] == kCorpusFormat;
}

inline Corpus load_corpus(std::istream& in) {
    Corpus corpus;
    std::string line;
    if (!std::getline(in, line)) throw IngestError("empty corpus file");
    const auto header = nlohmann::json::parse(line, nullptr, false);
    if (!header.is_object() || header.value("format", "") != kCorpusFormat)
        throw IngestError("not a canonical corpus file");
    if (header.value("version", 0) != kCorpusVersion) throw IngestError("unsupported corpus version");
    auto date = parse_date(header.value("collection_date", ""));
    if (!date) throw IngestError("corpus header: bad collection_date");
    corpus.collection_date = *date;
    corpus.diagnostics.lines_read = header.value("lines_read", std::size_t{0});
    corpus.diagnostics.skipped = header.value("skipped", std::size_t{0});
    corpus.diagnostics.duplicates = header.value("duplicates", std::size_t{0});

    std::size_t lineno = 1;
    try {
        while (std::getline(in, line)) {
            ++lineno;
            if (detail::is_blank(line)) continue;
            const auto j = nlohmann::json::parse(line);
            if (auto u = j.find("user"); u != j.end()) {
                UserProfile p;
                p.user_id = u->at("id").get<UserId>();
                p.screen_name = u->at("screen_name").get<std::string>();
                p.display_name = u->at("name").get<std::string>();
                p.location_text = u->at("location").get<std::string>();
                p.bio_text = u->at("description").get<std::string>();
                auto created = parse_date(u->at("created_at").get<std::string>());
                if (!created) throw IngestError("bad created_at");
                p.created_at = *created;
                if (!corpus.users.emplace(p.user_id, std::move(p)).second) throw IngestError("duplicate user");
            } else if (auto tw = j.find("tweet"); tw != j.end()) {
                TweetRecord t;
                t.tweet_id = tw->at("id").get<TweetId>();
                t.author_id = tw->at("author").get<UserId>();
                t.timestamp = tw->at("t").get<EpochSeconds>();
                t.text = tw->at("text").get<std::string>();
                if (const auto& c = tw->at("coordinates"); !c.is_null()) t.coordinates = LatLon{c.at(0), c.at(1)};
                if (const auto& r = tw->at("retweeted_id"); !r.is_null()) t.retweeted_id = r.get<TweetId>();
                extract_entities(t);
                corpus.tweets.push_back(std::move(t));
            } else {
                throw IngestError("unknown record");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw IngestError("corpus line " + std::to_string(lineno) + ": " + e.what());
    } catch (const IngestError& e) {
        throw IngestError("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
    for (const auto& t : corpus.tweets) {
        if (!corpus.users.count(t.author_id)) throw IngestError("tweet " + std::to_string(t.tweet_id) + " has no author profile");
    }
    detail::sort_tweets(corpus.tweets);
    return corpus;
}

inline Corpus load_corpus_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open " + path);
    return load_corpus(in);
}

/// Accepts either a canonical corpus file or a raw archive.
inline Corpus open_corpus(const std::string& path) {
    return is_canonical_corpus_file(path) ? load_corpus_file(path) : ingest_file(path);
}

}  // namespace geosocial
