#pragma once

// Fixtures shared by the unit tests: raw-record builders, small corpora and a
// seeded RNG for property tests.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "geosocial/geosocial.hpp"
#include "json.hpp"

namespace testing_support {

using namespace geosocial;

inline const std::string kDataDir = GEOSOCIAL_DATA_DIR;

inline std::string data_file(const std::string& name) { return kDataDir + "/" + name; }

struct RawUser {
    UserId id = 1;
    std::string name = "Ana Soto";
    std::string screen_name = "ana";
    std::string location;
    std::string description;
    std::string created_at = "Mon Jan 04 10:00:00 +0000 2010";
};

struct RawTweet {
    TweetId id = 1;
    std::string text = "hola";
    std::string created_at = "Sun Oct 28 12:00:00 +0000 2012";
    RawUser user;
    std::optional<LatLon> coords;
    std::optional<TweetId> retweeted;
};

inline std::string raw_line(const RawTweet& t) {
    nlohmann::ordered_json j;
    j["id"] = t.id;
    j["text"] = t.text;
    j["created_at"] = t.created_at;
    j["user"] = {{"id", t.user.id},
                 {"name", t.user.name},
                 {"screen_name", t.user.screen_name},
                 {"location", t.user.location},
                 {"description", t.user.description},
                 {"created_at", t.user.created_at}};
    if (t.coords) j["coordinates"] = {{"type", "Point"}, {"coordinates", {t.coords->lon, t.coords->lat}}};
    else j["coordinates"] = nullptr;
    if (t.retweeted) j["retweeted_status"] = {{"id", *t.retweeted}};
    return j.dump();
}

inline Corpus ingest_lines(const std::vector<std::string>& lines) {
    std::stringstream ss;
    for (const auto& l : lines) ss << l << '\n';
    return ingest(ss);
}

inline Corpus ingest_tweets(const std::vector<RawTweet>& tweets) {
    std::vector<std::string> lines;
    for (const auto& t : tweets) lines.push_back(raw_line(t));
    return ingest_lines(lines);
}

/// Adds a tweet directly to an in-memory corpus, registering its author.
inline TweetRecord& add_tweet(Corpus& c, TweetId id, UserId author, EpochSeconds t, std::string text,
                              std::optional<TweetId> retweeted = std::nullopt) {
    if (!c.users.count(author)) {
        UserProfile u;
        u.user_id = author;
        u.screen_name = "u" + std::to_string(author);
        c.users.emplace(author, u);
    }
    TweetRecord r;
    r.tweet_id = id;
    r.author_id = author;
    r.timestamp = t;
    r.text = std::move(text);
    r.retweeted_id = retweeted;
    extract_entities(r);
    c.tweets.push_back(std::move(r));
    return c.tweets.back();
}

inline Date ymd(int y, unsigned m, unsigned d) {
    return std::chrono::sys_days{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
}

/// Scratch directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("geosocial_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

inline GenderLexicon fixture_lexicon() {
    return {load_word_list(data_file("names_male.txt")), load_word_list(data_file("names_female.txt"))};
}

inline std::vector<AdminUnit> chile_units() { return load_hierarchy_csv(data_file("chile_hierarchy.csv")); }

/// Minimal hierarchy: Chile > Arica y Parinacota > Arica > Arica.
inline std::vector<AdminUnit> arica_units() {
    return {{1, "Chile", AdminLevel::country, std::nullopt, 17000000},
            {15, "Arica y Parinacota", AdminLevel::region, 1, 226000},
            {151, "Arica", AdminLevel::province, 15, std::nullopt},
            {15101, "Arica", AdminLevel::commune, 151, 221000}};
}

}  // namespace testing_support
