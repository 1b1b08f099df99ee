/**
 * @file
 * @brief Stage writers shared by the CLI subcommands, pipeline
 * configuration, and the full-pipeline orchestrator.
 *
 * Every CSV writer here fixes its column order; numbers use the shortest
 * round-trip representation so repeated runs produce identical bytes.
 */
#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geosocial/content.hpp"
#include "geosocial/corpus.hpp"
#include "geosocial/csv.hpp"
#include "geosocial/demographics.hpp"
#include "geosocial/error.hpp"
#include "geosocial/gazetteer.hpp"
#include "geosocial/geospatial.hpp"
#include "geosocial/interactions.hpp"
#include "geosocial/temporal.hpp"
#include "geosocial/version.hpp"
#include "json.hpp"

namespace geosocial {

namespace fs = std::filesystem;

/// A pipeline stage failed; `stage()` names it.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what) : Error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

namespace detail {

inline std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write " + path.string());
    return out;
}

inline void finish_output(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw IngestError("write failed for " + path.string());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// geolocate

inline void write_geolocation_csv(const fs::path& path, const Gazetteer& g, const std::vector<GeoResolution>& resolutions) {
    auto out = detail::open_output(path);
    csv::Writer w(out);
    w.row("user_id", "outcome", "unit_id", "level", "region_id");
    for (const auto& r : resolutions) {
        std::string unit, level, region;
        if (r.entry) {
            unit = std::to_string(r.entry->unit_id);
            level = std::string(to_string(r.entry->level));
            if (auto reg = g.region_of(r.entry->unit_id)) region = std::to_string(*reg);
        }
        w.row(r.user_id, to_string(r.outcome), unit, level, region);
    }
    detail::finish_output(out, path);
}

/// Reads the geolocation CSV back into a user -> region map.
inline RegionAssignment read_region_assignment_csv(const std::string& path) {
    RegionAssignment out;
    for (const auto& row : csv::read_table(path, {"user_id", "outcome", "unit_id", "level", "region_id"})) {
        auto user = csv::parse_int<UserId>(row[0]);
        if (!user) throw IngestError(path + ": bad user_id '" + row[0] + "'");
        if (row[4].empty()) continue;
        auto region = csv::parse_int<UnitId>(row[4]);
        if (!region) throw IngestError(path + ": bad region_id for user " + row[0]);
        out.emplace(*user, *region);
    }
    return out;
}

/// Distinct regions of an assignment, ascending.
inline std::vector<UnitId> assigned_regions(const RegionAssignment& assignment) {
    std::set<UnitId> s;
    for (const auto& [user, region] : assignment) s.insert(region);
    return {s.begin(), s.end()};
}

// ---------------------------------------------------------------------------
// demographics

inline void write_bio_keywords_csv(const fs::path& path, const std::vector<BioKeyword>& keywords) {
    auto out = detail::open_output(path);
    csv::Writer w(out);
    w.row("rank", "word", "pagerank", "tendency", "user_share", "male_users", "female_users");
    std::size_t rank = 0;
    for (const auto& k : keywords)
        w.row(++rank, k.word, k.pagerank_score, k.tendency, k.user_share, k.male_users, k.female_users);
    detail::finish_output(out, path);
}

// ---------------------------------------------------------------------------
// temporal

struct TemporalOutputs {
    fs::path series;
    fs::path peaks;
    fs::path deciles;
};

/// `base` names the series file; peaks and deciles go next to it with
/// "_peaks" and "_deciles" appended to the stem.
inline TemporalOutputs temporal_output_paths(const fs::path& base) {
    const auto stem = base.stem().string();
    const auto ext = base.has_extension() ? base.extension().string() : std::string(".csv");
    return {base, base.parent_path() / (stem + "_peaks" + ext), base.parent_path() / (stem + "_deciles" + ext)};
}

struct TemporalResult {
    DailySeries series;
    std::vector<Peak> peaks;
    std::vector<Peak> top_peaks;
    std::vector<DecileRow> deciles;
};

inline TemporalResult run_temporal(const Corpus& corpus, std::size_t window) {
    TemporalResult r;
    r.series = registration_series(corpus);
    r.peaks = detect_peaks(r.series, window);
    r.top_peaks = top_decile_peaks(r.peaks);
    r.deciles = registration_deciles(corpus);
    return r;
}

inline void write_temporal_csvs(const TemporalOutputs& paths, const TemporalResult& r) {
    {
        auto out = detail::open_output(paths.series);
        csv::Writer w(out);
        w.row("date", "count");
        for (std::size_t i = 0; i < r.series.counts.size(); ++i) w.row(format_date(r.series.date_at(i)), r.series.counts[i]);
        detail::finish_output(out, paths.series);
    }
    {
        std::set<Date> top;
        for (const auto& p : r.top_peaks) top.insert(p.date);
        auto out = detail::open_output(paths.peaks);
        csv::Writer w(out);
        w.row("date", "volume", "significance", "top_decile");
        for (const auto& p : r.peaks)
            w.row(format_date(p.date), p.volume, p.significance, top.count(p.date) ? "true" : "false");
        detail::finish_output(out, paths.peaks);
    }
    {
        auto out = detail::open_output(paths.deciles);
        csv::Writer w(out);
        w.row("percent", "date", "days_since_previous");
        for (const auto& d : r.deciles) w.row(d.percent, format_date(d.date), d.days_since_previous);
        detail::finish_output(out, paths.deciles);
    }
}

// ---------------------------------------------------------------------------
// content

struct ContentOptions {
    EpochSeconds bin_width = 300;
    std::size_t top_k = 25;
    std::size_t popular_k = 25;
};

inline const std::vector<std::string>& content_file_names() {
    static const std::vector<std::string> names = {"volume.csv", "profile.csv", "popular.csv", "tfidf.csv"};
    return names;
}

inline void write_content_outputs(const fs::path& dir, const Corpus& corpus, const RegionAssignment& assignment,
                                  const std::vector<UnitId>& regions, const ContentOptions& opts) {
    const auto series = volume_series(corpus, assignment, regions, opts.bin_width);
    std::vector<std::vector<double>> normalized;
    normalized.reserve(series.size());
    for (const auto& s : series) normalized.push_back(normalize_series(s.counts));
    // TF-IDF first: it is the step with a domain precondition.
    const auto top = top_terms_per_region(tfidf_vectors(corpus, assignment), opts.top_k);

    {
        const auto path = dir / "volume.csv";
        auto out = detail::open_output(path);
        csv::Writer w(out);
        w.row("region_id", "bin_start", "count", "normalized");
        for (std::size_t i = 0; i < series.size(); ++i)
            for (std::size_t b = 0; b < series[i].counts.size(); ++b)
                w.row(series[i].region_id,
                      format_timestamp_iso(series[i].start + static_cast<EpochSeconds>(b) * series[i].bin_width),
                      series[i].counts[b], normalized[i][b]);
        detail::finish_output(out, path);
    }
    {
        const auto path = dir / "profile.csv";
        auto out = detail::open_output(path);
        csv::Writer w(out);
        w.row("bin_start", "mean", "std");
        if (!series.empty()) {
            const auto profile = aggregate_profiles(normalized);
            for (std::size_t b = 0; b < profile.size(); ++b)
                w.row(format_timestamp_iso(series.front().start + static_cast<EpochSeconds>(b) * opts.bin_width),
                      profile[b].mean, profile[b].std);
        }
        detail::finish_output(out, path);
    }
    {
        const auto path = dir / "popular.csv";
        auto out = detail::open_output(path);
        csv::Writer w(out);
        w.row("kind", "term", "count");
        for (const auto kind : {TokenKind::mention, TokenKind::hashtag})
            for (const auto& t : popular_terms(corpus, kind, opts.popular_k)) w.row(to_string(kind), t.term, t.tweet_count);
        detail::finish_output(out, path);
    }
    {
        const auto path = dir / "tfidf.csv";
        auto out = detail::open_output(path);
        csv::Writer w(out);
        w.row("region_id", "rank", "term", "weight");
        for (const auto& r : top) {
            std::size_t rank = 0;
            for (const auto& t : r.terms) w.row(r.region_id, ++rank, t.term, t.weight);
        }
        detail::finish_output(out, path);
    }
}

// ---------------------------------------------------------------------------
// interactions

inline const std::vector<std::string>& interaction_file_names() {
    static const std::vector<std::string> names = {"matrix.csv", "stats.csv", "edges.csv"};
    return names;
}

inline void write_interaction_outputs(const fs::path& dir, const ODMatrix& m) {
    {
        const auto path = dir / "matrix.csv";
        auto out = detail::open_output(path);
        csv::Writer w(out);
        std::vector<std::string> header = {"region_id"};
        for (const auto r : m.regions()) header.push_back(std::to_string(r));
        w.row(header);
        for (std::size_t i = 0; i < m.size(); ++i) {
            std::vector<std::string> row = {std::to_string(m.regions()[i])};
            for (std::size_t j = 0; j < m.size(); ++j) row.push_back(std::to_string(m(i, j)));
            w.row(row);
        }
        detail::finish_output(out, path);
    }
    {
        const auto path = dir / "stats.csv";
        auto out = detail::open_output(path);
        csv::Writer w(out);
        w.row("region_id", "in", "out", "ratio", "intra_share");
        for (const auto& s : flow_stats(m))
            w.row(s.region_id, s.in, s.out, csv::format_optional(s.in_out_ratio), csv::format_optional(s.intra_share));
        detail::finish_output(out, path);
    }
    {
        const auto path = dir / "edges.csv";
        auto out = detail::open_output(path);
        csv::Writer w(out);
        w.row("source", "destination", "count");
        for (const auto& e : flow_diagram_export(m)) w.row(e.source, e.destination, e.count);
        detail::finish_output(out, path);
    }
}

/// Reads matrix.csv back (used to check outputs against ground truth).
inline ODMatrix read_matrix_csv(const std::string& path) {
    const auto rows = csv::parse(csv::read_file(path));
    if (rows.empty() || rows[0].empty() || rows[0][0] != "region_id") throw IngestError(path + ": bad matrix header");
    std::vector<UnitId> regions;
    for (std::size_t j = 1; j < rows[0].size(); ++j) regions.push_back(csv::parse_int<UnitId>(rows[0][j]).value());
    ODMatrix m(regions);
    if (rows.size() != regions.size() + 1) throw IngestError(path + ": matrix is not square");
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const auto& row = rows[i + 1];
        if (row.size() != regions.size() + 1) throw IngestError(path + ": matrix is not square");
        for (std::size_t j = 0; j < regions.size(); ++j) m(i, j) = csv::parse_int<std::uint64_t>(row[j + 1]).value();
    }
    return m;
}

// ---------------------------------------------------------------------------
// hexbin

inline void write_hexbin_csv(const fs::path& path, const std::vector<HexBin>& bins) {
    auto out = detail::open_output(path);
    csv::Writer w(out);
    w.row("q", "r", "center_lat", "center_lon", "count");
    for (const auto& b : bins) w.row(b.cell.q, b.cell.r, b.center.lat, b.center.lon, b.count);
    detail::finish_output(out, path);
}

/// Grid about `origin`, or about the median coordinates when unset.
/// nullopt when there is nothing to anchor the grid to.
inline std::optional<HexGridSpec> hex_grid_for(const Corpus& corpus, std::optional<LatLon> origin, double cell_size) {
    if (!origin) {
        const auto s = geo_summary(corpus);
        if (!s.median_lat) return std::nullopt;
        origin = LatLon{*s.median_lat, *s.median_lon};
    }
    return HexGridSpec::centered_on(*origin, cell_size);
}

// ---------------------------------------------------------------------------
// Configuration

struct PipelineParams {
    EpochSeconds bin_width = 300;
    double keep_fraction = 0.001;
    double damping = 0.85;
    double tolerance = 1e-10;
    int max_iter = 200;
    std::size_t window = 7;
    std::size_t top_k_bio = 50;
    std::size_t top_k_terms = 25;
    std::size_t popular_k = 25;
    double cell_size = 500.0;
    std::uint64_t min_count = 20;
    std::optional<LatLon> hex_origin;
};

struct PipelineConfig {
    std::string corpus;  // raw archive or canonical corpus file
    std::string hierarchy;
    std::optional<std::string> aliases;
    std::string male_names;
    std::string female_names;
    std::string stopwords;
    std::string out_dir;
    PipelineParams params;
};

/**
 * Loads a JSON configuration:
 *
 *     {"inputs": {"corpus": ..., "hierarchy": ..., "aliases": ..., "male": ...,
 *                 "female": ..., "stopwords": ...},
 *      "out_dir": ..., "params": {"bin_width": 300, ...}}
 *
 * Relative paths are resolved against the directory holding the file.
 * Unknown keys are rejected so that typos do not silently fall back to defaults.
 */
inline PipelineConfig load_config(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(csv::read_file(path));
    } catch (const std::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config " + path + ": top level must be an object");
    const fs::path base = fs::path(path).parent_path();
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() || base.empty() ? p : (base / p).string(); };

    PipelineConfig c;
    try {
        for (const auto& [key, value] : j.items())
            if (key != "inputs" && key != "out_dir" && key != "params") throw ConfigError("unknown key '" + key + "'");
        if (auto in = j.find("inputs"); in != j.end()) {
            for (const auto& [key, value] : in->items()) {
                const std::string p = resolve(value.get<std::string>());
                if (key == "corpus") c.corpus = p;
                else if (key == "hierarchy") c.hierarchy = p;
                else if (key == "aliases") c.aliases = p;
                else if (key == "male") c.male_names = p;
                else if (key == "female") c.female_names = p;
                else if (key == "stopwords") c.stopwords = p;
                else throw ConfigError("unknown input '" + key + "'");
            }
        }
        if (auto o = j.find("out_dir"); o != j.end()) c.out_dir = resolve(o->get<std::string>());
        if (auto p = j.find("params"); p != j.end()) {
            auto& q = c.params;
            for (const auto& [key, v] : p->items()) {
                if (key == "bin_width") q.bin_width = v.get<EpochSeconds>();
                else if (key == "keep_fraction") q.keep_fraction = v.get<double>();
                else if (key == "damping") q.damping = v.get<double>();
                else if (key == "tolerance") q.tolerance = v.get<double>();
                else if (key == "max_iter") q.max_iter = v.get<int>();
                else if (key == "window") q.window = v.get<std::size_t>();
                else if (key == "top_k_bio") q.top_k_bio = v.get<std::size_t>();
                else if (key == "top_k_terms") q.top_k_terms = v.get<std::size_t>();
                else if (key == "popular_k") q.popular_k = v.get<std::size_t>();
                else if (key == "cell_size") q.cell_size = v.get<double>();
                else if (key == "min_count") q.min_count = v.get<std::uint64_t>();
                else if (key == "hex_origin") {
                    if (v.is_null()) q.hex_origin.reset();
                    else q.hex_origin = LatLon{v.at(0).get<double>(), v.at(1).get<double>()};
                } else throw ConfigError("unknown parameter '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    return c;
}

inline void validate_params(const PipelineParams& p) {
    if (p.bin_width <= 0) throw ConfigError("bin_width must be positive");
    if (!(p.keep_fraction > 0.0 && p.keep_fraction <= 1.0)) throw ConfigError("keep_fraction must be in (0, 1]");
    if (!(p.damping >= 0.0 && p.damping < 1.0)) throw ConfigError("damping must be in [0, 1)");
    if (!(p.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    if (p.max_iter < 1) throw ConfigError("max_iter must be at least 1");
    if (p.window < 1) throw ConfigError("window must be at least 1");
    if (p.top_k_bio < 1 || p.top_k_terms < 1 || p.popular_k < 1) throw ConfigError("top-k values must be at least 1");
    if (!(p.cell_size > 0.0)) throw ConfigError("cell_size must be positive");
    if (p.min_count < 1) throw ConfigError("min_count must be at least 1");
    if (p.hex_origin && (!(std::abs(p.hex_origin->lat) <= 90.0) || !(std::abs(p.hex_origin->lon) <= 180.0)))
        throw ConfigError("hex_origin out of range");
}

inline void validate_config(const PipelineConfig& c) {
    auto require_file = [](const std::string& what, const std::string& p) {
        if (p.empty()) throw ConfigError("missing input: " + what);
        if (!fs::is_regular_file(p)) throw ConfigError(what + " file not found: " + p);
    };
    require_file("corpus", c.corpus);
    require_file("hierarchy", c.hierarchy);
    if (c.aliases) require_file("aliases", *c.aliases);
    require_file("male", c.male_names);
    require_file("female", c.female_names);
    require_file("stopwords", c.stopwords);
    if (c.out_dir.empty()) throw ConfigError("missing out_dir");
    validate_params(c.params);
}

// ---------------------------------------------------------------------------
// Full pipeline

struct Report {
    fs::path out_dir;
    std::vector<std::string> outputs;  // file names relative to out_dir, in write order
    nlohmann::ordered_json document;   // contents of report.json
};

inline constexpr std::string_view kReportFile = "report.json";

namespace detail {

inline nlohmann::ordered_json params_json(const PipelineParams& p) {
    nlohmann::ordered_json j;
    j["bin_width"] = p.bin_width;
    j["keep_fraction"] = p.keep_fraction;
    j["damping"] = p.damping;
    j["tolerance"] = p.tolerance;
    j["max_iter"] = p.max_iter;
    j["window"] = p.window;
    j["top_k_bio"] = p.top_k_bio;
    j["top_k_terms"] = p.top_k_terms;
    j["popular_k"] = p.popular_k;
    j["cell_size"] = p.cell_size;
    j["min_count"] = p.min_count;
    j["hex_origin"] = p.hex_origin ? nlohmann::ordered_json::array({p.hex_origin->lat, p.hex_origin->lon})
                                   : nlohmann::ordered_json();
    return j;
}

inline nlohmann::ordered_json optional_json(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json();
}

inline std::string utc_now_iso() {
    const auto now = std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
    return format_timestamp_iso(now.time_since_epoch().count());
}

}  // namespace detail

/**
 * Runs ingest, geolocate, demographics, temporal, content, interactions and
 * hexbin in order, writing each stage's files into the output directory and
 * a consolidated report.json last. Wall-clock data lives only under the
 * report's "timing" key; everything else is a function of the inputs.
 *
 * Throws ConfigError before touching the filesystem when the configuration is
 * invalid, and StageError (after writing a partial report) when a stage fails.
 */
inline Report run_pipeline(const PipelineConfig& config) {
    validate_config(config);
    const auto started = std::chrono::steady_clock::now();
    const std::string started_at = detail::utc_now_iso();

    Report rep;
    rep.out_dir = config.out_dir;
    fs::create_directories(rep.out_dir);
    auto& doc = rep.document;
    doc["tool"] = kToolName;
    doc["version"] = kVersion;
    doc["status"] = "running";
    doc["inputs"] = nlohmann::ordered_json{{"corpus", config.corpus},
                                           {"hierarchy", config.hierarchy},
                                           {"aliases", config.aliases ? nlohmann::ordered_json(*config.aliases) : nlohmann::ordered_json()},
                                           {"male", config.male_names},
                                           {"female", config.female_names},
                                           {"stopwords", config.stopwords}};
    doc["parameters"] = detail::params_json(config.params);
    doc["outputs"] = nlohmann::ordered_json::array();

    auto write_report = [&] {
        doc["outputs"] = rep.outputs;
        nlohmann::ordered_json timing;
        timing["started_at"] = started_at;
        timing["finished_at"] = detail::utc_now_iso();
        timing["elapsed_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        doc["timing"] = timing;
        std::ofstream out(rep.out_dir / kReportFile, std::ios::binary);
        out << doc.dump(2) << '\n';
    };
    auto stage = [&](const std::string& name, auto&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            doc["status"] = "failed";
            doc["failed_stage"] = name;
            doc["error"] = e.what();
            write_report();
            throw StageError(name, e.what());
        }
    };
    auto produced = [&](const std::string& name) { rep.outputs.push_back(name); };
    const auto& p = config.params;

    Corpus corpus;
    stage("ingest", [&] {
        corpus = open_corpus(config.corpus);
        save_corpus_file(corpus, (rep.out_dir / "corpus.jsonl").string());
        produced("corpus.jsonl");
        const auto stats = corpus_stats(corpus);
        doc["ingest"] = nlohmann::ordered_json{{"lines_read", corpus.diagnostics.lines_read},
                                               {"skipped", corpus.diagnostics.skipped},
                                               {"duplicates", corpus.diagnostics.duplicates}};
        doc["corpus"] = nlohmann::ordered_json{{"tweet_count", stats.tweet_count},
                                               {"retweet_count", stats.retweet_count},
                                               {"participant_count", stats.participant_count},
                                               {"vocabulary_size", stats.vocabulary_size},
                                               {"hashtag_tweet_share", stats.hashtag_tweet_share},
                                               {"users", corpus.users.size()},
                                               {"collection_date", format_date(corpus.collection_date)}};
    });

    std::optional<Gazetteer> gazetteer;
    RegionAssignment assignment;
    stage("geolocate", [&] {
        gazetteer = build_gazetteer(load_hierarchy_csv(config.hierarchy),
                                    config.aliases ? load_aliases_csv(*config.aliases) : std::vector<Alias>{});
        const auto resolutions = resolve_users(*gazetteer, corpus);
        write_geolocation_csv(rep.out_dir / "geolocation.csv", *gazetteer, resolutions);
        produced("geolocation.csv");
        assignment = region_assignment(*gazetteer, resolutions);

        auto& cov = doc["coverage"] = nlohmann::ordered_json::array();
        for (const auto& row : coverage_table(resolutions, corpus))
            cov.push_back({{"level", row.label},
                           {"users", row.users},
                           {"user_share", row.user_share},
                           {"tweets", row.tweets},
                           {"tweet_share", row.tweet_share}});
        doc["gazetteer_entries"] = gazetteer->entries().size();

        // Physical vs virtual population, over regions with both.
        std::map<UnitId, std::size_t> virtual_pop;
        for (const auto& [user, region] : assignment) ++virtual_pop[region];
        std::vector<std::pair<double, double>> pairs;
        for (const auto& [region, n] : virtual_pop)
            if (auto pop = gazetteer->unit(region).population; pop && *pop > 0)
                pairs.emplace_back(static_cast<double>(*pop), static_cast<double>(n));
        try {
            doc["regional_log_correlation"] = pearson_log_correlation(pairs);
        } catch (const DomainError&) {
            doc["regional_log_correlation"] = nullptr;
        }
    });

    stage("demographics", [&] {
        const GenderLexicon lex{load_word_list(config.male_names), load_word_list(config.female_names)};
        const auto stopwords = load_word_list(config.stopwords);
        const auto genders = classify_users(lex, corpus);
        const auto sets = bio_word_sets(corpus, genders, stopwords);
        BioAnalysisOptions opts;
        opts.keep_fraction = p.keep_fraction;
        opts.pagerank = {p.damping, p.tolerance, p.max_iter};
        opts.top_k = p.top_k_bio;
        const auto bio = top_bio_keywords(sets, genders, opts);
        write_bio_keywords_csv(rep.out_dir / "bio_keywords.csv", bio.keywords);
        produced("bio_keywords.csv");

        std::map<Gender, std::size_t> by_gender;
        for (const auto& [id, g] : genders) ++by_gender[g];
        doc["gender"] = nlohmann::ordered_json{{"male", by_gender[Gender::male]},
                                               {"female", by_gender[Gender::female]},
                                               {"undetermined", by_gender[Gender::undetermined]}};
        doc["bio_graph"] = nlohmann::ordered_json{{"nodes", bio.graph_nodes},
                                                  {"edges", bio.graph_edges},
                                                  {"filtered_nodes", bio.filtered_nodes},
                                                  {"filtered_edges", bio.filtered_edges},
                                                  {"pagerank_iterations", bio.pagerank_iterations},
                                                  {"pagerank_converged", bio.pagerank_converged}};
    });

    stage("temporal", [&] {
        const auto paths = temporal_output_paths(rep.out_dir / "registrations.csv");
        const auto result = run_temporal(corpus, p.window);
        write_temporal_csvs(paths, result);
        produced(paths.series.filename().string());
        produced(paths.peaks.filename().string());
        produced(paths.deciles.filename().string());
        doc["peaks"] = nlohmann::ordered_json{{"detected", result.peaks.size()}, {"top_decile", result.top_peaks.size()}};
    });

    const auto regions = assigned_regions(assignment);
    stage("content", [&] {
        write_content_outputs(rep.out_dir, corpus, assignment, regions, {p.bin_width, p.top_k_terms, p.popular_k});
        for (const auto& f : content_file_names()) produced(f);
    });

    stage("interactions", [&] {
        const auto od = od_matrix(corpus, assignment, build_mention_index(corpus, assignment), regions);
        write_interaction_outputs(rep.out_dir, od.matrix);
        for (const auto& f : interaction_file_names()) produced(f);
        nlohmann::ordered_json summary;
        summary["total"] = od.matrix.total();
        summary["dropped_mentions"] = od.dropped_mentions;
        try {
            const auto s = flow_summary(flow_stats(od.matrix));
            summary["ratio_mean"] = s.ratio.mean;
            summary["ratio_std"] = s.ratio.std;
            summary["intra_share_mean"] = s.intra_share.mean;
            summary["intra_share_std"] = s.intra_share.std;
        } catch (const DomainError&) {
            summary["ratio_mean"] = summary["ratio_std"] = summary["intra_share_mean"] = summary["intra_share_std"] = nullptr;
        }
        doc["interactions"] = summary;
    });

    stage("hexbin", [&] {
        const auto geo = geo_summary(corpus);
        doc["geo"] = nlohmann::ordered_json{{"geo_tweet_count", geo.geo_tweet_count},
                                            {"geo_share", geo.geo_share},
                                            {"median_lat", detail::optional_json(geo.median_lat)},
                                            {"median_lon", detail::optional_json(geo.median_lon)}};
        std::vector<HexBin> bins;
        if (const auto spec = hex_grid_for(corpus, p.hex_origin, p.cell_size)) bins = hexbin_aggregate(corpus, *spec, p.min_count);
        write_hexbin_csv(rep.out_dir / "hexbins.csv", bins);
        produced("hexbins.csv");
    });

    doc["status"] = "ok";
    write_report();
    return rep;
}

}  // namespace geosocial
