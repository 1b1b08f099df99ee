// Command-line front end: one subcommand per pipeline stage, plus `run`
// (full pipeline) and `synth` (synthetic corpus generator).
//
// Exit codes: 0 success, 1 stage failure, 2 configuration error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "geosocial/geosocial.hpp"

namespace fs = std::filesystem;
using namespace geosocial;

namespace {

constexpr int kExitStageFailure = 1;
constexpr int kExitConfigError = 2;

struct GlobalOptions {
    std::string config;
    std::string out_dir;
    bool quiet = false;
};

void info(const GlobalOptions& g, const std::string& msg) {
    if (!g.quiet) std::cerr << msg << '\n';
}

void require_file(const std::string& what, const std::string& path) {
    if (path.empty()) throw ConfigError("missing --" + what);
    if (!fs::is_regular_file(path)) throw ConfigError(what + " file not found: " + path);
}

std::string require_out_dir(const GlobalOptions& g) {
    if (g.out_dir.empty()) throw ConfigError("missing --out-dir");
    fs::create_directories(g.out_dir);
    return g.out_dir;
}

LatLon parse_origin(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ConfigError("--origin must be 'lat,lon'");
    auto lat = csv::parse_double(collapse_whitespace(text.substr(0, comma)));
    auto lon = csv::parse_double(collapse_whitespace(text.substr(comma + 1)));
    if (!lat || !lon || std::abs(*lat) > 90.0 || std::abs(*lon) > 180.0) throw ConfigError("--origin out of range: " + text);
    return {*lat, *lon};
}

void warn_skipped(const GlobalOptions& g, const Corpus& corpus) {
    if (g.quiet) return;
    for (const auto& w : corpus.diagnostics.warnings) std::cerr << "warning: line " << w.line << ": " << w.message << '\n';
    if (corpus.diagnostics.skipped > 0) std::cerr << "skipped " << corpus.diagnostics.skipped << " malformed line(s)\n";
}

/// Runs `body` as stage `name`: configuration problems exit 2, anything else 1.
template <typename Body>
int run_stage(const std::string& name, Body&& body) {
    try {
        body();
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << name << ": " << e.what() << '\n';
        return kExitStageFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geotagged social-media corpus characterization pipeline"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--config", global.config, "Pipeline configuration file (JSON), used by 'run'");
    app.add_option("--out-dir", global.out_dir, "Output directory");
    app.add_flag("--quiet", global.quiet, "Suppress progress and warnings");

    int status = 0;

    // ---- ingest
    auto* ingest_cmd = app.add_subcommand("ingest", "Parse a raw archive into a canonical corpus file");
    std::string ingest_input, ingest_out;
    bool ingest_stats = false;
    ingest_cmd->add_option("--input", ingest_input, "Raw line-delimited archive")->required();
    ingest_cmd->add_option("--out", ingest_out, "Canonical corpus output file");
    ingest_cmd->add_flag("--stats", ingest_stats, "Print the corpus summary as JSON on stdout");
    ingest_cmd->callback([&] {
        status = run_stage("ingest", [&] {
            require_file("input", ingest_input);
            if (ingest_out.empty() && !ingest_stats) throw ConfigError("nothing to do: give --out and/or --stats");
            const Corpus corpus = ingest_file(ingest_input);
            warn_skipped(global, corpus);
            if (!ingest_out.empty()) save_corpus_file(corpus, ingest_out);
            if (ingest_stats) {
                const auto s = corpus_stats(corpus);
                nlohmann::ordered_json j{{"tweet_count", s.tweet_count},
                                         {"retweet_count", s.retweet_count},
                                         {"participant_count", s.participant_count},
                                         {"vocabulary_size", s.vocabulary_size},
                                         {"hashtag_tweet_share", s.hashtag_tweet_share},
                                         {"skipped", corpus.diagnostics.skipped}};
                std::cout << j.dump() << '\n';
            }
        });
    });

    // ---- geolocate
    auto* geo_cmd = app.add_subcommand("geolocate", "Resolve profile locations against the gazetteer");
    std::string geo_corpus, geo_hierarchy, geo_aliases, geo_out;
    geo_cmd->add_option("--corpus", geo_corpus)->required();
    geo_cmd->add_option("--hierarchy", geo_hierarchy)->required();
    geo_cmd->add_option("--aliases", geo_aliases);
    geo_cmd->add_option("--out", geo_out)->required();
    geo_cmd->callback([&] {
        status = run_stage("geolocate", [&] {
            require_file("corpus", geo_corpus);
            require_file("hierarchy", geo_hierarchy);
            if (!geo_aliases.empty()) require_file("aliases", geo_aliases);
            const Corpus corpus = open_corpus(geo_corpus);
            const auto g = build_gazetteer(load_hierarchy_csv(geo_hierarchy),
                                           geo_aliases.empty() ? std::vector<Alias>{} : load_aliases_csv(geo_aliases));
            write_geolocation_csv(geo_out, g, resolve_users(g, corpus));
            info(global, "gazetteer: " + std::to_string(g.entries().size()) + " toponyms");
        });
    });

    // ---- demographics
    auto* demo_cmd = app.add_subcommand("demographics", "Gender classification and biography keywords");
    std::string demo_corpus, demo_male, demo_female, demo_stop, demo_out;
    BioAnalysisOptions demo_opts;
    demo_cmd->add_option("--corpus", demo_corpus)->required();
    demo_cmd->add_option("--male", demo_male)->required();
    demo_cmd->add_option("--female", demo_female)->required();
    demo_cmd->add_option("--stopwords", demo_stop)->required();
    demo_cmd->add_option("--top-k", demo_opts.top_k)->capture_default_str();
    demo_cmd->add_option("--keep-fraction", demo_opts.keep_fraction)->capture_default_str();
    demo_cmd->add_option("--damping", demo_opts.pagerank.damping)->capture_default_str();
    demo_cmd->add_option("--tolerance", demo_opts.pagerank.tolerance)->capture_default_str();
    demo_cmd->add_option("--max-iter", demo_opts.pagerank.max_iter)->capture_default_str();
    demo_cmd->add_option("--out", demo_out)->required();
    demo_cmd->callback([&] {
        status = run_stage("demographics", [&] {
            require_file("corpus", demo_corpus);
            require_file("male", demo_male);
            require_file("female", demo_female);
            require_file("stopwords", demo_stop);
            PipelineParams check;
            check.keep_fraction = demo_opts.keep_fraction;
            check.damping = demo_opts.pagerank.damping;
            check.tolerance = demo_opts.pagerank.tolerance;
            check.max_iter = demo_opts.pagerank.max_iter;
            check.top_k_bio = demo_opts.top_k;
            validate_params(check);
            const Corpus corpus = open_corpus(demo_corpus);
            const GenderLexicon lex{load_word_list(demo_male), load_word_list(demo_female)};
            const auto genders = classify_users(lex, corpus);
            const auto result = top_bio_keywords(bio_word_sets(corpus, genders, load_word_list(demo_stop)), genders, demo_opts);
            if (!result.pagerank_converged) std::cerr << "warning: pagerank did not converge\n";
            write_bio_keywords_csv(demo_out, result.keywords);
        });
    });

    // ---- temporal
    auto* temp_cmd = app.add_subcommand("temporal", "Registration series, peaks and deciles");
    std::string temp_corpus, temp_out;
    std::size_t temp_window = 7;
    temp_cmd->add_option("--corpus", temp_corpus)->required();
    temp_cmd->add_option("--window", temp_window)->capture_default_str();
    temp_cmd->add_option("--out", temp_out, "Series CSV; peaks and deciles are written alongside")->required();
    temp_cmd->callback([&] {
        status = run_stage("temporal", [&] {
            require_file("corpus", temp_corpus);
            if (temp_window < 1) throw ConfigError("--window must be at least 1");
            const Corpus corpus = open_corpus(temp_corpus);
            write_temporal_csvs(temporal_output_paths(temp_out), run_temporal(corpus, temp_window));
        });
    });

    // ---- content
    auto* content_cmd = app.add_subcommand("content", "Regional volume series, popular terms and TF-IDF");
    std::string content_corpus, content_regions;
    ContentOptions content_opts;
    content_cmd->add_option("--corpus", content_corpus)->required();
    content_cmd->add_option("--regions", content_regions, "CSV written by 'geolocate'")->required();
    content_cmd->add_option("--bin", content_opts.bin_width)->capture_default_str();
    content_cmd->add_option("--top-k", content_opts.top_k)->capture_default_str();
    content_cmd->add_option("--popular-k", content_opts.popular_k)->capture_default_str();
    content_cmd->callback([&] {
        status = run_stage("content", [&] {
            require_file("corpus", content_corpus);
            require_file("regions", content_regions);
            if (content_opts.bin_width <= 0) throw ConfigError("--bin must be positive");
            const auto dir = require_out_dir(global);
            const Corpus corpus = open_corpus(content_corpus);
            const auto assignment = read_region_assignment_csv(content_regions);
            write_content_outputs(dir, corpus, assignment, assigned_regions(assignment), content_opts);
        });
    });

    // ---- interactions
    auto* inter_cmd = app.add_subcommand("interactions", "Mention origin-destination matrix between regions");
    std::string inter_corpus, inter_regions;
    inter_cmd->add_option("--corpus", inter_corpus)->required();
    inter_cmd->add_option("--regions", inter_regions, "CSV written by 'geolocate'")->required();
    inter_cmd->callback([&] {
        status = run_stage("interactions", [&] {
            require_file("corpus", inter_corpus);
            require_file("regions", inter_regions);
            const auto dir = require_out_dir(global);
            const Corpus corpus = open_corpus(inter_corpus);
            const auto assignment = read_region_assignment_csv(inter_regions);
            const auto od = od_matrix(corpus, assignment, build_mention_index(corpus, assignment), assigned_regions(assignment));
            write_interaction_outputs(dir, od.matrix);
            info(global, "dropped mentions: " + std::to_string(od.dropped_mentions));
        });
    });

    // ---- hexbin
    auto* hex_cmd = app.add_subcommand("hexbin", "Hexagonal binning of geotagged tweets");
    std::string hex_corpus, hex_origin, hex_out;
    double hex_cell = 500.0;
    std::uint64_t hex_min = 20;
    hex_cmd->add_option("--corpus", hex_corpus)->required();
    hex_cmd->add_option("--origin", hex_origin, "lat,lon (default: median coordinates)");
    hex_cmd->add_option("--cell", hex_cell, "Centre-to-vertex size in metres")->capture_default_str();
    hex_cmd->add_option("--min-count", hex_min)->capture_default_str();
    hex_cmd->add_option("--out", hex_out)->required();
    hex_cmd->callback([&] {
        status = run_stage("hexbin", [&] {
            require_file("corpus", hex_corpus);
            if (!(hex_cell > 0.0)) throw ConfigError("--cell must be positive");
            if (hex_min < 1) throw ConfigError("--min-count must be at least 1");
            std::optional<LatLon> origin;
            if (!hex_origin.empty()) origin = parse_origin(hex_origin);
            const Corpus corpus = open_corpus(hex_corpus);
            std::vector<HexBin> bins;
            if (auto spec = hex_grid_for(corpus, origin, hex_cell)) bins = hexbin_aggregate(corpus, *spec, hex_min);
            write_hexbin_csv(hex_out, bins);
        });
    });

    // ---- run
    auto* run_cmd = app.add_subcommand("run", "Run the full pipeline");
    std::string run_corpus, run_hierarchy, run_aliases, run_male, run_female, run_stop, run_origin;
    std::optional<EpochSeconds> run_bin;
    std::optional<double> run_keep, run_damping, run_tol, run_cell;
    std::optional<int> run_max_iter;
    std::optional<std::size_t> run_window, run_top_bio, run_top_terms, run_popular;
    std::optional<std::uint64_t> run_min;
    run_cmd->add_option("--corpus", run_corpus);
    run_cmd->add_option("--hierarchy", run_hierarchy);
    run_cmd->add_option("--aliases", run_aliases);
    run_cmd->add_option("--male", run_male);
    run_cmd->add_option("--female", run_female);
    run_cmd->add_option("--stopwords", run_stop);
    run_cmd->add_option("--bin", run_bin);
    run_cmd->add_option("--keep-fraction", run_keep);
    run_cmd->add_option("--damping", run_damping);
    run_cmd->add_option("--tolerance", run_tol);
    run_cmd->add_option("--max-iter", run_max_iter);
    run_cmd->add_option("--window", run_window);
    run_cmd->add_option("--top-k-bio", run_top_bio);
    run_cmd->add_option("--top-k", run_top_terms);
    run_cmd->add_option("--popular-k", run_popular);
    run_cmd->add_option("--cell", run_cell);
    run_cmd->add_option("--min-count", run_min);
    run_cmd->add_option("--origin", run_origin);
    run_cmd->callback([&] {
        PipelineConfig config;
        try {
            if (!global.config.empty()) config = load_config(global.config);
            auto set = [](std::string& dst, const std::string& src) { if (!src.empty()) dst = src; };
            set(config.corpus, run_corpus);
            set(config.hierarchy, run_hierarchy);
            if (!run_aliases.empty()) config.aliases = run_aliases;
            set(config.male_names, run_male);
            set(config.female_names, run_female);
            set(config.stopwords, run_stop);
            set(config.out_dir, global.out_dir);
            auto& p = config.params;
            if (run_bin) p.bin_width = *run_bin;
            if (run_keep) p.keep_fraction = *run_keep;
            if (run_damping) p.damping = *run_damping;
            if (run_tol) p.tolerance = *run_tol;
            if (run_max_iter) p.max_iter = *run_max_iter;
            if (run_window) p.window = *run_window;
            if (run_top_bio) p.top_k_bio = *run_top_bio;
            if (run_top_terms) p.top_k_terms = *run_top_terms;
            if (run_popular) p.popular_k = *run_popular;
            if (run_cell) p.cell_size = *run_cell;
            if (run_min) p.min_count = *run_min;
            if (!run_origin.empty()) p.hex_origin = parse_origin(run_origin);
            validate_config(config);
        } catch (const Error& e) {
            std::cerr << "config error: " << e.what() << '\n';
            status = kExitConfigError;
            return;
        }
        try {
            const auto report = run_pipeline(config);
            info(global, "wrote " + std::to_string(report.outputs.size()) + " files and " + std::string(kReportFile) +
                             " to " + report.out_dir.string());
        } catch (const StageError& e) {
            std::cerr << "error: stage " << e.what() << '\n';
            status = kExitStageFailure;
        } catch (const ConfigError& e) {
            std::cerr << "config error: " << e.what() << '\n';
            status = kExitConfigError;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            status = kExitStageFailure;
        }
    });

    // ---- synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus with planted ground truth");
    SynthParams sp;
    std::string synth_hierarchy, synth_male, synth_female, synth_stop, synth_aliases;
    synth_cmd->add_option("--seed", sp.seed)->capture_default_str();
    synth_cmd->add_option("--users", sp.users)->capture_default_str();
    synth_cmd->add_option("--tweets", sp.tweets)->capture_default_str();
    synth_cmd->add_option("--regions", sp.regions)->capture_default_str();
    synth_cmd->add_option("--malformed", sp.malformed, "Truncated lines to inject")->capture_default_str();
    synth_cmd->add_option("--hierarchy", synth_hierarchy)->required();
    synth_cmd->add_option("--male", synth_male)->required();
    synth_cmd->add_option("--female", synth_female)->required();
    synth_cmd->add_option("--stopwords", synth_stop, "Recorded in the generated config.json");
    synth_cmd->add_option("--aliases", synth_aliases, "Recorded in the generated config.json");
    synth_cmd->callback([&] {
        status = run_stage("synth", [&] {
            require_file("hierarchy", synth_hierarchy);
            require_file("male", synth_male);
            require_file("female", synth_female);
            const fs::path dir = require_out_dir(global);
            const GenderLexicon lex{load_word_list(synth_male), load_word_list(synth_female)};
            std::ofstream corpus_out(dir / "corpus.jsonl", std::ios::binary);
            const auto manifest = generate_synthetic(sp, load_hierarchy_csv(synth_hierarchy), lex, corpus_out);
            corpus_out.close();
            std::ofstream(dir / "manifest.json", std::ios::binary) << manifest.to_json(sp).dump(2) << '\n';

            // Ready-to-run configuration next to the corpus.
            nlohmann::ordered_json cfg;
            cfg["inputs"] = nlohmann::ordered_json{{"corpus", "corpus.jsonl"},
                                                   {"hierarchy", fs::absolute(synth_hierarchy).string()},
                                                   {"male", fs::absolute(synth_male).string()},
                                                   {"female", fs::absolute(synth_female).string()}};
            if (!synth_stop.empty()) cfg["inputs"]["stopwords"] = fs::absolute(synth_stop).string();
            if (!synth_aliases.empty()) cfg["inputs"]["aliases"] = fs::absolute(synth_aliases).string();
            cfg["out_dir"] = "out";
            std::ofstream(dir / "config.json", std::ios::binary) << cfg.dump(2) << '\n';
            info(global, "wrote corpus.jsonl, manifest.json and config.json to " + dir.string());
        });
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    }
    return status;
}
