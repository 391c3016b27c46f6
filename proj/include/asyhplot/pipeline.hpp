#pragma once

// Command orchestration behind the asyhplot tool: input resolution, the four
// analysis stages, artifact writing and the run manifest.

#include "asyhplot/archetypoids.hpp"
#include "asyhplot/comparators/kmedoids.hpp"
#include "asyhplot/comparators/network.hpp"
#include "asyhplot/comparators/unfolding.hpp"
#include "asyhplot/core/error.hpp"
#include "asyhplot/core/rng.hpp"
#include "asyhplot/data_ingest.hpp"
#include "asyhplot/hplot.hpp"
#include "asyhplot/io/tables.hpp"
#include "asyhplot/report/export.hpp"
#include "asyhplot/report/figures.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#ifndef ASYHPLOT_VERSION
#define ASYHPLOT_VERSION "0.0.0"
#endif

namespace asyhplot {

inline constexpr const char* kToolVersion = ASYHPLOT_VERSION;
inline constexpr const char* kOutDirEnv = "ASYHPLOT_OUT_DIR";
inline constexpr const char* kDefaultOutDir = "asyhplot-out";

enum class Stage { Ingest, HPlot, Ada, Compare, Pipeline };

inline std::string stage_name(Stage s) {
    switch (s) {
        case Stage::Ingest: return "ingest";
        case Stage::HPlot: return "hplot";
        case Stage::Ada: return "ada";
        case Stage::Compare: return "compare";
        case Stage::Pipeline: return "pipeline";
    }
    return "?";
}

struct KRange {
    Index first = 0;
    Index last = 0;
};

/// Parses "A..B".
inline KRange parse_k_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) throw InputError("--k-range: expected A..B, got '" + text + "'");
    try {
        std::size_t used_a = 0, used_b = 0;
        const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
        KRange r{std::stol(a, &used_a), std::stol(b, &used_b)};
        if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument("trailing");
        if (r.first < 1 || r.last < r.first) throw InputError("--k-range: need 1 <= A <= B, got '" + text + "'");
        return r;
    } catch (const InputError&) {
        throw;
    } catch (const std::exception&) {
        throw InputError("--k-range: expected A..B with integers, got '" + text + "'");
    }
}

struct PipelineConfig {
    std::vector<std::string> inputs;
    std::string out_dir;
    std::optional<Index> k;
    std::optional<KRange> k_range;
    bool exhaustive = false;
    std::uint64_t budget = 1'000'000;
    int restarts = 20;
    std::uint64_t seed = 1;
    double threshold = 100.0;
    std::set<std::string> formats;  // empty means csv, json and svg

    bool wants(const std::string& format) const { return formats.empty() || formats.count(format) > 0; }

    void validate() const {
        if (inputs.empty()) throw InputError("no input given (use --input)");
        if (inputs.size() > 2) throw InputError("at most two --input values are accepted (cites.csv and meta.csv)");
        for (const auto& path : inputs) {
            if (!std::filesystem::exists(path)) throw InputError("input '" + path + "' does not exist");
        }
        for (const auto& f : formats) {
            if (f != "csv" && f != "json" && f != "svg") throw InputError("--format must be csv, json or svg, got '" + f + "'");
        }
        if (k && *k < 1) throw InputError("--k must be at least 1");
        if (restarts < 1) throw InputError("--restarts must be at least 1");
        if (!(threshold > 0.0)) throw InputError("--threshold must be positive");
        if (budget < 1) throw InputError("--budget must be at least 1");
    }
};

inline std::string resolve_out_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    return kDefaultOutDir;
}

namespace detail {

inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Files an input path stands for, in a fixed order.
inline std::vector<std::filesystem::path> input_files(const std::vector<std::string>& inputs) {
    std::vector<std::filesystem::path> files;
    for (const auto& in : inputs) {
        const std::filesystem::path p(in);
        if (std::filesystem::is_directory(p)) {
            for (const char* name : {"table.json", "cites.csv", "meta.csv", "dissimilarity.csv"})
                if (std::filesystem::exists(p / name)) files.push_back(p / name);
        } else {
            files.push_back(p);
        }
    }
    return files;
}

}  // namespace detail

/// Hash of everything that determines the numeric outputs: tool version,
/// analysis parameters and the bytes (not the paths) of the input files. The
/// output directory is excluded so identical runs in different places agree.
inline std::string config_hash(const PipelineConfig& config) {
    nlohmann::json canon;
    canon["tool_version"] = kToolVersion;
    canon["k"] = config.k ? nlohmann::json(*config.k) : nlohmann::json();
    canon["k_range"] = config.k_range ? nlohmann::json{config.k_range->first, config.k_range->last} : nlohmann::json();
    canon["exhaustive"] = config.exhaustive;
    canon["budget"] = config.budget;
    canon["restarts"] = config.restarts;
    canon["seed"] = config.seed;
    canon["threshold"] = config.threshold;
    canon["formats"] = config.formats.empty() ? std::set<std::string>{"csv", "json", "svg"} : config.formats;
    auto digests = nlohmann::json::array();
    for (const auto& file : detail::input_files(config.inputs)) digests.push_back(detail::hex64(detail::fnv1a(detail::read_bytes(file))));
    canon["inputs"] = digests;
    return detail::hex64(detail::fnv1a(canon.dump()));
}

/// What the inputs resolve to: raw citation counts or a ready rank matrix.
struct ResolvedInput {
    std::optional<CitationTable> table;
    std::optional<AsymmetricDissimilarityMatrix> dissimilarity;
};

inline ResolvedInput resolve_input(const PipelineConfig& config) {
    ResolvedInput out;
    if (config.inputs.size() == 2) {
        out.table = io::load_citation_table(config.inputs[0], config.inputs[1]);
        return out;
    }
    const std::filesystem::path p(config.inputs.front());
    if (std::filesystem::is_directory(p)) {
        if (std::filesystem::exists(p / "table.json")) {
            out.table = io::load_citation_table((p / "table.json").string());
        } else if (std::filesystem::exists(p / "cites.csv") && std::filesystem::exists(p / "meta.csv")) {
            out.table = io::load_citation_table((p / "cites.csv").string(), (p / "meta.csv").string());
        } else if (std::filesystem::exists(p / "dissimilarity.csv")) {
            out.dissimilarity = io::load_dissimilarity((p / "dissimilarity.csv").string());
        } else {
            throw InputError("directory '" + p.string() + "' holds neither table.json, cites.csv + meta.csv nor dissimilarity.csv");
        }
        return out;
    }
    if (p.extension() == ".json") {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(detail::read_bytes(p));
        } catch (const nlohmann::json::exception& e) {
            throw InputError(p.string() + ": " + e.what());
        }
        if (j.is_object() && j.contains("cites")) {
            out.table = io::citation_table_from_json(j, p.string());
        } else {
            out.dissimilarity = io::dissimilarity_from_json(j, p.string());
        }
        return out;
    }
    out.dissimilarity = io::load_dissimilarity(p.string());
    return out;
}

/// Tracks the artifacts a command writes into its output directory.
class Run {
public:
    Run(PipelineConfig config, std::ostream& out, std::ostream& err)
        : config_(std::move(config)), out_(out), err_(err), dir_(resolve_out_dir(config_.out_dir)) {
        config_.validate();
        prov_ = {config_hash(config_), config_.seed};
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw InputError("cannot create output directory '" + dir_.string() + "': " + ec.message());
    }

    const PipelineConfig& config() const { return config_; }
    const report::Provenance& provenance() const { return prov_; }
    const std::filesystem::path& dir() const { return dir_; }
    const std::vector<std::string>& artifacts() const { return artifacts_; }
    std::ostream& out() { return out_; }
    std::ostream& err() { return err_; }

    /// Writes `name` when its format is enabled; .dot counts as csv.
    void write(const std::string& name, const std::string& content) {
        auto ext = std::filesystem::path(name).extension().string();
        if (!ext.empty()) ext.erase(0, 1);
        if (!config_.wants(ext == "dot" ? "csv" : ext)) return;
        write_always(name, content);
    }

    void write_always(const std::string& name, const std::string& content) {
        const auto path = dir_ / name;
        std::ofstream file(path, std::ios::binary);
        if (!file) throw InputError("cannot write '" + path.string() + "'");
        file << content;
        if (!file) throw InputError("failed writing '" + path.string() + "'");
        if (std::find(artifacts_.begin(), artifacts_.end(), name) == artifacts_.end()) artifacts_.push_back(name);
    }

    template <typename Fn>
    void write_stream(const std::string& name, Fn&& fn) {
        std::ostringstream buf;
        fn(buf);
        write(name, buf.str());
    }

    /// Manifest with the artifacts written so far; `failure` marks a partial run.
    void write_manifest(Stage command, const std::optional<std::pair<std::string, std::string>>& failure = std::nullopt) {
        nlohmann::json m{{"tool_version", kToolVersion},
                         {"config_hash", prov_.config_hash},
                         {"seed", prov_.seed},
                         {"command", stage_name(command)},
                         {"status", failure ? "failed" : "complete"},
                         {"artifacts", artifacts_}};
        if (failure) {
            m["failed_stage"] = failure->first;
            m["error"] = failure->second;
        }
        const auto path = dir_ / "manifest.json";
        std::ofstream(path, std::ios::binary) << report::dump(m);
    }

private:
    PipelineConfig config_;
    std::ostream& out_;
    std::ostream& err_;
    std::filesystem::path dir_;
    report::Provenance prov_;
    std::vector<std::string> artifacts_;
};

// ---------------------------------------------------------------- stages

inline AsymmetricDissimilarityMatrix stage_ingest(Run& run, const CitationTable& table) {
    table.validate();
    if (table.size() < 2) throw InputError("citation table has " + std::to_string(table.size()) + " object; at least 2 are required");
    const auto delta = rank_transform(compute_relatedness(table));
    const auto summary = summarize_ranks(delta);
    run.write_always("dissimilarity.csv", [&] {
        std::ostringstream s;
        io::write_dissimilarity_csv(s, delta, run.provenance().meta());
        return s.str();
    }());
    run.write("ingest_summary.json", report::dump(report::ingest_summary_json(delta, run.provenance())));
    run.out() << "objects = " << delta.size() << ", max rank = " << io::format_number(delta.max_rank)
              << ", undefined cells = " << summary.undefined_cells << ", tie groups = " << summary.tie_groups << "\n";
    return delta;
}

inline HPlotEmbedding stage_hplot(Run& run, const AsymmetricDissimilarityMatrix& delta) {
    const auto emb = hplot_embed(delta, 2);
    char line[64];
    std::snprintf(line, sizeof line, "gof = %.3f\n", emb.gof);
    run.out() << line;
    const auto asym = asymmetry_scores(emb);
    run.write_stream("embedding.csv", [&](std::ostream& s) { report::write_embedding_csv(s, emb, run.provenance()); });
    run.write("embedding.json", report::dump(report::embedding_json(emb, run.provenance())));
    run.write_stream("asymmetry.csv", [&](std::ostream& s) { report::write_asymmetry_csv(s, asym, run.provenance()); });
    run.write("hplot.svg", report::hplot_figure(emb));
    run.out() << "most asymmetric:";
    for (std::size_t r = 0; r < std::min<std::size_t>(3, asym.size()); ++r) run.out() << ' ' << asym[r].index + 1;
    run.out() << "\n";
    return emb;
}

inline std::vector<AdaModel> stage_ada(Run& run, const HPlotEmbedding& emb) {
    const auto data = combine_profiles(emb);
    const Index n = data.rows();
    const auto& cfg = run.config();
    KRange range = cfg.k_range ? *cfg.k_range : (cfg.k ? KRange{1, *cfg.k} : KRange{1, std::min<Index>(10, n)});
    if (cfg.k) {
        range.first = std::min(range.first, *cfg.k);
        range.last = std::max(range.last, *cfg.k);
    }
    if (range.last > n)
        throw InputError("k = " + std::to_string(range.last) + " exceeds the number of objects (" + std::to_string(n) + ")");
    if (cfg.exhaustive) {
        for (Index k = range.first; k <= range.last; ++k) {
            if (combinations_capped(n, k, cfg.budget) > cfg.budget)
                throw InputError("exhaustive check for k = " + std::to_string(k) + " needs more than " + std::to_string(cfg.budget) +
                                 " subsets; raise --budget or drop --exhaustive");
        }
    }

    run.write_stream("profiles.csv", [&](std::ostream& s) { report::write_profiles_csv(s, data, run.provenance()); });
    std::vector<AdaModel> models;
    Screeplot plot;
    double envelope = std::numeric_limits<double>::infinity();
    for (Index k = range.first; k <= range.last; ++k) {
        auto model = ada_fit(data, k);
        envelope = std::min(envelope, model.rss);
        plot.points.push_back({k, model.rss, envelope, model.archetypoids});
        char name[32];
        std::snprintf(name, sizeof name, "model_k%02ld.json", static_cast<long>(k));
        run.write(name, report::dump(report::model_json(model, data.labels, run.provenance())));
        run.out() << "k = " << k << ": archetypoids";
        for (Index idx : model.archetypoids) run.out() << ' ' << idx + 1;
        run.out() << ", rss = " << io::format_number(model.rss) << "\n";
        if (model.iteration_capped) run.err() << "warning: swap search for k = " << k << " hit its iteration cap\n";
        if (cfg.exhaustive) {
            const auto best = ada_exhaustive(data, k, cfg.budget);
            const bool agree = std::abs(best.rss - model.rss) <= 1e-9 * std::max(1.0, best.rss);
            run.out() << "exhaustive k = " << k << ": " << (agree ? "agree" : "DISAGREE") << " (optimum rss = " << io::format_number(best.rss)
                      << ")\n";
        }
        models.push_back(std::move(model));
    }
    plot.elbow = suggest_elbow(plot.points);
    run.write_stream("screeplot.csv", [&](std::ostream& s) { report::write_screeplot_csv(s, plot, run.provenance()); });
    run.write("screeplot.svg", report::screeplot_figure(plot));
    if (plot.elbow) run.out() << "suggested elbow: k = " << *plot.elbow << "\n";

    const Index focus = cfg.k ? *cfg.k : (plot.elbow ? *plot.elbow : range.last);
    const auto& chosen = models[static_cast<std::size_t>(focus - range.first)];
    run.write("hplot_archetypoids.svg", report::hplot_figure(emb, chosen.archetypoids));
    if (focus == 3) run.write("ternary.svg", report::ternary_figure(chosen, data.labels));
    return models;
}

inline void stage_compare(Run& run, const AsymmetricDissimilarityMatrix& delta, const HPlotEmbedding& emb) {
    const auto& cfg = run.config();
    UnfoldingOptions uopt;
    uopt.restarts = cfg.restarts;
    uopt.seed = derive_seed(cfg.seed, 1);
    const auto rows = unfolding_fit(delta, RoleOrder::RowsAsIndividuals, uopt);
    uopt.seed = derive_seed(cfg.seed, 2);
    const auto cols = unfolding_fit(delta, RoleOrder::ColumnsAsIndividuals, uopt);
    run.out() << "unfolding stress: rows as individuals = " << io::format_number(rows.stress)
              << ", columns as individuals = " << io::format_number(cols.stress) << "\n";
    run.write_stream("unfolding.csv", [&](std::ostream& s) { report::write_unfolding_csv(s, {&rows, &cols}, run.provenance()); });
    run.write("unfolding.json", report::dump({{"meta", run.provenance().json()},
                                              {"solutions", {report::unfolding_json(rows), report::unfolding_json(cols)}}}));
    run.write("unfolding.svg", report::unfolding_figure(rows, cols));

    auto graph = build_network(delta, cfg.threshold);
    graph.layout = spring_layout(graph, derive_seed(cfg.seed, 3));
    std::size_t links = 0;
    for (const auto& e : graph.edges) links += e.from != e.to;
    if (links == 0) run.err() << "warning: no links between objects at threshold " << io::format_number(cfg.threshold) << "\n";
    run.write_stream("network.dot", [&](std::ostream& s) { report::write_graph_dot(s, graph, run.provenance()); });
    run.write("network.json", report::dump(report::graph_json(graph, run.provenance())));
    run.write("network.svg", report::network_figure(graph));
    run.out() << "network: " << graph.edges.size() << " edges at threshold " << io::format_number(cfg.threshold) << "; detached:";
    for (Index v : detached_nodes(graph)) run.out() << ' ' << v + 1;
    run.out() << "\n";

    const auto data = combine_profiles(emb);
    if (data.rows() >= 3) {
        const auto clusterings = kmedoids_silhouette(data, 2, std::min<Index>(8, data.rows() - 1));
        run.write_stream("silhouette.csv", [&](std::ostream& s) { report::write_silhouette_csv(s, clusterings, run.provenance()); });
        const auto best = std::max_element(clusterings.begin(), clusterings.end(),
                                           [](const auto& a, const auto& b) { return a.average_silhouette < b.average_silhouette; });
        char line[96];
        std::snprintf(line, sizeof line, "silhouette: best k = %ld (%.3f)\n", static_cast<long>(best->k), best->average_silhouette);
        run.out() << line;
        for (const auto& c : clusterings)
            if (c.degenerate) run.err() << "warning: silhouette for k = " << c.k << " had coincident points (scored 0)\n";
    }
}

// ---------------------------------------------------------------- commands

namespace detail {

inline AsymmetricDissimilarityMatrix dissimilarity_for(Run& run, const ResolvedInput& input) {
    if (input.dissimilarity) return *input.dissimilarity;
    return stage_ingest(run, *input.table);
}

}  // namespace detail

/// Runs `command` end to end. The manifest is always written; on failure it
/// is marked failed with the stage and message, and the error is rethrown.
inline void run_command(Stage command, const PipelineConfig& config, std::ostream& out, std::ostream& err) {
    Run run(config, out, err);
    std::string stage = "input";
    try {
        const auto input = resolve_input(run.config());
        if (command == Stage::Ingest) {
            if (!input.table) throw InputError("ingest needs citation tables (table.json or cites.csv + meta.csv)");
            stage = "ingest";
            stage_ingest(run, *input.table);
        } else {
            stage = input.table ? "ingest" : "input";
            const auto delta = detail::dissimilarity_for(run, input);
            stage = "hplot";
            const auto emb = stage_hplot(run, delta);
            if (command == Stage::Ada || command == Stage::Pipeline) {
                stage = "ada";
                stage_ada(run, emb);
            }
            if (command == Stage::Compare || command == Stage::Pipeline) {
                stage = "compare";
                stage_compare(run, delta, emb);
            }
        }
    } catch (const std::exception& e) {
        run.write_manifest(command, std::make_pair(stage, std::string(e.what())));
        throw;
    }
    run.write_manifest(command);
}

/// Process exit statuses.
enum ExitCode : int { kExitOk = 0, kExitUnexpected = 1, kExitUsage = 2, kExitInput = 3, kExitNumerical = 4 };

}  // namespace asyhplot
