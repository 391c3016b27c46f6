#include <asyhplot/pipeline.hpp>

#include <CLI11.hpp>

#include <iostream>

using namespace asyhplot;

namespace {

struct Flags {
    std::vector<std::string> inputs;
    std::string out_dir;
    Index k = 0;
    std::string k_range;
    bool exhaustive = false;
    std::uint64_t budget = 1'000'000;
    int restarts = 20;
    std::uint64_t seed = 1;
    double threshold = 100.0;
    std::vector<std::string> formats;
};

void add_common(CLI::App& cmd, Flags& f) {
    cmd.add_option("--input", f.inputs,
                   "citation tables (table.json, cites.csv + meta.csv, or a directory holding them) or a rank dissimilarity CSV/JSON")
        ->required()
        ->expected(1, 2);
    cmd.add_option("--out-dir", f.out_dir, std::string("output directory (default: $") + kOutDirEnv + " or " + kDefaultOutDir + ")");
    cmd.add_option("--seed", f.seed, "seed for every random choice")->capture_default_str();
    cmd.add_option("--format", f.formats, "artifact formats to write; repeatable (default: all)")
        ->check(CLI::IsMember({"csv", "json", "svg"}))
        ->take_all();
}

void add_ada(CLI::App& cmd, Flags& f) {
    cmd.add_option("--k", f.k, "number of archetypoids to report (figures use this k)")->check(CLI::PositiveNumber);
    cmd.add_option("--k-range", f.k_range, "range of k for models and the screeplot, e.g. 1..10");
    cmd.add_flag("--exhaustive", f.exhaustive, "check every fitted model against full enumeration");
    cmd.add_option("--budget", f.budget, "maximum number of subsets the exhaustive check may enumerate")->capture_default_str();
}

void add_compare(CLI::App& cmd, Flags& f) {
    cmd.add_option("--restarts", f.restarts, "unfolding random starts per role order")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--threshold", f.threshold, "keep network links with dissimilarity <= T")->capture_default_str();
}

PipelineConfig to_config(const Flags& f) {
    PipelineConfig c;
    c.inputs = f.inputs;
    c.out_dir = f.out_dir;
    if (f.k > 0) c.k = f.k;
    if (!f.k_range.empty()) c.k_range = parse_k_range(f.k_range);
    c.exhaustive = f.exhaustive;
    c.budget = f.budget;
    c.restarts = f.restarts;
    c.seed = f.seed;
    c.threshold = f.threshold;
    c.formats = {f.formats.begin(), f.formats.end()};
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Asymmetric dissimilarity analysis: h-plots, archetypoids and comparison methods"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);
    app.footer(std::string("Exit status: 0 success, 1 unexpected failure, 2 usage error, 3 input error, 4 numerical failure.\n") + kOutDirEnv +
               " sets the default output directory.");

    Flags flags;
    std::vector<std::pair<CLI::App*, Stage>> commands;
    auto* ingest = app.add_subcommand("ingest", "citation counts -> rank dissimilarity matrix and summary");
    add_common(*ingest, flags);
    commands.emplace_back(ingest, Stage::Ingest);

    auto* hplot = app.add_subcommand("hplot", "h-plot embedding, goodness of fit and asymmetry report");
    add_common(*hplot, flags);
    commands.emplace_back(hplot, Stage::HPlot);

    auto* ada = app.add_subcommand("ada", "archetypoid models, screeplot and ternary plot");
    add_common(*ada, flags);
    add_ada(*ada, flags);
    commands.emplace_back(ada, Stage::Ada);

    auto* compare = app.add_subcommand("compare", "unfolding, citation network and silhouette comparison");
    add_common(*compare, flags);
    add_compare(*compare, flags);
    commands.emplace_back(compare, Stage::Compare);

    auto* pipeline = app.add_subcommand("pipeline", "ingest, hplot, ada and compare in sequence with a manifest");
    add_common(*pipeline, flags);
    add_ada(*pipeline, flags);
    add_compare(*pipeline, flags);
    commands.emplace_back(pipeline, Stage::Pipeline);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        for (const auto& [cmd, stage] : commands) {
            if (cmd->parsed()) run_command(stage, to_config(flags), std::cout, std::cerr);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "unexpected failure: " << e.what() << "\n";
        return kExitUnexpected;
    }
    return kExitOk;
}
