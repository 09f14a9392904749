#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "adbench/bench/cd_render.hpp"
#include "adbench/bench/config.hpp"
#include "adbench/bench/csv.hpp"
#include "adbench/bench/runner.hpp"
#include "adbench/corrupt/corruptions.hpp"
#include "adbench/eval/split.hpp"
#include "adbench/synth/generate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

namespace fs = std::filesystem;
using namespace adbench;

int cmd_run(const std::string& config_path, int threads, std::optional<Seed> seed,
            const std::string& out_dir) {
    auto config = bench::BenchmarkConfig::from_json_file(config_path);
    if (threads > 0) config.threads = threads;
    if (seed) config.seed = *seed;
    if (!out_dir.empty()) config.out_dir = out_dir;

    const auto table = bench::run_grid(config);
    bench::emit_results(table, config.out_dir);
    std::cout << "wrote " << table.records.size() << " records and " << table.skipped.size()
              << " skipped cells to " << config.out_dir << "\n";
    return kExitOk;
}

int cmd_synth(const std::string& input, const std::string& type_name, double alpha, Seed seed,
              const std::string& out) {
    const auto type = synth::anomaly_type_from_string(type_name);
    if (!type) {
        std::cerr << "unknown anomaly type '" << type_name << "'\n";
        return kExitUsage;
    }
    auto [x, y] = bench::load_csv(input);
    synth::SynthParams params = synth::SynthParams::for_type(*type, seed);
    if (alpha > 0.0) params.alpha = alpha;
    const auto [sx, sy] = synth::assemble_synthetic(x, y, params);
    bench::write_dataset_csv(out, sx, sy);
    std::cout << "wrote " << sx.rows() << " rows (" << sy.anomaly_count() << " anomalies) to "
              << out << "\n";
    return kExitOk;
}

int cmd_corrupt(const std::string& input, const std::string& mode_name, double level, Seed seed,
                const std::string& out) {
    const auto mode = bench::corruption_mode_from_string(mode_name);
    if (!mode) {
        std::cerr << "unknown corruption mode '" << mode_name << "'\n";
        return kExitUsage;
    }
    auto [x, y] = bench::load_csv(input);
    auto split = eval::stratified_split(x, y, 0.7, derive_seed(seed, {0}));

    const Seed cseed = derive_seed(seed, {1});
    switch (*mode) {
    case bench::CorruptionMode::Duplicate: {
        if (level < 1.0 || level > 6.0 || level != std::floor(level)) {
            std::cerr << "--level for duplicate must be an integer in [1, 6]\n";
            return kExitUsage;
        }
        split = corrupt::duplicate_anomalies(split, static_cast<std::size_t>(level), cseed);
        break;
    }
    case bench::CorruptionMode::Irrelevant:
        if (level < 0.0 || level > 0.5) {
            std::cerr << "--level for irrelevant must lie in [0, 0.5]\n";
            return kExitUsage;
        }
        split = corrupt::add_irrelevant_features(split, level, cseed);
        break;
    case bench::CorruptionMode::Flip:
        if (level < 0.0 || level > 0.5) {
            std::cerr << "--level for flip must lie in [0, 0.5]\n";
            return kExitUsage;
        }
        split = corrupt::flip_labels(split, level, cseed);
        break;
    }

    fs::path base(out);
    const std::string stem = base.stem().string();
    const std::string ext = base.has_extension() ? base.extension().string() : ".csv";
    const fs::path train_path = base.parent_path() / (stem + "_train" + ext);
    const fs::path test_path = base.parent_path() / (stem + "_test" + ext);
    bench::write_dataset_csv(train_path, split.train_x, split.train_y);
    bench::write_dataset_csv(test_path, split.test_x, split.test_y);
    std::cout << "wrote " << train_path.string() << " (" << split.train_x.rows() << " rows) and "
              << test_path.string() << " (" << split.test_x.rows() << " rows)\n";
    return kExitOk;
}

int cmd_cd(const std::string& results_path, const std::string& metric_name, double alpha,
           const std::string& out) {
    eval::Metric metric;
    if (metric_name == "aucroc")
        metric = eval::Metric::Aucroc;
    else if (metric_name == "aucpr")
        metric = eval::Metric::Aucpr;
    else {
        std::cerr << "unknown metric '" << metric_name << "'\n";
        return kExitUsage;
    }
    const auto records = bench::load_results_csv(results_path);
    const auto cd = bench::render_cd(records, metric, alpha, out);
    std::cout << "wrote " << out << " (" << cd.algorithms.size() << " algorithms, "
              << cd.cliques.size() << " cliques)\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"anomaly-detection benchmark toolkit"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a benchmark grid from a config file");
    std::string run_config;
    int run_threads = 0;
    std::optional<Seed> run_seed;
    std::string run_out;
    run->add_option("--config", run_config, "JSON config file")->required();
    run->add_option("--threads", run_threads, "worker threads (default: ADBENCH_THREADS or hardware)");
    run->add_option("--seed", run_seed, "master seed override");
    run->add_option("--out", run_out, "output directory override");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic-anomaly dataset");
    std::string synth_input, synth_type, synth_out;
    double synth_alpha = 0.0;
    Seed synth_seed = 0;
    synth_cmd->add_option("--input", synth_input, "seed dataset CSV")->required();
    synth_cmd->add_option("--type", synth_type, "local|global|dependency|clustered")->required();
    synth_cmd->add_option("--alpha", synth_alpha, "scaling parameter (default per type)")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", synth_seed, "generation seed");
    synth_cmd->add_option("--out", synth_out, "output CSV")->required();

    // corrupt
    auto* corrupt_cmd = app.add_subcommand("corrupt", "split 70/30 and corrupt a dataset");
    std::string corrupt_input, corrupt_mode, corrupt_out;
    double corrupt_level = 0.0;
    Seed corrupt_seed = 0;
    corrupt_cmd->add_option("--input", corrupt_input, "dataset CSV")->required();
    corrupt_cmd->add_option("--mode", corrupt_mode, "duplicate|irrelevant|flip")->required();
    corrupt_cmd->add_option("--level", corrupt_level, "factor (duplicate) or ratio")->required();
    corrupt_cmd->add_option("--seed", corrupt_seed, "corruption seed");
    corrupt_cmd->add_option("--out", corrupt_out, "output CSV base; emits _train/_test")->required();

    // cd
    auto* cd_cmd = app.add_subcommand("cd", "render a critical-difference diagram");
    std::string cd_results, cd_metric = "aucroc", cd_out;
    double cd_alpha = 0.05;
    cd_cmd->add_option("--results", cd_results, "results.csv from a run")->required();
    cd_cmd->add_option("--metric", cd_metric, "aucroc|aucpr");
    cd_cmd->add_option("--alpha", cd_alpha, "significance level");
    cd_cmd->add_option("--out", cd_out, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_config, run_threads, run_seed, run_out);
        if (synth_cmd->parsed())
            return cmd_synth(synth_input, synth_type, synth_alpha, synth_seed, synth_out);
        if (corrupt_cmd->parsed())
            return cmd_corrupt(corrupt_input, corrupt_mode, corrupt_level, corrupt_seed,
                               corrupt_out);
        if (cd_cmd->parsed()) return cmd_cd(cd_results, cd_metric, cd_alpha, cd_out);
    } catch (const BenchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
