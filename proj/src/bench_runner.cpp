#include "adbench/bench/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "adbench/bench/csv.hpp"
#include "adbench/core/rng.hpp"
#include "adbench/corrupt/corruptions.hpp"
#include "adbench/eval/metrics.hpp"
#include "adbench/eval/split.hpp"
#include "adbench/eval/timing.hpp"

namespace adbench::bench {

namespace {

// Seed-path stage tags; every random draw in the grid hangs off one of these.
enum Stage : std::uint64_t {
    kStagePrep = 0,
    kStageSynth = 1,
    kStageSplit = 2,
    kStageCorrupt = 3,
    kStageMask = 4,
    kStageFit = 5,
};

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> class_indices(
    const LabelVector& y) {
    std::vector<std::size_t> normal, anomaly;
    for (std::size_t i = 0; i < y.size(); ++i)
        (y[i] == 1 ? anomaly : normal).push_back(i);
    return {std::move(normal), std::move(anomaly)};
}

std::pair<DataMatrix, LabelVector> take_rows(const DataMatrix& x, const LabelVector& y,
                                             const std::vector<std::size_t>& rows) {
    DataMatrix out_x(rows.size(), x.cols());
    std::vector<int> out_y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto src = x.row(rows[i]);
        std::copy(src.begin(), src.end(), out_x.row(i).begin());
        out_y[i] = y[rows[i]];
    }
    return {std::move(out_x), LabelVector(std::move(out_y))};
}

// One point of the settings dimension: baseline, supervision level, synthetic
// anomaly type, or corruption.
struct Setting {
    std::string name;
    std::optional<double> gamma_l;
    std::optional<TypeSetting> synth_type;
    std::optional<CorruptionSetting> corruption;
};

std::string format_level(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

std::vector<Setting> enumerate_settings(const BenchmarkConfig& config) {
    std::vector<Setting> settings;
    settings.push_back({"default", std::nullopt, std::nullopt, std::nullopt});
    for (double g : config.supervision)
        settings.push_back({"gamma_" + format_level(g), g, std::nullopt, std::nullopt});
    for (const auto& t : config.anomaly_types) {
        Setting s;
        s.name = "type_" + std::string(synth::to_string(t.type));
        s.gamma_l = t.gamma_l;
        s.synth_type = t;
        settings.push_back(std::move(s));
    }
    for (const auto& c : config.corruptions) {
        Setting s;
        s.name = std::string(to_string(c.mode)) + "_" + format_level(c.level);
        s.gamma_l = c.gamma_l;
        s.corruption = c;
        settings.push_back(std::move(s));
    }
    return settings;
}

struct PreparedDataset {
    std::string id;
    DataMatrix x;
    LabelVector y;
    std::string error; // non-empty: failed to load/prep
};

struct CellOutput {
    std::vector<eval::MetricRecord> records;
    std::vector<SkipRecord> skipped;
};

int resolve_threads(int configured) {
    if (configured > 0) return configured;
    if (const char* env = std::getenv("ADBENCH_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace

std::pair<DataMatrix, LabelVector> prep_dataset(const DataMatrix& x, const LabelVector& y,
                                                Seed seed) {
    require(x.rows() == y.size(), Err::LengthMismatch, "labels do not match rows");
    const double ratio = y.anomaly_ratio();
    require(ratio < 0.40, Err::AnomalyRatioTooHigh,
            "anomaly ratio " + format_double(ratio) + " is not below 0.40");

    const std::size_t n = x.rows();
    if (n >= 1000 && n <= 10000) return {x, y};

    auto [normal_idx, anomaly_idx] = class_indices(y);
    Rng rng(seed);

    std::vector<std::size_t> rows;
    if (n < 1000) {
        // stratified bootstrap up to exactly 1,000, preserving the ratio
        const auto target_anomaly =
            static_cast<std::size_t>(std::llround(1000.0 * ratio));
        const std::size_t target_normal = 1000 - target_anomaly;
        for (std::size_t i = 0; i < target_normal; ++i)
            rows.push_back(normal_idx[rng.uniform_index(normal_idx.size())]);
        for (std::size_t i = 0; i < target_anomaly; ++i)
            rows.push_back(anomaly_idx[rng.uniform_index(anomaly_idx.size())]);
    } else {
        // stratified subsample without replacement down to exactly 10,000
        const auto target_anomaly =
            static_cast<std::size_t>(std::llround(10000.0 * ratio));
        const std::size_t target_normal = 10000 - target_anomaly;
        rng.shuffle(normal_idx);
        rng.shuffle(anomaly_idx);
        rows.assign(normal_idx.begin(), normal_idx.begin() + target_normal);
        rows.insert(rows.end(), anomaly_idx.begin(),
                    anomaly_idx.begin() + std::min(target_anomaly, anomaly_idx.size()));
    }
    rng.shuffle(rows);
    return take_rows(x, y, rows);
}

namespace {

CellOutput run_cell(const BenchmarkConfig& config, const PreparedDataset& dataset,
                    std::size_t dataset_idx, const Setting& setting, std::size_t setting_idx,
                    int repeat) {
    CellOutput out;
    const auto rep = static_cast<std::uint64_t>(repeat);
    const auto skip_all = [&](const std::string& reason) {
        for (const auto& alg : config.algorithms)
            out.skipped.push_back({dataset.id, std::string(detectors::to_string(alg.name)),
                                   setting.name, repeat, reason});
    };

    DataMatrix x = dataset.x;
    LabelVector y = dataset.y;
    SplitDataset split;
    LabelMask mask;
    LabelVector y_eff;
    try {
        if (setting.synth_type) {
            synth::SynthParams params;
            params.anomaly_type = setting.synth_type->type;
            params.alpha = setting.synth_type->alpha;
            params.seed = derive_seed(config.seed, {kStageSynth, dataset_idx, setting_idx, rep});
            auto generated = synth::assemble_synthetic(x, y, params);
            x = std::move(generated.first);
            y = std::move(generated.second);
        }

        // the split seed is setting-independent so settings sharing a repeat
        // compare against the same partition
        split = eval::stratified_split(x, y, config.train_frac,
                                       derive_seed(config.seed, {kStageSplit, dataset_idx, rep}));

        if (setting.corruption) {
            const Seed cseed =
                derive_seed(config.seed, {kStageCorrupt, dataset_idx, setting_idx, rep});
            switch (setting.corruption->mode) {
            case CorruptionMode::Duplicate:
                split = corrupt::duplicate_anomalies(
                    split, static_cast<std::size_t>(setting.corruption->level), cseed);
                break;
            case CorruptionMode::Irrelevant:
                split = corrupt::add_irrelevant_features(split, setting.corruption->level, cseed);
                break;
            case CorruptionMode::Flip:
                split = corrupt::flip_labels(split, setting.corruption->level, cseed);
                break;
            }
        }

        if (setting.gamma_l) {
            mask = eval::subsample_labels(
                split.train_y, *setting.gamma_l,
                derive_seed(config.seed, {kStageMask, dataset_idx, setting_idx, rep}));
            y_eff = mask.effective_labels();
        }
    } catch (const BenchError& e) {
        skip_all(std::string(e.name()));
        return out;
    } catch (const std::exception&) {
        skip_all("InternalError");
        return out;
    }

    for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
        const auto& spec = config.algorithms[a];
        const std::string alg_name(detectors::to_string(spec.name));
        const auto supervision = detectors::supervision_of(spec.name);

        if (supervision != detectors::Supervision::Unsupervised && !setting.gamma_l) {
            out.skipped.push_back(
                {dataset.id, alg_name, setting.name, repeat, "NoSupervisionInSetting"});
            continue;
        }
        if (supervision == detectors::Supervision::Unsupervised && setting.gamma_l &&
            !setting.synth_type && !setting.corruption) {
            // pure supervision settings replicate the default split for
            // label-blind detectors
            out.skipped.push_back(
                {dataset.id, alg_name, setting.name, repeat, "LabelBlindInSupervisionSetting"});
            continue;
        }

        try {
            detectors::FitContext ctx;
            if (setting.gamma_l) {
                ctx.labels = &y_eff;
                ctx.mask = &mask;
            }
            const Seed fit_seed =
                derive_seed(config.seed, {kStageFit, dataset_idx, setting_idx, rep, a});

            detectors::ModelPtr model;
            ScoreVector scores;
            const auto [fit_ms, score_ms] = eval::measure_timing(
                [&] { model = detectors::fit_detector(spec, split.train_x, ctx, fit_seed); },
                [&] { scores = model->score(split.test_x); });

            eval::MetricRecord record;
            record.dataset = dataset.id;
            record.algorithm = alg_name;
            record.setting = setting.name;
            record.repeat_index = repeat;
            record.aucroc = eval::aucroc(scores, split.test_y);
            record.aucpr = eval::aucpr(scores, split.test_y);
            record.fit_ms = config.record_timings ? fit_ms : 0.0;
            record.score_ms = config.record_timings ? score_ms : 0.0;
            out.records.push_back(std::move(record));
        } catch (const BenchError& e) {
            out.skipped.push_back(
                {dataset.id, alg_name, setting.name, repeat, std::string(e.name())});
        } catch (const std::exception&) {
            out.skipped.push_back({dataset.id, alg_name, setting.name, repeat, "InternalError"});
        }
    }
    return out;
}

} // namespace

ResultsTable run_grid(const BenchmarkConfig& config) {
    config.validate();

    // load and prep every dataset once
    std::vector<PreparedDataset> datasets;
    std::map<std::string, int> stem_count;
    for (std::size_t d = 0; d < config.datasets.size(); ++d) {
        const std::filesystem::path path(config.datasets[d]);
        PreparedDataset prepared;
        std::string id = path.stem().string();
        const int dup = stem_count[id]++;
        if (dup > 0) id += "#" + std::to_string(dup);
        prepared.id = id;
        try {
            auto [x, y] = load_csv(path);
            auto [px, py] = prep_dataset(x, y, derive_seed(config.seed, {kStagePrep, d}));
            prepared.x = std::move(px);
            prepared.y = std::move(py);
        } catch (const BenchError& e) {
            prepared.error = e.name();
        }
        datasets.push_back(std::move(prepared));
    }

    const std::vector<Setting> settings = enumerate_settings(config);

    struct Cell {
        std::size_t dataset_idx;
        std::size_t setting_idx;
        int repeat;
    };
    std::vector<Cell> cells;
    for (std::size_t d = 0; d < datasets.size(); ++d)
        for (std::size_t s = 0; s < settings.size(); ++s)
            for (int r = 0; r < config.n_repeats; ++r) cells.push_back({d, s, r});

    std::vector<CellOutput> outputs(cells.size());
    const int n_threads = std::min<int>(resolve_threads(config.threads),
                                        static_cast<int>(cells.size()) > 0
                                            ? static_cast<int>(cells.size())
                                            : 1);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& cell = cells[i];
            const PreparedDataset& dataset = datasets[cell.dataset_idx];
            if (!dataset.error.empty()) {
                for (const auto& alg : config.algorithms)
                    outputs[i].skipped.push_back({dataset.id,
                                                  std::string(detectors::to_string(alg.name)),
                                                  settings[cell.setting_idx].name, cell.repeat,
                                                  dataset.error});
                continue;
            }
            outputs[i] = run_cell(config, dataset, cell.dataset_idx, settings[cell.setting_idx],
                                  cell.setting_idx, cell.repeat);
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    ResultsTable table;
    for (auto& out : outputs) {
        for (auto& r : out.records) table.records.push_back(std::move(r));
        for (auto& s : out.skipped) table.skipped.push_back(std::move(s));
    }
    const auto record_key = [](const eval::MetricRecord& r) {
        return std::tie(r.dataset, r.algorithm, r.setting, r.repeat_index);
    };
    std::sort(table.records.begin(), table.records.end(),
              [&](const auto& a, const auto& b) { return record_key(a) < record_key(b); });
    const auto skip_key = [](const SkipRecord& r) {
        return std::tie(r.dataset, r.algorithm, r.setting, r.repeat_index);
    };
    std::sort(table.skipped.begin(), table.skipped.end(),
              [&](const auto& a, const auto& b) { return skip_key(a) < skip_key(b); });

    for (std::size_t i = 1; i < table.records.size(); ++i)
        require(record_key(table.records[i - 1]) < record_key(table.records[i]),
                Err::DegenerateTable, "duplicate (dataset, algorithm, setting, repeat) key");
    return table;
}

void emit_results(const ResultsTable& table, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);

    {
        std::ofstream out(out_dir / "results.csv", std::ios::binary);
        require(out.good(), Err::IoError, "cannot write results.csv");
        out << "dataset,algorithm,setting,repeat,aucroc,aucpr,fit_ms,score_ms\n";
        for (const auto& r : table.records)
            out << r.dataset << ',' << r.algorithm << ',' << r.setting << ',' << r.repeat_index
                << ',' << format_double(r.aucroc) << ',' << format_double(r.aucpr) << ','
                << format_double(r.fit_ms) << ',' << format_double(r.score_ms) << '\n';
    }
    {
        std::ofstream out(out_dir / "skipped.csv", std::ios::binary);
        require(out.good(), Err::IoError, "cannot write skipped.csv");
        out << "dataset,algorithm,setting,repeat,reason\n";
        for (const auto& s : table.skipped)
            out << s.dataset << ',' << s.algorithm << ',' << s.setting << ',' << s.repeat_index
                << ',' << s.reason << '\n';
    }

    // summary: per-(dataset, algorithm, setting) means with per-dataset ranks,
    // plus ALL rows carrying the cross-dataset averages
    std::ofstream out(out_dir / "summary.csv", std::ios::binary);
    require(out.good(), Err::IoError, "cannot write summary.csv");
    out << "dataset,algorithm,setting,mean_aucroc,mean_aucpr,rank_aucroc,rank_aucpr\n";

    std::vector<std::string> setting_order;
    for (const auto& r : table.records)
        if (std::find(setting_order.begin(), setting_order.end(), r.setting) ==
            setting_order.end())
            setting_order.push_back(r.setting);
    std::sort(setting_order.begin(), setting_order.end());

    for (const auto& setting : setting_order) {
        std::vector<eval::MetricRecord> filtered;
        for (const auto& r : table.records)
            if (r.setting == setting) filtered.push_back(r);
        const auto roc = eval::rank_matrix(filtered, eval::Metric::Aucroc);
        const auto pr = eval::rank_matrix(filtered, eval::Metric::Aucpr);
        for (std::size_t d = 0; d < roc.datasets.size(); ++d)
            for (std::size_t a = 0; a < roc.algorithms.size(); ++a)
                out << roc.datasets[d] << ',' << roc.algorithms[a] << ',' << setting << ','
                    << format_double(roc.means[d][a]) << ',' << format_double(pr.means[d][a])
                    << ',' << format_double(roc.ranks[d][a]) << ','
                    << format_double(pr.ranks[d][a]) << '\n';
        for (std::size_t a = 0; a < roc.algorithms.size(); ++a) {
            double mean_roc = 0.0, mean_pr = 0.0;
            for (std::size_t d = 0; d < roc.datasets.size(); ++d) {
                mean_roc += roc.means[d][a];
                mean_pr += pr.means[d][a];
            }
            const double nd = static_cast<double>(roc.datasets.size());
            out << "ALL," << roc.algorithms[a] << ',' << setting << ','
                << format_double(mean_roc / nd) << ',' << format_double(mean_pr / nd) << ','
                << format_double(roc.average_rank[a]) << ','
                << format_double(pr.average_rank[a]) << '\n';
        }
    }
}

std::vector<eval::MetricRecord> load_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), Err::IoError, "cannot open " + path.string());
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), Err::ParseError, "empty results file");
    require(line == "dataset,algorithm,setting,repeat,aucroc,aucpr,fit_ms,score_ms",
            Err::ParseError, "unexpected results.csv header");

    std::vector<eval::MetricRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        eval::MetricRecord r;
        std::string cell;
        auto next_cell = [&]() {
            require(static_cast<bool>(std::getline(ss, cell, ',')), Err::ParseError,
                    "short row in results.csv");
            return cell;
        };
        auto next_double = [&]() {
            const std::string c = next_cell();
            double v = 0.0;
            const auto [p, ec2] = std::from_chars(c.data(), c.data() + c.size(), v);
            require(ec2 == std::errc() && p == c.data() + c.size(), Err::ParseError,
                    "bad numeric cell '" + c + "' in results.csv");
            return v;
        };
        r.dataset = next_cell();
        r.algorithm = next_cell();
        r.setting = next_cell();
        r.repeat_index = static_cast<int>(next_double());
        r.aucroc = next_double();
        r.aucpr = next_double();
        r.fit_ms = next_double();
        r.score_ms = next_double();
        records.push_back(std::move(r));
    }
    return records;
}

} // namespace adbench::bench
