#include <gtest/gtest.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "adbench/bench/cd_render.hpp"
#include "adbench/bench/config.hpp"
#include "adbench/bench/csv.hpp"
#include "adbench/bench/runner.hpp"
#include "adbench/core/rng.hpp"
#include "adbench/eval/stats.hpp"

using namespace adbench;
using namespace adbench::bench;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("adbench_test_" + std::to_string(Rng(std::random_device{}()).next_u64()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_blob_dataset(const fs::path& dir, const std::string& name, std::size_t n,
                            double ratio, double separation, Seed seed) {
    Rng rng(seed);
    std::ostringstream csv;
    csv << "f0,f1,label\n";
    const auto n_anom = static_cast<std::size_t>(ratio * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const bool anomaly = i < n_anom;
        const double c = anomaly ? separation : 0.0;
        csv << format_double(rng.normal(c, 1.0)) << ',' << format_double(rng.normal(c, 1.0))
            << ',' << (anomaly ? 1 : 0) << '\n';
    }
    const fs::path p = dir / name;
    write_text(p, csv.str());
    return p;
}

} // namespace

TEST(FormatDouble, ShortestRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.6789, -0.0, 5.0}) {
        const std::string s = format_double(v);
        double parsed = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), parsed);
        EXPECT_EQ(parsed, v) << s;
    }
}

TEST(LoadCsv, ThreeRowExample) {
    TempDir tmp;
    const fs::path p = tmp.path() / "mini.csv";
    write_text(p, "f0,f1,label\n1.5,2.5,0\n-1,0.25,1\n3,4,0\n");
    const auto [x, y] = load_csv(p);
    EXPECT_EQ(x.rows(), 3u);
    EXPECT_EQ(x.cols(), 2u);
    EXPECT_EQ(y.values(), (std::vector<int>{0, 1, 0}));
    EXPECT_DOUBLE_EQ(x(1, 0), -1.0);
}

TEST(LoadCsv, MissingLabelColumnRejected) {
    TempDir tmp;
    const fs::path p = tmp.path() / "bad.csv";
    write_text(p, "f0,f1,target\n1,2,0\n");
    try {
        load_csv(p);
        FAIL();
    } catch (const BenchError& e) {
        EXPECT_EQ(e.code(), Err::MissingLabelColumn);
    }
}

TEST(LoadCsv, NonNumericCellNamesLineAndColumn) {
    TempDir tmp;
    const fs::path p = tmp.path() / "bad2.csv";
    write_text(p, "f0,label\n1,0\nxyz,1\n");
    try {
        load_csv(p);
        FAIL();
    } catch (const BenchError& e) {
        EXPECT_EQ(e.code(), Err::ParseError);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("column 1"), std::string::npos);
    }
}

TEST(LoadCsv, LabelDomainEnforced) {
    TempDir tmp;
    const fs::path p = tmp.path() / "bad3.csv";
    write_text(p, "f0,label\n1,2\n");
    EXPECT_THROW(load_csv(p), BenchError);
}

TEST(DatasetCsv, WriteLoadRoundTrip) {
    TempDir tmp;
    Rng rng(3);
    DataMatrix x(20, 3);
    std::vector<int> y(20, 0);
    y[4] = 1;
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = 0; j < 3; ++j) x(i, j) = rng.normal();
    const fs::path p = tmp.path() / "round.csv";
    write_dataset_csv(p, x, LabelVector(y));
    const auto [x2, y2] = load_csv(p);
    EXPECT_EQ(x2.values(), x.values());
    EXPECT_EQ(y2.values(), y);
}

TEST(PrepDataset, IdentityBand) {
    Rng rng(5);
    DataMatrix x(5000, 2);
    std::vector<int> y(5000, 0);
    for (std::size_t i = 0; i < 5000; ++i) {
        x(i, 0) = rng.normal();
        x(i, 1) = rng.normal();
        y[i] = i < 250 ? 1 : 0;
    }
    const auto [px, py] = prep_dataset(x, LabelVector(y), 9);
    EXPECT_EQ(px.values(), x.values());
    EXPECT_EQ(py.values(), y);
}

TEST(PrepDataset, UpsamplesSmallDatasetPreservingRatio) {
    Rng rng(6);
    DataMatrix x(500, 2);
    std::vector<int> y(500, 0);
    for (std::size_t i = 0; i < 500; ++i) {
        x(i, 0) = rng.normal();
        x(i, 1) = rng.normal();
        y[i] = i < 50 ? 1 : 0;
    }
    const auto [px, py] = prep_dataset(x, LabelVector(y), 10);
    EXPECT_EQ(px.rows(), 1000u);
    EXPECT_EQ(py.anomaly_count(), 100u);
}

TEST(PrepDataset, SubsamplesLargeDatasetStratified) {
    Rng rng(7);
    const std::size_t n = 12000;
    DataMatrix x(n, 1);
    std::vector<int> y(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 0) = rng.normal();
        y[i] = i < 600 ? 1 : 0;
    }
    const auto [px, py] = prep_dataset(x, LabelVector(y), 11);
    EXPECT_EQ(px.rows(), 10000u);
    EXPECT_EQ(py.anomaly_count(), 500u); // ratio 0.05 preserved

    // subsample is without replacement: all drawn rows are distinct originals
    std::multiset<double> values;
    for (std::size_t i = 0; i < px.rows(); ++i) values.insert(px(i, 0));
    for (double v : values) EXPECT_EQ(values.count(v), 1u);
}

TEST(PrepDataset, HighAnomalyRatioRejected) {
    DataMatrix x(2000, 1);
    std::vector<int> y(2000, 0);
    for (std::size_t i = 0; i < 900; ++i) y[i] = 1; // 45%
    try {
        prep_dataset(x, LabelVector(y), 1);
        FAIL();
    } catch (const BenchError& e) {
        EXPECT_EQ(e.code(), Err::AnomalyRatioTooHigh);
    }
}

TEST(Config, UnknownKeysRejected) {
    EXPECT_THROW(BenchmarkConfig::from_json_text(
                     R"({"datasets":["a.csv"],"algorithms":["knn"],"typo_key":1})"),
                 BenchError);
    EXPECT_THROW(BenchmarkConfig::from_json_text(
                     R"({"datasets":["a.csv"],"algorithms":[{"name":"knn","oops":1}]})"),
                 BenchError);
}

TEST(Config, ParsesFullGrid) {
    const auto config = BenchmarkConfig::from_json_text(R"({
        "datasets": ["a.csv", "b.csv"],
        "algorithms": ["knn", {"name": "iforest", "params": {"n_trees": 50}},
                       {"name": "scorestack", "roster": ["knn", "hbos"]}],
        "supervision": [0.1, 0.5],
        "anomaly_types": ["local", {"type": "global", "alpha": 1.2, "gamma_l": 1.0}],
        "corruptions": [{"mode": "duplicate", "level": 6},
                        {"mode": "flip", "level": 0.25, "gamma_l": 1.0}],
        "n_repeats": 2,
        "train_frac": 0.7,
        "seed": 99,
        "threads": 2,
        "out_dir": "out"
    })");
    EXPECT_EQ(config.datasets.size(), 2u);
    EXPECT_EQ(config.algorithms.size(), 3u);
    EXPECT_DOUBLE_EQ(config.algorithms[1].param("n_trees", 0), 50.0);
    ASSERT_TRUE(config.algorithms[2].roster.has_value());
    EXPECT_EQ(config.algorithms[2].roster->size(), 2u);
    EXPECT_EQ(config.supervision, (std::vector<double>{0.1, 0.5}));
    EXPECT_DOUBLE_EQ(config.anomaly_types[1].alpha, 1.2);
    ASSERT_TRUE(config.corruptions[1].gamma_l.has_value());
    EXPECT_EQ(config.seed, 99u);
}

TEST(Config, DomainValidation) {
    EXPECT_THROW(BenchmarkConfig::from_json_text(
                     R"({"datasets":["a"],"algorithms":["knn"],
                         "corruptions":[{"mode":"duplicate","level":7}]})"),
                 BenchError);
    EXPECT_THROW(BenchmarkConfig::from_json_text(
                     R"({"datasets":["a"],"algorithms":["knn"],
                         "corruptions":[{"mode":"flip","level":0.6}]})"),
                 BenchError);
    EXPECT_THROW(BenchmarkConfig::from_json_text(
                     R"({"datasets":["a"],"algorithms":["knn"],"supervision":[0.0]})"),
                 BenchError);
    EXPECT_THROW(BenchmarkConfig::from_json_text(
                     R"({"datasets":["a"],"algorithms":["knn"],"n_repeats":0})"),
                 BenchError);
}

namespace {

BenchmarkConfig small_grid_config(const TempDir& tmp, int threads) {
    BenchmarkConfig config;
    config.datasets = {
        write_blob_dataset(tmp.path(), "alpha.csv", 1000, 0.05, 4.0, 11).string(),
        write_blob_dataset(tmp.path(), "beta.csv", 1000, 0.08, 3.0, 13).string()};
    config.algorithms = {detectors::DetectorSpec::make("knn"),
                         detectors::DetectorSpec::make("hbos"),
                         detectors::DetectorSpec::make("iforest", {{"n_trees", 50.0}})};
    config.n_repeats = 3;
    config.seed = 1234;
    config.threads = threads;
    config.record_timings = false;
    return config;
}

} // namespace

TEST(RunGrid, CardinalityMatchesDimensions) {
    TempDir tmp;
    const auto config = small_grid_config(tmp, 2);
    const auto table = run_grid(config);
    // 2 datasets x 3 algorithms x 1 setting x 3 repeats
    EXPECT_EQ(table.records.size(), 18u);
    EXPECT_TRUE(table.skipped.empty());
}

TEST(RunGrid, RecordsAreSortedAndUnique) {
    TempDir tmp;
    const auto table = run_grid(small_grid_config(tmp, 4));
    for (std::size_t i = 1; i < table.records.size(); ++i) {
        const auto& a = table.records[i - 1];
        const auto& b = table.records[i];
        EXPECT_LT(std::tie(a.dataset, a.algorithm, a.setting, a.repeat_index),
                  std::tie(b.dataset, b.algorithm, b.setting, b.repeat_index));
    }
}

TEST(RunGrid, DeterministicAcrossRunsAndThreadCounts) {
    TempDir tmp;
    const auto config1 = small_grid_config(tmp, 1);
    auto config8 = config1;
    config8.threads = 8;

    const auto t1 = run_grid(config1);
    const auto t1_again = run_grid(config1);
    const auto t8 = run_grid(config8);

    const auto as_csv = [&](const ResultsTable& t) {
        TempDir out;
        emit_results(t, out.path());
        return read_text(out.path() / "results.csv");
    };
    const std::string bytes1 = as_csv(t1);
    EXPECT_EQ(bytes1, as_csv(t1_again));
    EXPECT_EQ(bytes1, as_csv(t8));
}

TEST(RunGrid, LabelInformedSkippedWithoutSupervision) {
    TempDir tmp;
    auto config = small_grid_config(tmp, 2);
    config.algorithms.push_back(detectors::DetectorSpec::make("rforest"));
    config.n_repeats = 1;
    const auto table = run_grid(config);
    EXPECT_EQ(table.records.size(), 6u); // 2 x 3 unsupervised x 1 x 1
    ASSERT_EQ(table.skipped.size(), 2u);
    for (const auto& s : table.skipped) {
        EXPECT_EQ(s.algorithm, "rforest");
        EXPECT_EQ(s.reason, "NoSupervisionInSetting");
    }
}

TEST(RunGrid, SupervisionSettingRunsLabelInformed) {
    TempDir tmp;
    auto config = small_grid_config(tmp, 2);
    config.algorithms = {detectors::DetectorSpec::make("knn"),
                         detectors::DetectorSpec::make("rforest"),
                         detectors::DetectorSpec::make("scorestack")};
    config.supervision = {0.5};
    config.n_repeats = 1;
    const auto table = run_grid(config);
    // default: knn only (2 records); gamma_0.5: rforest+scorestack (4 records)
    EXPECT_EQ(table.records.size(), 6u);
    std::size_t gamma_records = 0;
    for (const auto& r : table.records)
        if (r.setting == "gamma_0.5") {
            ++gamma_records;
            EXPECT_NE(r.algorithm, "knn");
        }
    EXPECT_EQ(gamma_records, 4u);
}

TEST(RunGrid, BadDatasetBecomesSkipRowsNotAbort) {
    TempDir tmp;
    auto config = small_grid_config(tmp, 2);
    const fs::path bad = tmp.path() / "bad.csv";
    write_text(bad, "f0,label\n1,0\nnope,1\n");
    config.datasets.push_back(bad.string());
    config.n_repeats = 1;
    const auto table = run_grid(config);
    EXPECT_EQ(table.records.size(), 6u);
    EXPECT_EQ(table.skipped.size(), 3u);
    for (const auto& s : table.skipped) EXPECT_EQ(s.reason, "ParseError");
}

TEST(EmitResults, EmptyTableWritesHeaders) {
    TempDir out;
    emit_results(ResultsTable{}, out.path());
    EXPECT_EQ(read_text(out.path() / "results.csv"),
              "dataset,algorithm,setting,repeat,aucroc,aucpr,fit_ms,score_ms\n");
    EXPECT_EQ(read_text(out.path() / "skipped.csv"),
              "dataset,algorithm,setting,repeat,reason\n");
    EXPECT_EQ(read_text(out.path() / "summary.csv"),
              "dataset,algorithm,setting,mean_aucroc,mean_aucpr,rank_aucroc,rank_aucpr\n");
}

TEST(EmitResults, RoundTripsThroughLoader) {
    TempDir tmp;
    auto config = small_grid_config(tmp, 2);
    config.record_timings = true;
    const auto table = run_grid(config);
    TempDir out;
    emit_results(table, out.path());
    const auto loaded = load_results_csv(out.path() / "results.csv");
    ASSERT_EQ(loaded.size(), table.records.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        EXPECT_EQ(loaded[i].dataset, table.records[i].dataset);
        EXPECT_EQ(loaded[i].algorithm, table.records[i].algorithm);
        EXPECT_EQ(loaded[i].setting, table.records[i].setting);
        EXPECT_EQ(loaded[i].repeat_index, table.records[i].repeat_index);
        EXPECT_EQ(loaded[i].aucroc, table.records[i].aucroc);
        EXPECT_EQ(loaded[i].aucpr, table.records[i].aucpr);
        EXPECT_EQ(loaded[i].fit_ms, table.records[i].fit_ms);
        EXPECT_EQ(loaded[i].score_ms, table.records[i].score_ms);
    }
}

TEST(EmitResults, SummaryRanksMatchRankMatrix) {
    TempDir tmp;
    const auto table = run_grid(small_grid_config(tmp, 2));
    TempDir out;
    emit_results(table, out.path());

    const auto expected = eval::rank_matrix(table.records, eval::Metric::Aucroc);
    // pull the ALL rows back out of summary.csv
    std::map<std::string, double> all_ranks;
    std::stringstream ss(read_text(out.path() / "summary.csv"));
    std::string line;
    std::getline(ss, line); // header
    while (std::getline(ss, line)) {
        std::stringstream row(line);
        std::string dataset, algorithm, setting, mroc, mpr, rroc, rpr;
        std::getline(row, dataset, ',');
        std::getline(row, algorithm, ',');
        std::getline(row, setting, ',');
        std::getline(row, mroc, ',');
        std::getline(row, mpr, ',');
        std::getline(row, rroc, ',');
        std::getline(row, rpr, ',');
        if (dataset == "ALL") all_ranks[algorithm] = std::stod(rroc);
    }
    ASSERT_EQ(all_ranks.size(), expected.algorithms.size());
    for (std::size_t a = 0; a < expected.algorithms.size(); ++a)
        EXPECT_DOUBLE_EQ(all_ranks.at(expected.algorithms[a]), expected.average_rank[a]);
}

TEST(RenderCd, IdenticalAlgorithmsSingleBarAndSymmetricMatrix) {
    std::vector<eval::MetricRecord> records;
    for (int d = 0; d < 5; ++d)
        for (auto alg : {"a", "b", "c"}) {
            eval::MetricRecord r;
            r.dataset = "d" + std::to_string(d);
            r.algorithm = alg;
            r.setting = "default";
            r.aucroc = r.aucpr = 0.5 + 0.05 * d;
            records.push_back(r);
        }
    TempDir out;
    const fs::path svg = out.path() / "cd.svg";
    const auto cd = render_cd(records, eval::Metric::Aucroc, 0.05, svg);
    ASSERT_EQ(cd.cliques.size(), 1u);
    EXPECT_EQ(cd.cliques[0].size(), 3u);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            EXPECT_DOUBLE_EQ(cd.adjusted_p[i][j], cd.adjusted_p[j][i]);

    const std::string svg_text = read_text(svg);
    EXPECT_NE(svg_text.find("<svg"), std::string::npos);
    EXPECT_NE(svg_text.find("stroke-width=\"4\""), std::string::npos); // one clique bar

    // text companion parse-back: clique line lists all three algorithms
    const std::string txt = read_text(out.path() / "cd.txt");
    const auto clique_pos = txt.find("cliques\n");
    ASSERT_NE(clique_pos, std::string::npos);
    std::string clique_line = txt.substr(clique_pos + 8);
    clique_line = clique_line.substr(0, clique_line.find('\n'));
    EXPECT_EQ(clique_line, "a b c");
}

TEST(RenderCd, BarMembershipEqualsCdCliques) {
    TempDir tmp;
    auto config = small_grid_config(tmp, 2);
    config.datasets.push_back(
        write_blob_dataset(tmp.path(), "gamma.csv", 1000, 0.06, 5.0, 17).string());
    config.datasets.push_back(
        write_blob_dataset(tmp.path(), "delta.csv", 1000, 0.05, 2.0, 19).string());
    const auto table = run_grid(config);

    TempDir out;
    const auto cd = render_cd(table.records, eval::Metric::Aucroc, 0.05, out.path() / "cd.svg");
    const auto expected = eval::cd_cliques(eval::rank_matrix(table.records, eval::Metric::Aucroc),
                                           0.05);
    ASSERT_EQ(cd.cliques.size(), expected.cliques.size());
    for (std::size_t c = 0; c < cd.cliques.size(); ++c)
        EXPECT_EQ(cd.cliques[c], expected.cliques[c]);

    const std::string txt = read_text(out.path() / "cd.txt");
    std::size_t bar_count = 0;
    for (const auto& clique : expected.cliques) bar_count += (clique.size() >= 2);
    std::size_t svg_bars = 0;
    const std::string svg_text = read_text(out.path() / "cd.svg");
    for (std::size_t pos = 0; (pos = svg_text.find("stroke-width=\"4\"", pos)) != std::string::npos;
         ++pos)
        ++svg_bars;
    EXPECT_EQ(svg_bars, bar_count);
    EXPECT_FALSE(txt.empty());
}
