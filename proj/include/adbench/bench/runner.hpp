#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "adbench/bench/config.hpp"
#include "adbench/core/types.hpp"
#include "adbench/eval/stats.hpp"

namespace adbench::bench {

struct SkipRecord {
    std::string dataset;
    std::string algorithm;
    std::string setting;
    int repeat_index = 0;
    std::string reason;
};

// Long-form results in stable (dataset, algorithm, setting, repeat) order,
// plus the enumerated skipped/error cells.
struct ResultsTable {
    std::vector<eval::MetricRecord> records;
    std::vector<SkipRecord> skipped;
};

// Rejects anomaly ratios >= 0.40; stratified-bootstraps small datasets up to
// 1,000 rows; stratified-subsamples large ones down to 10,000.
std::pair<DataMatrix, LabelVector> prep_dataset(const DataMatrix& x, const LabelVector& y,
                                                Seed seed);

// The full grid: datasets x settings x repeats, every configured algorithm
// per cell. Per-cell failures become skip rows, never aborting the grid.
ResultsTable run_grid(const BenchmarkConfig& config);

// Writes results.csv, summary.csv, and skipped.csv into out_dir.
void emit_results(const ResultsTable& table, const std::filesystem::path& out_dir);

// parse(emit(t)) round-trip for results.csv.
std::vector<eval::MetricRecord> load_results_csv(const std::filesystem::path& path);

} // namespace adbench::bench
