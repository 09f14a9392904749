#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adbench/core/types.hpp"

namespace adbench::eval {

// One grid cell's measured outcome; the long-form row behind results.csv.
struct MetricRecord {
    std::string dataset;
    std::string algorithm;
    std::string setting;
    int repeat_index = 0;
    double aucroc = 0.0;
    double aucpr = 0.0;
    double fit_ms = 0.0;
    double score_ms = 0.0;
};

enum class Metric { Aucroc, Aucpr };

// Per-dataset tie-averaged ranks (1 = best) plus the cross-dataset averages.
// The per-cell metric means feed the pairwise Wilcoxon tests downstream.
struct RankTable {
    std::vector<std::string> algorithms;
    std::vector<std::string> datasets;
    std::vector<std::vector<double>> means; // [dataset][algorithm] mean metric
    std::vector<std::vector<double>> ranks; // [dataset][algorithm]
    std::vector<double> average_rank;       // per algorithm
};

struct CdResult {
    double friedman_statistic = 0.0;
    double friedman_p = 1.0;
    std::vector<std::string> algorithms;
    std::vector<double> average_rank;
    std::vector<std::vector<double>> adjusted_p;     // symmetric, unit diagonal
    std::vector<std::vector<std::size_t>> cliques;   // maximal, by best member rank
    double alpha = 0.05;
};

// Averages the chosen metric over repeats per (dataset, algorithm), ranks
// algorithms per dataset descending (midranks on ties), then averages ranks
// across datasets. Every (dataset, algorithm) pair must be present.
RankTable rank_matrix(std::span<const MetricRecord> records, Metric metric);

// Friedman omnibus chi-square over a rank table; returns (statistic, p).
std::pair<double, double> friedman_test(const RankTable& ranks);

// Two-sided paired Wilcoxon signed-rank p-value. Zero differences dropped,
// midranks on |d|; exact signed-rank distribution for effective n <= 20, else
// normal approximation with tie and continuity corrections.
double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

// Step-down Holm adjustment; output in the input order.
std::vector<double> holm_adjust(std::span<const double> p_values);

// Pairwise Wilcoxon on per-dataset means, Holm-adjusted, then the maximal
// cliques of the non-significance graph (edge where adjusted p > alpha).
CdResult cd_cliques(const RankTable& ranks, double alpha = 0.05);

// Chi-square upper tail, exposed for tests.
double chi_squared_sf(double statistic, double dof);

} // namespace adbench::eval
