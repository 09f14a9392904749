#include "adbench/eval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

namespace adbench::eval {

namespace {

// Tie-averaged ranks of `values`, rank 1 for the LARGEST value.
std::vector<double> midranks_descending(std::span<const double> values) {
    const std::size_t k = values.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<double> ranks(k, 0.0);
    std::size_t i = 0;
    while (i < k) {
        std::size_t j = i;
        while (j < k && values[order[j]] == values[order[i]]) ++j;
        const double mid = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t t = i; t < j; ++t) ranks[order[t]] = mid;
        i = j;
    }
    return ranks;
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

} // namespace

double chi_squared_sf(double statistic, double dof) {
    if (statistic <= 0.0) return 1.0;
    return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

RankTable rank_matrix(std::span<const MetricRecord> records, Metric metric) {
    RankTable table;
    std::map<std::pair<std::string, std::string>, std::pair<double, std::size_t>> cells;
    for (const auto& rec : records) {
        if (std::find(table.datasets.begin(), table.datasets.end(), rec.dataset) ==
            table.datasets.end())
            table.datasets.push_back(rec.dataset);
        if (std::find(table.algorithms.begin(), table.algorithms.end(), rec.algorithm) ==
            table.algorithms.end())
            table.algorithms.push_back(rec.algorithm);
        auto& cell = cells[{rec.dataset, rec.algorithm}];
        cell.first += (metric == Metric::Aucroc) ? rec.aucroc : rec.aucpr;
        cell.second += 1;
    }
    require(!table.datasets.empty(), Err::DegenerateTable, "no records to rank");

    const std::size_t k = table.algorithms.size();
    for (const auto& ds : table.datasets) {
        std::vector<double> row(k);
        for (std::size_t j = 0; j < k; ++j) {
            auto it = cells.find({ds, table.algorithms[j]});
            require(it != cells.end(), Err::MissingCell,
                    "missing cell (" + ds + ", " + table.algorithms[j] + ")");
            row[j] = it->second.first / static_cast<double>(it->second.second);
        }
        table.means.push_back(row);
        table.ranks.push_back(midranks_descending(row));
    }

    table.average_rank.assign(k, 0.0);
    for (const auto& row : table.ranks)
        for (std::size_t j = 0; j < k; ++j) table.average_rank[j] += row[j];
    for (auto& r : table.average_rank) r /= static_cast<double>(table.datasets.size());
    return table;
}

std::pair<double, double> friedman_test(const RankTable& table) {
    const std::size_t n_datasets = table.datasets.size();
    const std::size_t k = table.algorithms.size();
    require(n_datasets >= 2 && k >= 2, Err::DegenerateTable,
            "Friedman test needs >=2 datasets and >=2 algorithms");

    const double kk = static_cast<double>(k);
    const double nn = static_cast<double>(n_datasets);
    double sum_sq = 0.0;
    for (double r : table.average_rank) sum_sq += r * r;
    double statistic = 12.0 * nn / (kk * (kk + 1.0)) * (sum_sq - kk * (kk + 1.0) * (kk + 1.0) / 4.0);
    if (statistic < 0.0) statistic = 0.0; // guard round-off on fully tied tables
    return {statistic, chi_squared_sf(statistic, kk - 1.0)};
}

double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), Err::LengthMismatch, "paired samples differ in length");
    require(a.size() >= 3, Err::TooFewPairs, "need at least 3 pairs");

    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) diffs.push_back(d);
    }
    const std::size_t n = diffs.size();
    if (n == 0) return 1.0; // identical sequences

    std::vector<double> abs_d(n);
    for (std::size_t i = 0; i < n; ++i) abs_d[i] = std::abs(diffs[i]);
    // rank 1 for the smallest |d|
    std::vector<double> neg_abs(n);
    for (std::size_t i = 0; i < n; ++i) neg_abs[i] = -abs_d[i];
    const std::vector<double> ranks = midranks_descending(neg_abs);

    double w_plus = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (diffs[i] > 0.0) w_plus += ranks[i];

    if (n <= 20) {
        // Exact distribution of W+ over all sign assignments, on doubled ranks
        // so midranks become integers.
        std::vector<long long> r2(n);
        long long total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            r2[i] = std::llround(2.0 * ranks[i]);
            total += r2[i];
        }
        std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
        count[0] = 1.0;
        long long reach = 0;
        for (std::size_t i = 0; i < n; ++i) {
            reach += r2[i];
            for (long long s = reach; s >= r2[i]; --s)
                count[static_cast<std::size_t>(s)] += count[static_cast<std::size_t>(s - r2[i])];
        }
        const double denom = std::pow(2.0, static_cast<double>(n));
        const long long w2 = std::llround(2.0 * w_plus);
        double cdf_low = 0.0, cdf_high = 0.0;
        for (long long s = 0; s <= total; ++s) {
            if (s <= w2) cdf_low += count[static_cast<std::size_t>(s)];
            if (s >= w2) cdf_high += count[static_cast<std::size_t>(s)];
        }
        return std::min(1.0, 2.0 * std::min(cdf_low, cdf_high) / denom);
    }

    // Normal approximation with tie correction and continuity correction.
    const double nd = static_cast<double>(n);
    const double mean = nd * (nd + 1.0) / 4.0;
    double tie_term = 0.0;
    std::vector<double> sorted_abs = abs_d;
    std::sort(sorted_abs.begin(), sorted_abs.end());
    std::size_t i = 0;
    while (i < sorted_abs.size()) {
        std::size_t j = i;
        while (j < sorted_abs.size() && sorted_abs[j] == sorted_abs[i]) ++j;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term / 48.0;
    if (var <= 0.0) return 1.0;
    double z = w_plus - mean;
    z -= 0.5 * (z > 0 ? 1.0 : (z < 0 ? -1.0 : 0.0));
    z /= std::sqrt(var);
    return std::min(1.0, 2.0 * normal_sf(std::abs(z)));
}

std::vector<double> holm_adjust(std::span<const double> p_values) {
    const std::size_t m = p_values.size();
    for (double p : p_values)
        require(p >= 0.0 && p <= 1.0, Err::RatioOutOfRange, "p-value outside [0,1]");
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
    std::vector<double> adjusted(m, 0.0);
    double running_max = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double stepped =
            std::min(1.0, static_cast<double>(m - i) * p_values[order[i]]);
        running_max = std::max(running_max, stepped);
        adjusted[order[i]] = running_max;
    }
    return adjusted;
}

namespace {

// Bron-Kerbosch with pivoting over adjacency bitmasks; k is small here.
void bron_kerbosch(std::uint64_t r, std::uint64_t p, std::uint64_t x,
                   const std::vector<std::uint64_t>& adj,
                   std::vector<std::uint64_t>& cliques) {
    if (p == 0 && x == 0) {
        cliques.push_back(r);
        return;
    }
    const std::uint64_t px = p | x;
    int pivot = std::countr_zero(px);
    std::uint64_t best_cover = 0;
    for (std::uint64_t s = px; s;) {
        const int v = std::countr_zero(s);
        s &= s - 1;
        const std::uint64_t cover = p & adj[static_cast<std::size_t>(v)];
        if (std::popcount(cover) >= std::popcount(best_cover)) {
            best_cover = cover;
            pivot = v;
        }
    }
    std::uint64_t candidates = p & ~adj[static_cast<std::size_t>(pivot)];
    while (candidates) {
        const int v = std::countr_zero(candidates);
        const std::uint64_t bit = 1ULL << v;
        candidates &= candidates - 1;
        bron_kerbosch(r | bit, p & adj[static_cast<std::size_t>(v)],
                      x & adj[static_cast<std::size_t>(v)], adj, cliques);
        p &= ~bit;
        x |= bit;
    }
}

} // namespace

CdResult cd_cliques(const RankTable& table, double alpha) {
    const std::size_t k = table.algorithms.size();
    const std::size_t n_datasets = table.datasets.size();
    require(k >= 2, Err::DegenerateTable, "need at least 2 algorithms");
    require(n_datasets >= 3, Err::DegenerateTable, "need at least 3 datasets");
    require(k <= 64, Err::DegenerateTable, "clique search supports up to 64 algorithms");

    CdResult result;
    result.alpha = alpha;
    result.algorithms = table.algorithms;
    result.average_rank = table.average_rank;
    auto [stat, p] = friedman_test(table);
    result.friedman_statistic = stat;
    result.friedman_p = p;

    // Pairwise Wilcoxon on per-dataset mean metric columns.
    std::vector<double> raw_p;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            std::vector<double> col_i(n_datasets), col_j(n_datasets);
            for (std::size_t d = 0; d < n_datasets; ++d) {
                col_i[d] = table.means[d][i];
                col_j[d] = table.means[d][j];
            }
            raw_p.push_back(wilcoxon_signed_rank(col_i, col_j));
            pairs.emplace_back(i, j);
        }
    const std::vector<double> adj_p = holm_adjust(raw_p);

    result.adjusted_p.assign(k, std::vector<double>(k, 1.0));
    std::vector<std::uint64_t> adjacency(k, 0);
    for (std::size_t t = 0; t < pairs.size(); ++t) {
        const auto [i, j] = pairs[t];
        result.adjusted_p[i][j] = adj_p[t];
        result.adjusted_p[j][i] = adj_p[t];
        if (adj_p[t] > alpha) {
            adjacency[i] |= 1ULL << j;
            adjacency[j] |= 1ULL << i;
        }
    }

    std::uint64_t all = (k == 64) ? ~0ULL : ((1ULL << k) - 1);
    std::vector<std::uint64_t> clique_masks;
    bron_kerbosch(0, all, 0, adjacency, clique_masks);

    for (std::uint64_t mask : clique_masks) {
        std::vector<std::size_t> members;
        for (std::size_t v = 0; v < k; ++v)
            if (mask & (1ULL << v)) members.push_back(v);
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            return result.average_rank[a] < result.average_rank[b];
        });
        result.cliques.push_back(std::move(members));
    }
    std::sort(result.cliques.begin(), result.cliques.end(),
              [&](const auto& a, const auto& b) {
                  return result.average_rank[a.front()] < result.average_rank[b.front()];
              });
    return result;
}

} // namespace adbench::eval
