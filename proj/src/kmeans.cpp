#include "adbench/detectors/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adbench/detectors/neighbors.hpp"

namespace adbench::detectors {

namespace {

// k-means++: first centroid uniform, then D^2-weighted picks.
DataMatrix kmeanspp_init(const DataMatrix& x, std::size_t k, Rng& rng) {
    const std::size_t n = x.rows(), d = x.cols();
    DataMatrix centroids(k, d);
    std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());

    std::size_t first = rng.uniform_index(n);
    std::copy(x.row(first).begin(), x.row(first).end(), centroids.row(0).begin());

    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d2 = squared_distance(x.row(i), centroids.row(c - 1));
            min_d2[i] = std::min(min_d2[i], d2);
            total += min_d2[i];
        }
        std::size_t pick;
        if (total <= 0.0) {
            pick = rng.uniform_index(n); // all points coincide with a centroid
        } else {
            double target = rng.uniform() * total;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                target -= min_d2[i];
                if (target <= 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        std::copy(x.row(pick).begin(), x.row(pick).end(), centroids.row(c).begin());
    }
    return centroids;
}

KMeansResult lloyd(const DataMatrix& x, DataMatrix centroids, const KMeansOptions& opt) {
    const std::size_t n = x.rows(), d = x.cols(), k = centroids.rows();
    KMeansResult result;
    result.assignment.assign(n, 0);
    result.sizes.assign(k, 0);

    double prev_inertia = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        // assign
        double inertia = 0.0;
        std::fill(result.sizes.begin(), result.sizes.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_c = 0;
            for (std::size_t c = 0; c < k; ++c) {
                const double d2 = squared_distance(x.row(i), centroids.row(c));
                if (d2 < best) {
                    best = d2;
                    best_c = c;
                }
            }
            result.assignment[i] = best_c;
            result.sizes[best_c] += 1;
            inertia += best;
        }

        // re-seed empty clusters from the farthest point of a donor cluster
        for (std::size_t c = 0; c < k; ++c) {
            if (result.sizes[c] > 0) continue;
            double worst = -1.0;
            std::size_t worst_i = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (result.sizes[result.assignment[i]] <= 1) continue;
                const double d2 =
                    squared_distance(x.row(i), centroids.row(result.assignment[i]));
                if (d2 > worst) {
                    worst = d2;
                    worst_i = i;
                }
            }
            if (worst < 0.0) break; // no donor: fewer distinct points than clusters
            result.sizes[result.assignment[worst_i]] -= 1;
            result.assignment[worst_i] = c;
            result.sizes[c] = 1;
        }

        // update
        DataMatrix next(k, d);
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = x.row(i);
            auto target = next.row(result.assignment[i]);
            for (std::size_t j = 0; j < d; ++j) target[j] += row[j];
        }
        for (std::size_t c = 0; c < k; ++c) {
            auto row = next.row(c);
            if (result.sizes[c] == 0) {
                std::copy(centroids.row(c).begin(), centroids.row(c).end(), row.begin());
                continue;
            }
            for (std::size_t j = 0; j < d; ++j) row[j] /= static_cast<double>(result.sizes[c]);
        }
        centroids = std::move(next);

        result.inertia = inertia;
        if (prev_inertia - inertia <= opt.relative_tolerance * std::max(prev_inertia, 1e-300))
            break;
        prev_inertia = inertia;
    }

    result.centroids = std::move(centroids);
    return result;
}

} // namespace

KMeansResult run_kmeans(const DataMatrix& x, std::size_t n_clusters, Rng& rng,
                        const KMeansOptions& opt) {
    require(n_clusters >= 1 && n_clusters <= x.rows(), Err::KTooLarge,
            "n_clusters must lie in [1, rows]");
    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < opt.restarts; ++restart) {
        KMeansResult candidate = lloyd(x, kmeanspp_init(x, n_clusters, rng), opt);
        if (candidate.inertia < best.inertia) best = std::move(candidate);
    }
    return best;
}

} // namespace adbench::detectors
