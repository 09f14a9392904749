#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "adbench/detectors/detector.hpp"
#include "adbench/detectors/kmeans.hpp"
#include "adbench/detectors/neighbors.hpp"

namespace adbench::detectors {

namespace {

// Distance to the nearest large-cluster centroid (unweighted CBLOF variant).
class CblofModel final : public FittedModel {
public:
    CblofModel(const DataMatrix& train, Seed seed, std::size_t n_clusters, double alpha,
               double beta)
        : FittedModel(train.cols()) {
        require(n_clusters >= 1 && n_clusters <= train.rows(), Err::KTooLarge,
                "cblof: n_clusters must lie in [1, train rows]");
        require(alpha > 0.0 && alpha <= 1.0, Err::BadParameter, "alpha must lie in (0,1]");
        require(beta >= 1.0, Err::BadParameter, "beta must be >= 1");

        Rng rng(seed);
        KMeansResult km = run_kmeans(train, n_clusters, rng);

        // sort clusters by size descending; boundary at alpha coverage or a
        // beta-fold size drop, whichever comes first
        std::vector<std::size_t> order(n_clusters);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return km.sizes[a] > km.sizes[b]; });

        const double n = static_cast<double>(train.rows());
        std::size_t boundary = n_clusters;
        double covered = 0.0;
        for (std::size_t i = 0; i < n_clusters; ++i) {
            covered += static_cast<double>(km.sizes[order[i]]);
            if (covered / n >= alpha) {
                boundary = i + 1;
                break;
            }
            if (i + 1 < n_clusters && km.sizes[order[i + 1]] > 0 &&
                static_cast<double>(km.sizes[order[i]]) /
                        static_cast<double>(km.sizes[order[i + 1]]) >=
                    beta) {
                boundary = i + 1;
                break;
            }
        }

        large_centroids_ = DataMatrix(boundary, train.cols());
        for (std::size_t i = 0; i < boundary; ++i) {
            const auto src = km.centroids.row(order[i]);
            std::copy(src.begin(), src.end(), large_centroids_.row(i).begin());
        }
    }

private:
    ScoreVector do_score(const DataMatrix& x) const override {
        ScoreVector scores(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < large_centroids_.rows(); ++c)
                best = std::min(best, squared_distance(x.row(i), large_centroids_.row(c)));
            scores[i] = std::sqrt(best);
        }
        return scores;
    }

    DataMatrix large_centroids_;
};

} // namespace

ModelPtr fit_cblof(const DataMatrix& train, Seed seed, std::size_t n_clusters, double alpha,
                   double beta) {
    return std::make_unique<CblofModel>(train, seed, n_clusters, alpha, beta);
}

} // namespace adbench::detectors
