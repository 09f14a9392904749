#pragma once

#include <vector>

#include "adbench/core/rng.hpp"
#include "adbench/core/types.hpp"

namespace adbench::detectors {

struct KMeansResult {
    DataMatrix centroids;                // n_clusters x d
    std::vector<std::size_t> assignment; // per training row
    std::vector<std::size_t> sizes;      // per cluster
    double inertia = 0.0;
};

struct KMeansOptions {
    int restarts = 10;
    int max_iterations = 300;
    double relative_tolerance = 1e-6;
};

// Lloyd iterations with k-means++ seeding; empty clusters are re-seeded from
// the point farthest from its centroid. Deterministic per rng state.
KMeansResult run_kmeans(const DataMatrix& x, std::size_t n_clusters, Rng& rng,
                        const KMeansOptions& options = {});

} // namespace adbench::detectors
