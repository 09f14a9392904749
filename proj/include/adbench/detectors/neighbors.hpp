#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "adbench/core/types.hpp"

namespace adbench::detectors {

// Tie-inclusive k-nearest-neighbor result: every point whose distance equals
// the k-th smallest is included, so the set is backend-independent.
struct Neighborhood {
    std::vector<std::size_t> indices; // sorted by (distance, index)
    std::vector<double> distances;
    double kth_distance = 0.0;
};

// Exact nearest-neighbor search over a fixed point set. Brute force is the
// reference path; a k-d tree accelerates low-dimensional data and must return
// identical neighborhoods.
class NeighborIndex {
public:
    static constexpr std::size_t kNoExclude = std::numeric_limits<std::size_t>::max();

    // force_brute pins the reference path (used by tests as the oracle).
    explicit NeighborIndex(const DataMatrix& points, bool force_brute = false);
    ~NeighborIndex();

    NeighborIndex(const NeighborIndex&) = delete;
    NeighborIndex& operator=(const NeighborIndex&) = delete;

    std::size_t size() const noexcept { return points_.rows(); }
    bool uses_tree() const noexcept { return tree_ != nullptr; }

    // k-th nearest distance (Euclidean) to the query, optionally excluding one
    // stored point (LOF's fit-time self-exclusion).
    double kth_distance(std::span<const double> query, std::size_t k,
                        std::size_t exclude = kNoExclude) const;

    Neighborhood query(std::span<const double> query, std::size_t k,
                       std::size_t exclude = kNoExclude) const;

private:
    struct KdTree;

    Neighborhood brute_query(std::span<const double> query, std::size_t k,
                             std::size_t exclude) const;
    Neighborhood tree_query(std::span<const double> query, std::size_t k,
                            std::size_t exclude) const;

    const DataMatrix& points_;
    std::unique_ptr<KdTree> tree_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

} // namespace adbench::detectors
