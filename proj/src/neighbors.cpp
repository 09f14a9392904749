#include "adbench/detectors/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace adbench::detectors {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        sum += diff * diff;
    }
    return sum;
}

namespace {
constexpr std::size_t kTreeDimLimit = 16;
constexpr std::size_t kTreeMinPoints = 64;
constexpr std::size_t kLeafSize = 16;
} // namespace

// Median-split k-d tree on point indices; exact search with a bounded max-heap.
struct NeighborIndex::KdTree {
    struct Node {
        int left = -1, right = -1;
        std::size_t begin = 0, end = 0; // leaf range into order
        int axis = -1;
        double split = 0.0;
    };

    const DataMatrix& pts;
    std::vector<std::size_t> order;
    std::vector<Node> nodes;

    explicit KdTree(const DataMatrix& points) : pts(points) {
        order.resize(pts.rows());
        std::iota(order.begin(), order.end(), 0);
        build(0, pts.rows());
    }

    int build(std::size_t begin, std::size_t end) {
        Node node;
        node.begin = begin;
        node.end = end;
        const int id = static_cast<int>(nodes.size());
        nodes.push_back(node);
        if (end - begin <= kLeafSize) return id;

        // split on the widest axis at the median
        int axis = 0;
        double best_spread = -1.0;
        for (std::size_t d = 0; d < pts.cols(); ++d) {
            double lo = pts(order[begin], d), hi = lo;
            for (std::size_t i = begin + 1; i < end; ++i) {
                const double v = pts(order[i], d);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > best_spread) {
                best_spread = hi - lo;
                axis = static_cast<int>(d);
            }
        }
        if (best_spread <= 0.0) return id; // all points identical: leaf

        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                         [&](std::size_t a, std::size_t b) {
                             return pts(a, static_cast<std::size_t>(axis)) <
                                    pts(b, static_cast<std::size_t>(axis));
                         });
        nodes[id].axis = axis;
        nodes[id].split = pts(order[mid], static_cast<std::size_t>(axis));
        const int l = build(begin, mid);
        const int r = build(mid, end);
        nodes[id].left = l;
        nodes[id].right = r;
        return id;
    }

    // Collect candidates: max-heap of (squared distance, index), k best.
    void search(int node_id, std::span<const double> q, std::size_t k, std::size_t exclude,
                std::priority_queue<std::pair<double, std::size_t>>& heap) const {
        const Node& node = nodes[node_id];
        if (node.axis < 0) {
            for (std::size_t i = node.begin; i < node.end; ++i) {
                const std::size_t p = order[i];
                if (p == exclude) continue;
                const double d2 = squared_distance(q, pts.row(p));
                if (heap.size() < k) {
                    heap.emplace(d2, p);
                } else if (d2 < heap.top().first) {
                    heap.pop();
                    heap.emplace(d2, p);
                }
            }
            return;
        }
        const double delta = q[static_cast<std::size_t>(node.axis)] - node.split;
        const int near = delta < 0.0 ? node.left : node.right;
        const int far = delta < 0.0 ? node.right : node.left;
        search(near, q, k, exclude, heap);
        if (heap.size() < k || delta * delta <= heap.top().first)
            search(far, q, k, exclude, heap);
    }

    // All points with squared distance <= r2 (tie sweep).
    void range(int node_id, std::span<const double> q, double r2, std::size_t exclude,
               std::vector<std::pair<double, std::size_t>>& out) const {
        const Node& node = nodes[node_id];
        if (node.axis < 0) {
            for (std::size_t i = node.begin; i < node.end; ++i) {
                const std::size_t p = order[i];
                if (p == exclude) continue;
                const double d2 = squared_distance(q, pts.row(p));
                if (d2 <= r2) out.emplace_back(d2, p);
            }
            return;
        }
        const double delta = q[static_cast<std::size_t>(node.axis)] - node.split;
        const int near = delta < 0.0 ? node.left : node.right;
        const int far = delta < 0.0 ? node.right : node.left;
        range(near, q, r2, exclude, out);
        if (delta * delta <= r2) range(far, q, r2, exclude, out);
    }
};

NeighborIndex::NeighborIndex(const DataMatrix& points, bool force_brute) : points_(points) {
    require(points.rows() >= 1, Err::TooFewSamples, "neighbor index needs at least one point");
    if (!force_brute && points.cols() <= kTreeDimLimit && points.rows() >= kTreeMinPoints)
        tree_ = std::make_unique<KdTree>(points);
}

NeighborIndex::~NeighborIndex() = default;

Neighborhood NeighborIndex::brute_query(std::span<const double> query, std::size_t k,
                                        std::size_t exclude) const {
    std::vector<std::pair<double, std::size_t>> all;
    all.reserve(points_.rows());
    for (std::size_t i = 0; i < points_.rows(); ++i) {
        if (i == exclude) continue;
        all.emplace_back(squared_distance(query, points_.row(i)), i);
    }
    require(k >= 1 && k <= all.size(), Err::KTooLarge, "k exceeds available points");
    std::nth_element(all.begin(), all.begin() + (k - 1), all.end());
    const double kth2 = all[k - 1].first;

    Neighborhood hood;
    for (const auto& [d2, idx] : all)
        if (d2 <= kth2) {
            hood.indices.push_back(idx);
            hood.distances.push_back(std::sqrt(d2));
        }
    // sort by (distance, index) for a deterministic, backend-independent order
    std::vector<std::size_t> perm(hood.indices.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        if (hood.distances[a] != hood.distances[b]) return hood.distances[a] < hood.distances[b];
        return hood.indices[a] < hood.indices[b];
    });
    Neighborhood sorted;
    for (std::size_t p : perm) {
        sorted.indices.push_back(hood.indices[p]);
        sorted.distances.push_back(hood.distances[p]);
    }
    sorted.kth_distance = std::sqrt(kth2);
    return sorted;
}

Neighborhood NeighborIndex::tree_query(std::span<const double> query, std::size_t k,
                                       std::size_t exclude) const {
    const std::size_t available = points_.rows() - (exclude != kNoExclude ? 1 : 0);
    require(k >= 1 && k <= available, Err::KTooLarge, "k exceeds available points");

    std::priority_queue<std::pair<double, std::size_t>> heap;
    tree_->search(0, query, k, exclude, heap);
    const double kth2 = heap.top().first;

    std::vector<std::pair<double, std::size_t>> in_range;
    tree_->range(0, query, kth2, exclude, in_range);
    std::sort(in_range.begin(), in_range.end());

    Neighborhood hood;
    hood.kth_distance = std::sqrt(kth2);
    for (const auto& [d2, idx] : in_range) {
        hood.indices.push_back(idx);
        hood.distances.push_back(std::sqrt(d2));
    }
    return hood;
}

Neighborhood NeighborIndex::query(std::span<const double> query, std::size_t k,
                                  std::size_t exclude) const {
    return tree_ ? tree_query(query, k, exclude) : brute_query(query, k, exclude);
}

double NeighborIndex::kth_distance(std::span<const double> query, std::size_t k,
                                   std::size_t exclude) const {
    return this->query(query, k, exclude).kth_distance;
}

} // namespace adbench::detectors
