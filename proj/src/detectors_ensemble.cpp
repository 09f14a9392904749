#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "adbench/core/rng.hpp"
#include "adbench/detectors/detector.hpp"

namespace adbench::detectors {

namespace {

// Average unsuccessful-search path length in a BST of m points.
double average_path_length(std::size_t m) {
    if (m <= 1) return 0.0;
    if (m == 2) return 1.0;
    const double md = static_cast<double>(m);
    const double harmonic = std::log(md - 1.0) + std::numbers::egamma;
    return 2.0 * harmonic - 2.0 * (md - 1.0) / md;
}

// ------------------------------------------------------------- IForest -----

class IsolationForestModel final : public FittedModel {
public:
    IsolationForestModel(const DataMatrix& train, Seed seed, std::size_t n_trees,
                         std::size_t subsample)
        : FittedModel(train.cols()) {
        require(n_trees >= 1, Err::BadParameter, "iforest: n_trees must be >= 1");
        require(train.rows() >= 1, Err::TooFewSamples, "empty training matrix");

        psi_ = std::min(subsample, train.rows());
        const std::size_t depth_limit = static_cast<std::size_t>(
            std::ceil(std::log2(std::max<std::size_t>(psi_, 2))));

        Rng rng(seed);
        trees_.resize(n_trees);
        for (std::size_t t = 0; t < n_trees; ++t) {
            Rng tree_rng = rng.spawn(t);
            std::vector<std::size_t> rows =
                tree_rng.sample_without_replacement(train.rows(), psi_);
            build(trees_[t], train, rows, 0, depth_limit, tree_rng);
        }
    }

private:
    struct Node {
        int feature = -1; // -1: leaf
        double threshold = 0.0;
        int left = -1, right = -1;
        double leaf_path = 0.0; // depth + c(size) at the leaf
    };
    using Tree = std::vector<Node>;

    int build(Tree& tree, const DataMatrix& x, std::vector<std::size_t>& rows,
              std::size_t depth, std::size_t depth_limit, Rng& rng) {
        const int id = static_cast<int>(tree.size());
        tree.push_back({});

        if (rows.size() <= 1 || depth >= depth_limit) {
            tree[id].leaf_path = static_cast<double>(depth) + average_path_length(rows.size());
            return id;
        }

        // features with spread at this node
        std::vector<std::size_t> splittable;
        for (std::size_t j = 0; j < x.cols(); ++j) {
            double lo = x(rows[0], j), hi = lo;
            for (std::size_t r : rows) {
                lo = std::min(lo, x(r, j));
                hi = std::max(hi, x(r, j));
            }
            if (hi > lo) splittable.push_back(j);
        }
        if (splittable.empty()) {
            tree[id].leaf_path = static_cast<double>(depth) + average_path_length(rows.size());
            return id;
        }

        const std::size_t feature = splittable[rng.uniform_index(splittable.size())];
        double lo = x(rows[0], feature), hi = lo;
        for (std::size_t r : rows) {
            lo = std::min(lo, x(r, feature));
            hi = std::max(hi, x(r, feature));
        }
        const double threshold = rng.uniform(lo, hi);

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows)
            (x(r, feature) < threshold ? left_rows : right_rows).push_back(r);
        if (left_rows.empty() || right_rows.empty()) {
            // threshold landed on the extreme value; isolate it explicitly
            left_rows.clear();
            right_rows.clear();
            for (std::size_t r : rows)
                (x(r, feature) <= lo ? left_rows : right_rows).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        tree[id].feature = static_cast<int>(feature);
        tree[id].threshold = threshold;
        const int l = build(tree, x, left_rows, depth + 1, depth_limit, rng);
        const int r = build(tree, x, right_rows, depth + 1, depth_limit, rng);
        tree[id].left = l;
        tree[id].right = r;
        return id;
    }

    double path_length(const Tree& tree, std::span<const double> row) const {
        int node = 0;
        for (;;) {
            const Node& nd = tree[node];
            if (nd.feature < 0) return nd.leaf_path;
            node = row[static_cast<std::size_t>(nd.feature)] < nd.threshold ? nd.left : nd.right;
        }
    }

    ScoreVector do_score(const DataMatrix& x) const override {
        const double c_psi = std::max(average_path_length(psi_), 1e-12);
        ScoreVector scores(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i) {
            double mean_path = 0.0;
            for (const auto& tree : trees_) mean_path += path_length(tree, x.row(i));
            mean_path /= static_cast<double>(trees_.size());
            scores[i] = std::exp2(-mean_path / c_psi);
        }
        return scores;
    }

    std::size_t psi_ = 0;
    std::vector<Tree> trees_;
};

// ---------------------------------------------------------------- LODA -----

class LodaModel final : public FittedModel {
public:
    LodaModel(const DataMatrix& train, Seed seed, std::size_t n_projections)
        : FittedModel(train.cols()) {
        require(n_projections >= 1, Err::BadParameter, "loda: n_projections must be >= 1");
        require(train.rows() >= 1, Err::TooFewSamples, "empty training matrix");

        const std::size_t n = train.rows(), d = train.cols();
        n_train_ = static_cast<double>(n);
        const auto n_nonzero = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(d))));
        n_bins_ = std::clamp<std::size_t>(
            static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)))), 10, 100);
        density_floor_ = 0.1 / static_cast<double>(n);

        Rng rng(seed);
        projectors_.resize(n_projections);
        for (auto& proj : projectors_) {
            proj.weights.assign(d, 0.0);
            const auto dims = rng.sample_without_replacement(d, n_nonzero);
            double norm = 0.0;
            for (std::size_t dim : dims) {
                const double w = rng.normal();
                proj.weights[dim] = w;
                norm += w * w;
            }
            norm = std::sqrt(norm);
            if (norm > 0.0)
                for (double& w : proj.weights) w /= norm;

            std::vector<double> projected(n);
            for (std::size_t i = 0; i < n; ++i) projected[i] = dot(proj.weights, train.row(i));
            auto [lo_it, hi_it] = std::minmax_element(projected.begin(), projected.end());
            proj.lo = *lo_it;
            proj.hi = *hi_it;
            proj.counts.assign(n_bins_, 0);
            if (proj.hi > proj.lo)
                for (double v : projected) proj.counts[bin_of(proj, v)] += 1;
            else
                proj.counts[0] = n; // constant projection: single occupied bin
        }
    }

private:
    struct Projector {
        std::vector<double> weights;
        double lo = 0.0, hi = 0.0;
        std::vector<std::size_t> counts;
    };

    static double dot(const std::vector<double>& w, std::span<const double> row) {
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * row[i];
        return s;
    }

    std::size_t bin_of(const Projector& p, double v) const {
        if (v <= p.lo) return 0;
        if (v >= p.hi) return n_bins_ - 1;
        const double t = (v - p.lo) / (p.hi - p.lo);
        return std::min(static_cast<std::size_t>(t * static_cast<double>(n_bins_)), n_bins_ - 1);
    }

    ScoreVector do_score(const DataMatrix& x) const override {
        ScoreVector scores(x.rows(), 0.0);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            double s = 0.0;
            for (const auto& p : projectors_) {
                const double v = dot(p.weights, x.row(i));
                const double mass =
                    static_cast<double>(p.counts[p.hi > p.lo ? bin_of(p, v) : 0]) / n_train_;
                s += -std::log(std::max(mass, density_floor_));
            }
            scores[i] = s / static_cast<double>(projectors_.size());
        }
        return scores;
    }

    std::size_t n_bins_ = 10;
    double n_train_ = 1.0;
    double density_floor_ = 0.0;
    std::vector<Projector> projectors_;
};

} // namespace

ModelPtr fit_iforest(const DataMatrix& train, Seed seed, std::size_t n_trees,
                     std::size_t subsample) {
    return std::make_unique<IsolationForestModel>(train, seed, n_trees, subsample);
}

ModelPtr fit_loda(const DataMatrix& train, Seed seed, std::size_t n_projections) {
    return std::make_unique<LodaModel>(train, seed, n_projections);
}

} // namespace adbench::detectors
