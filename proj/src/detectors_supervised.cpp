#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "adbench/core/rng.hpp"
#include "adbench/detectors/detector.hpp"

namespace adbench::detectors {

namespace {

void require_both_classes(const LabelVector& y) {
    const std::size_t pos = y.anomaly_count();
    require(pos >= 1 && pos < y.size(), Err::SingleClassTraining,
            "training labels contain a single class");
}

// ------------------------------------------------------- Gaussian NB -------

class GnbModel final : public FittedModel {
public:
    GnbModel(const DataMatrix& train, const LabelVector& y, double var_smoothing)
        : FittedModel(train.cols()) {
        require(train.rows() == y.size(), Err::LengthMismatch, "labels do not match rows");
        require_both_classes(y);

        const std::size_t n = train.rows(), d = train.cols();

        // smoothing scale: largest per-feature variance over all rows
        double max_var = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            double mean = 0.0, sq = 0.0;
            for (std::size_t i = 0; i < n; ++i) mean += train(i, j);
            mean /= static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double c = train(i, j) - mean;
                sq += c * c;
            }
            max_var = std::max(max_var, sq / static_cast<double>(n));
        }
        double epsilon = var_smoothing * max_var;
        if (epsilon <= 0.0) epsilon = 1e-12;

        for (int cls = 0; cls < 2; ++cls) {
            std::vector<std::size_t> rows;
            for (std::size_t i = 0; i < n; ++i)
                if (y[i] == cls) rows.push_back(i);
            log_prior_[cls] =
                std::log(static_cast<double>(rows.size()) / static_cast<double>(n));
            mean_[cls].assign(d, 0.0);
            var_[cls].assign(d, 0.0);
            for (std::size_t j = 0; j < d; ++j) {
                double m = 0.0;
                for (std::size_t i : rows) m += train(i, j);
                m /= static_cast<double>(rows.size());
                double v = 0.0;
                for (std::size_t i : rows) {
                    const double c = train(i, j) - m;
                    v += c * c;
                }
                mean_[cls][j] = m;
                var_[cls][j] = v / static_cast<double>(rows.size()) + epsilon;
            }
        }
    }

private:
    double log_likelihood(int cls, std::span<const double> row) const {
        double ll = log_prior_[cls];
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double v = var_[cls][j];
            const double c = row[j] - mean_[cls][j];
            ll += -0.5 * (std::log(2.0 * std::numbers::pi * v) + c * c / v);
        }
        return ll;
    }

    ScoreVector do_score(const DataMatrix& x) const override {
        ScoreVector scores(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const double l0 = log_likelihood(0, x.row(i));
            const double l1 = log_likelihood(1, x.row(i));
            const double m = std::max(l0, l1);
            scores[i] = std::exp(l1 - m) / (std::exp(l0 - m) + std::exp(l1 - m));
        }
        return scores;
    }

    double log_prior_[2] = {0.0, 0.0};
    std::vector<double> mean_[2];
    std::vector<double> var_[2];
};

// ----------------------------------------------------- Random Forest -------

struct TreeNode {
    int feature = -1; // -1: leaf
    double threshold = 0.0;
    int left = -1, right = -1;
    double p_anomaly = 0.0;
};

class RandomForestModel final : public FittedModel {
public:
    RandomForestModel(const DataMatrix& train, const LabelVector& y, Seed seed,
                      std::size_t n_trees)
        : FittedModel(train.cols()) {
        require(n_trees >= 1, Err::BadParameter, "rforest: n_trees must be >= 1");
        require(train.rows() == y.size(), Err::LengthMismatch, "labels do not match rows");
        require_both_classes(y);

        const std::size_t n = train.rows();
        mtry_ = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(train.cols()))));

        Rng rng(seed);
        trees_.resize(n_trees);
        for (std::size_t t = 0; t < n_trees; ++t) {
            Rng tree_rng = rng.spawn(t);
            std::vector<std::size_t> rows(n);
            for (auto& r : rows) r = tree_rng.uniform_index(n); // bootstrap
            build(trees_[t], train, y, rows, tree_rng);
        }
    }

private:
    using Tree = std::vector<TreeNode>;

    struct Split {
        bool found = false;
        std::size_t feature = 0;
        double threshold = 0.0;
        double impurity = std::numeric_limits<double>::infinity();
    };

    static double gini(double pos, double total) {
        if (total <= 0.0) return 0.0;
        const double p = pos / total;
        return 2.0 * p * (1.0 - p);
    }

    // Best Gini split of `rows` on `feature`; candidates are midpoints between
    // distinct consecutive sorted values.
    Split best_split_on(const DataMatrix& x, const LabelVector& y,
                        const std::vector<std::size_t>& rows, std::size_t feature) const {
        std::vector<std::size_t> order = rows;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return x(a, feature) < x(b, feature);
        });
        const double total = static_cast<double>(rows.size());
        double total_pos = 0.0;
        for (std::size_t r : rows) total_pos += (y[r] == 1);

        Split best;
        best.feature = feature;
        double left_n = 0.0, left_pos = 0.0;
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            left_n += 1.0;
            left_pos += (y[order[i]] == 1);
            const double v = x(order[i], feature);
            const double next = x(order[i + 1], feature);
            if (next <= v) continue;
            const double right_n = total - left_n;
            const double impurity = (left_n * gini(left_pos, left_n) +
                                     right_n * gini(total_pos - left_pos, right_n)) /
                                    total;
            if (impurity < best.impurity) {
                best.found = true;
                best.impurity = impurity;
                best.threshold = v + 0.5 * (next - v);
            }
        }
        return best;
    }

    int build(Tree& tree, const DataMatrix& x, const LabelVector& y,
              const std::vector<std::size_t>& rows, Rng& rng) {
        const int id = static_cast<int>(tree.size());
        tree.push_back({});

        double pos = 0.0;
        for (std::size_t r : rows) pos += (y[r] == 1);
        tree[id].p_anomaly = pos / static_cast<double>(rows.size());

        const bool pure = (pos == 0.0 || pos == static_cast<double>(rows.size()));
        if (pure || rows.size() < 2) return id;

        // mtry random features; fall back to a full scan when none split
        Split best;
        const auto candidates = rng.sample_without_replacement(x.cols(), mtry_);
        for (std::size_t f : candidates) {
            const Split s = best_split_on(x, y, rows, f);
            if (s.found && s.impurity < best.impurity) best = s;
        }
        if (!best.found) {
            for (std::size_t f = 0; f < x.cols(); ++f) {
                const Split s = best_split_on(x, y, rows, f);
                if (s.found && s.impurity < best.impurity) best = s;
            }
        }
        if (!best.found) return id; // identical feature rows with mixed labels

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows)
            (x(r, best.feature) <= best.threshold ? left_rows : right_rows).push_back(r);

        tree[id].feature = static_cast<int>(best.feature);
        tree[id].threshold = best.threshold;
        const int l = build(tree, x, y, left_rows, rng);
        const int r = build(tree, x, y, right_rows, rng);
        tree[id].left = l;
        tree[id].right = r;
        return id;
    }

    ScoreVector do_score(const DataMatrix& x) const override {
        ScoreVector scores(x.rows(), 0.0);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const auto row = x.row(i);
            double sum = 0.0;
            for (const auto& tree : trees_) {
                int node = 0;
                while (tree[node].feature >= 0)
                    node = row[static_cast<std::size_t>(tree[node].feature)] <=
                                   tree[node].threshold
                               ? tree[node].left
                               : tree[node].right;
                sum += tree[node].p_anomaly;
            }
            scores[i] = sum / static_cast<double>(trees_.size());
        }
        return scores;
    }

    std::size_t mtry_ = 1;
    std::vector<Tree> trees_;
};

// -------------------------------------------------------- ScoreStack -------

// Unsupervised roster scores appended as features, then a random forest on
// the augmented space with revealed anomalies as the positive class.
class ScoreStackModel final : public FittedModel {
public:
    ScoreStackModel(const DataMatrix& train, const LabelMask& mask,
                    const std::vector<DetectorSpec>& roster, Seed seed, std::size_t n_trees)
        : FittedModel(train.cols()) {
        require(mask.size() == train.rows(), Err::LengthMismatch,
                "mask length does not match rows");
        const LabelVector y_eff = mask.effective_labels();
        require_both_classes(y_eff);

        Rng rng(seed);
        base_models_.reserve(roster.size());
        for (std::size_t r = 0; r < roster.size(); ++r) {
            FitContext ctx; // roster detectors are unsupervised
            base_models_.push_back(
                fit_detector(roster[r], train, ctx, derive_seed(seed, {1, r})));
        }

        const DataMatrix augmented_train = augment(train);
        forest_ = std::make_unique<RandomForestModel>(augmented_train, y_eff, seed, n_trees);
    }

private:
    DataMatrix augment(const DataMatrix& x) const {
        if (base_models_.empty()) return x;
        DataMatrix out(x.rows(), x.cols() + base_models_.size());
        std::vector<ScoreVector> columns;
        columns.reserve(base_models_.size());
        for (const auto& model : base_models_) columns.push_back(model->score(x));
        for (std::size_t i = 0; i < x.rows(); ++i) {
            auto dst = out.row(i);
            const auto src = x.row(i);
            std::copy(src.begin(), src.end(), dst.begin());
            for (std::size_t c = 0; c < columns.size(); ++c)
                dst[x.cols() + c] = columns[c][i];
        }
        return out;
    }

    ScoreVector do_score(const DataMatrix& x) const override {
        return forest_->score(augment(x));
    }

    std::vector<ModelPtr> base_models_;
    std::unique_ptr<RandomForestModel> forest_;
};

} // namespace

ModelPtr fit_gnb(const DataMatrix& train, const LabelVector& y, double var_smoothing) {
    return std::make_unique<GnbModel>(train, y, var_smoothing);
}

ModelPtr fit_rforest(const DataMatrix& train, const LabelVector& y, Seed seed,
                     std::size_t n_trees) {
    return std::make_unique<RandomForestModel>(train, y, seed, n_trees);
}

ModelPtr fit_scorestack(const DataMatrix& train, const LabelMask& mask,
                        const std::vector<DetectorSpec>& roster, Seed seed,
                        std::size_t n_trees) {
    return std::make_unique<ScoreStackModel>(train, mask, roster, seed, n_trees);
}

} // namespace adbench::detectors
