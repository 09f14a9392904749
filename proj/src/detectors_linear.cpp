#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "adbench/detectors/detector.hpp"

namespace adbench::detectors {

namespace {

Eigen::MatrixXd to_eigen(const DataMatrix& m) {
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                          Eigen::RowMajor>>(m.values().data(),
                                                            static_cast<Eigen::Index>(m.rows()),
                                                            static_cast<Eigen::Index>(m.cols()));
}

// ---------------------------------------------------------------- PCA ------

class PcaModel final : public FittedModel {
public:
    PcaModel(const DataMatrix& train, double variance_kept) : FittedModel(train.cols()) {
        require(train.rows() >= 2, Err::TooFewSamples, "PCA needs at least 2 training rows");
        require(variance_kept > 0.0 && variance_kept <= 1.0, Err::BadParameter,
                "variance_kept must lie in (0, 1]");

        const Eigen::MatrixXd x = to_eigen(train);
        mean_ = x.colwise().mean();
        const Eigen::MatrixXd centered = x.rowwise() - mean_.transpose();
        const Eigen::MatrixXd cov =
            centered.transpose() * centered / static_cast<double>(train.rows() - 1);

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
        require(solver.info() == Eigen::Success, Err::DegenerateData,
                "covariance eigendecomposition failed");

        // eigenvalues ascending; walk from the largest until enough variance
        const Eigen::VectorXd eigenvalues = solver.eigenvalues().cwiseMax(0.0);
        const double total = eigenvalues.sum();
        require(total > 0.0, Err::DegenerateData, "training data has zero total variance");

        const Eigen::Index d = eigenvalues.size();
        double kept = 0.0;
        Eigen::Index n_components = 0;
        for (Eigen::Index i = d - 1; i >= 0; --i) {
            kept += eigenvalues(i);
            ++n_components;
            if (kept / total >= variance_kept) break;
        }
        components_.resize(d, n_components);
        for (Eigen::Index c = 0; c < n_components; ++c)
            components_.col(c) = solver.eigenvectors().col(d - 1 - c);
    }

private:
    ScoreVector do_score(const DataMatrix& x) const override {
        const Eigen::MatrixXd centered = to_eigen(x).rowwise() - mean_.transpose();
        // squared residual = ||x_c||^2 - ||V^T x_c||^2
        const Eigen::VectorXd norms = centered.rowwise().squaredNorm();
        const Eigen::VectorXd proj = (centered * components_).rowwise().squaredNorm();
        ScoreVector scores(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i) {
            scores[i] = std::max(0.0, norms(static_cast<Eigen::Index>(i)) -
                                          proj(static_cast<Eigen::Index>(i)));
        }
        return scores;
    }

    Eigen::VectorXd mean_;
    Eigen::MatrixXd components_; // d x n_components, orthonormal columns
};

// --------------------------------------------------------------- HBOS ------

class HbosModel final : public FittedModel {
public:
    HbosModel(const DataMatrix& train, std::size_t n_bins) : FittedModel(train.cols()), bins_(n_bins) {
        require(n_bins >= 1, Err::BadParameter, "n_bins must be >= 1");
        require(train.rows() >= 1, Err::TooFewSamples, "empty training matrix");
        const std::size_t n = train.rows(), d = train.cols();
        density_floor_ = 0.1 / static_cast<double>(n);

        features_.resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            auto col = train.column(j);
            auto [lo_it, hi_it] = std::minmax_element(col.begin(), col.end());
            Feature f;
            f.lo = *lo_it;
            f.hi = *hi_it;
            if (f.hi <= f.lo) {
                f.degenerate = true; // constant feature contributes 0 to every score
                features_[j] = std::move(f);
                continue;
            }
            f.counts.assign(n_bins, 0);
            for (double v : col) f.counts[bin_of(f, v)] += 1;
            f.max_count = *std::max_element(f.counts.begin(), f.counts.end());
            features_[j] = std::move(f);
        }
    }

private:
    struct Feature {
        double lo = 0.0, hi = 0.0;
        bool degenerate = false;
        std::vector<std::size_t> counts;
        std::size_t max_count = 0;
    };

    std::size_t bin_of(const Feature& f, double v) const {
        if (v <= f.lo) return 0;
        if (v >= f.hi) return bins_ - 1;
        const double t = (v - f.lo) / (f.hi - f.lo);
        auto b = static_cast<std::size_t>(t * static_cast<double>(bins_));
        return std::min(b, bins_ - 1);
    }

    ScoreVector do_score(const DataMatrix& x) const override {
        ScoreVector scores(x.rows(), 0.0);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < features_.size(); ++j) {
                const Feature& f = features_[j];
                if (f.degenerate) continue;
                const double count = static_cast<double>(f.counts[bin_of(f, x(i, j))]);
                const double density =
                    std::max(count / static_cast<double>(f.max_count), density_floor_);
                s += std::log(1.0 / density);
            }
            scores[i] = s;
        }
        return scores;
    }

    std::size_t bins_;
    double density_floor_;
    std::vector<Feature> features_;
};

// --------------------------------------------------------- ECOD/COPOD ------

// Adjusted Fisher-Pearson sample skewness; 0 for degenerate columns.
double sample_skewness(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n < 3) return 0.0;
    const double nd = static_cast<double>(n);
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / nd;
    double m2 = 0.0, m3 = 0.0;
    for (double x : v) {
        const double c = x - mean;
        m2 += c * c;
        m3 += c * c * c;
    }
    m2 /= nd;
    m3 /= nd;
    if (m2 <= 0.0) return 0.0;
    const double g1 = m3 / std::pow(m2, 1.5);
    return g1 * std::sqrt(nd * (nd - 1.0)) / (nd - 2.0);
}

class TailModel : public FittedModel {
public:
    TailModel(const DataMatrix& train, bool copod_tails)
        : FittedModel(train.cols()), copod_tails_(copod_tails) {
        require(train.rows() >= 2, Err::TooFewSamples, "tail model needs >= 2 training rows");
        const std::size_t d = train.cols();
        n_ = static_cast<double>(train.rows());
        sorted_.resize(d);
        right_skewed_.resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            sorted_[j] = train.column(j);
            right_skewed_[j] = sample_skewness(sorted_[j]) >= 0.0;
            std::sort(sorted_[j].begin(), sorted_[j].end());
        }
    }

protected:
    ScoreVector do_score(const DataMatrix& x) const override {
        const std::size_t d = sorted_.size();
        ScoreVector scores(x.rows(), 0.0);
        const double p_min = 1.0 / n_;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            double o_left = 0.0, o_right = 0.0, o_auto = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                const auto& col = sorted_[j];
                const double v = x(i, j);
                const double n_le = static_cast<double>(
                    std::upper_bound(col.begin(), col.end(), v) - col.begin());
                const double p_l = std::clamp(n_le / n_, p_min, 1.0);
                double p_r;
                if (copod_tails_) {
                    // right-continuous ECDF of the negated column
                    const double n_ge = n_ - static_cast<double>(std::lower_bound(col.begin(),
                                                                                  col.end(), v) -
                                                                 col.begin());
                    p_r = std::clamp(n_ge / n_, p_min, 1.0);
                } else {
                    p_r = std::clamp(1.0 - n_le / n_ + p_min, p_min, 1.0);
                }
                const double t_left = -std::log(p_l);
                const double t_right = -std::log(p_r);
                o_left += t_left;
                o_right += t_right;
                o_auto += right_skewed_[j] ? t_right : t_left;
            }
            scores[i] = std::max({o_left, o_right, o_auto});
        }
        return scores;
    }

private:
    bool copod_tails_;
    double n_ = 0.0;
    std::vector<std::vector<double>> sorted_;
    std::vector<bool> right_skewed_;
};

} // namespace

ModelPtr fit_pca(const DataMatrix& train, double variance_kept) {
    return std::make_unique<PcaModel>(train, variance_kept);
}

ModelPtr fit_hbos(const DataMatrix& train, std::size_t n_bins) {
    return std::make_unique<HbosModel>(train, n_bins);
}

ModelPtr fit_ecod(const DataMatrix& train) { return std::make_unique<TailModel>(train, false); }

ModelPtr fit_copod(const DataMatrix& train) { return std::make_unique<TailModel>(train, true); }

} // namespace adbench::detectors
