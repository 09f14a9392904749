#include "adbench/synth/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "adbench/core/rng.hpp"
#include "adbench/detectors/kmeans.hpp"

namespace adbench::synth {

namespace {

Eigen::MatrixXd to_eigen(const DataMatrix& m) {
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                          Eigen::RowMajor>>(m.values().data(),
                                                            static_cast<Eigen::Index>(m.rows()),
                                                            static_cast<Eigen::Index>(m.cols()));
}

struct Workspace {
    Eigen::MatrixXd x;        // n x d
    Eigen::MatrixXd log_resp; // n x k
    Eigen::MatrixXd centered; // n x d scratch
    Eigen::MatrixXd solved;   // d x n scratch
    double cov_floor = 0.0;
};

// log N(x | mean, cov) for all rows at once. Whitens through the precision
// Cholesky so the per-component work is a single GEMM; no per-call allocation
// beyond the d x d factor.
void log_mvn_pdf_into(Workspace& ws, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                      Eigen::Ref<Eigen::VectorXd> out) {
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    require(llt.info() == Eigen::Success, Err::DegenerateData,
            "covariance not positive definite despite floor");
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < cov.rows(); ++i)
        log_det += 2.0 * std::log(llt.matrixLLT()(i, i));

    // precision_chol = L^-T, so ||(x - mu)^T precision_chol||^2 is the
    // Mahalanobis distance
    Eigen::MatrixXd precision_chol =
        Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
    llt.matrixL().transpose().solveInPlace(precision_chol);

    ws.centered.noalias() = ws.x * precision_chol;
    const Eigen::RowVectorXd mu_whitened = mean.transpose() * precision_chol;
    const double c = static_cast<double>(ws.x.cols()) * std::log(2.0 * std::numbers::pi);
    out = (-0.5 *
           ((ws.centered.rowwise() - mu_whitened).rowwise().squaredNorm().array() + log_det + c))
              .matrix();
}

double em_fit(Workspace& ws, GmmModel& model, int max_iter, double tol) {
    const auto n = ws.x.rows();
    const auto d = ws.x.cols();
    const std::size_t k = model.n_components();

    model.ll_trace.clear();
    double prev_ll = -std::numeric_limits<double>::infinity();
    double ll = prev_ll;
    model.converged = false;

    for (int iter = 0; iter < max_iter; ++iter) {
        // E step
        for (std::size_t c = 0; c < k; ++c) {
            log_mvn_pdf_into(ws, model.means[c], model.covariances[c],
                             ws.log_resp.col(static_cast<Eigen::Index>(c)));
            ws.log_resp.col(static_cast<Eigen::Index>(c)).array() += std::log(model.weights[c]);
        }
        const Eigen::VectorXd row_max = ws.log_resp.rowwise().maxCoeff();
        const Eigen::VectorXd log_norm =
            ((ws.log_resp.colwise() - row_max).array().exp().rowwise().sum().log() +
             row_max.array())
                .matrix();
        ll = log_norm.sum();
        model.ll_trace.push_back(ll);
        ws.log_resp.colwise() -= log_norm;

        if (std::isfinite(prev_ll) &&
            ll - prev_ll <= tol * std::max(std::abs(prev_ll), 1.0)) {
            model.converged = ll >= prev_ll - 1e-9 * std::max(std::abs(prev_ll), 1.0);
            break;
        }
        prev_ll = ll;

        // M step
        const Eigen::MatrixXd resp = ws.log_resp.array().exp();
        const Eigen::VectorXd counts = resp.colwise().sum();
        for (std::size_t c = 0; c < k; ++c) {
            const auto ci = static_cast<Eigen::Index>(c);
            const double nk = std::max(counts(ci), 1e-300);
            model.weights[c] = nk / static_cast<double>(n);
            model.means[c] = (resp.col(ci).transpose() * ws.x).transpose() / nk;
            ws.centered = ws.x.rowwise() - model.means[c].transpose();
            Eigen::MatrixXd cov =
                ws.centered.transpose() *
                (ws.centered.array().colwise() * resp.col(ci).array()).matrix() / nk;
            cov.diagonal().array() += ws.cov_floor;
            model.covariances[c] = 0.5 * (cov + cov.transpose()); // keep exactly symmetric
        }
        // keep weights a simplex under round-off
        double wsum = 0.0;
        for (double w : model.weights) wsum += w;
        for (double& w : model.weights) w /= wsum;
        (void)d;
    }
    model.log_likelihood = ll;
    return ll;
}

GmmModel fit_fixed_k(const DataMatrix& x, std::size_t k, Seed seed) {
    require(x.rows() >= 2 * k, Err::TooFewSamples,
            "GMM needs at least 2k samples for k components");
    const auto n = static_cast<Eigen::Index>(x.rows());
    const auto d = static_cast<Eigen::Index>(x.cols());

    Workspace ws;
    ws.x = to_eigen(x);

    double max_var = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
        const double mean = ws.x.col(j).mean();
        max_var = std::max(max_var, (ws.x.col(j).array() - mean).square().mean());
    }
    ws.cov_floor = 1e-6 * max_var;
    if (ws.cov_floor <= 0.0) ws.cov_floor = 1e-12;
    ws.log_resp.resize(n, static_cast<Eigen::Index>(k));
    ws.centered.resize(n, d);
    ws.solved.resize(d, n);

    // fallback covariance for empty/singleton clusters: global scatter
    const Eigen::VectorXd global_mean = ws.x.colwise().mean();
    const Eigen::MatrixXd centered = ws.x.rowwise() - global_mean.transpose();
    Eigen::MatrixXd global_cov = centered.transpose() * centered / static_cast<double>(n);
    global_cov.diagonal().array() += ws.cov_floor;

    Rng rng(seed);
    GmmModel best;
    double best_ll = -std::numeric_limits<double>::infinity();
    constexpr int kRestarts = 5;
    for (int restart = 0; restart < kRestarts; ++restart) {
        Rng restart_rng = rng.spawn(static_cast<std::uint64_t>(restart));

        GmmModel model;
        model.weights.assign(k, 1.0 / static_cast<double>(k));
        model.covariances.assign(k, global_cov);
        model.means.resize(k);
        // k-means++ seeding for the component means
        detectors::KMeansOptions opt;
        opt.restarts = 1;
        opt.max_iterations = 10;
        const auto km = detectors::run_kmeans(x, k, restart_rng, opt);
        for (std::size_t c = 0; c < k; ++c) {
            model.means[c].resize(d);
            for (Eigen::Index j = 0; j < d; ++j)
                model.means[c](j) = km.centroids(c, static_cast<std::size_t>(j));
        }

        const double ll = em_fit(ws, model, 200, 1e-6);
        if (ll > best_ll) {
            best_ll = ll;
            best = std::move(model);
        }
    }
    return best;
}

} // namespace

double gmm_log_likelihood(const GmmModel& model, const DataMatrix& x) {
    Workspace ws;
    ws.x = to_eigen(x);
    ws.centered.resize(ws.x.rows(), ws.x.cols());
    ws.solved.resize(ws.x.cols(), ws.x.rows());
    Eigen::MatrixXd log_p(ws.x.rows(), static_cast<Eigen::Index>(model.n_components()));
    for (std::size_t c = 0; c < model.n_components(); ++c) {
        log_mvn_pdf_into(ws, model.means[c], model.covariances[c],
                         log_p.col(static_cast<Eigen::Index>(c)));
        log_p.col(static_cast<Eigen::Index>(c)).array() += std::log(model.weights[c]);
    }
    const Eigen::VectorXd row_max = log_p.rowwise().maxCoeff();
    return ((log_p.colwise() - row_max).array().exp().rowwise().sum().log() + row_max.array())
        .sum();
}

double gmm_bic(const GmmModel& model, std::size_t n_rows) {
    const double d = static_cast<double>(model.dims());
    const double k = static_cast<double>(model.n_components());
    const double n_params = (k - 1.0) + k * d + k * d * (d + 1.0) / 2.0;
    return -2.0 * model.log_likelihood + n_params * std::log(static_cast<double>(n_rows));
}

GmmModel fit_gmm(const DataMatrix& x, std::size_t k, Seed seed) {
    require(x.rows() >= 2 && x.cols() >= 1, Err::TooFewSamples, "GMM needs data");
    if (k > 0) return fit_fixed_k(x, k, seed);

    // auto: minimum BIC over k = 1..min(10, n/20)
    const std::size_t k_max =
        std::max<std::size_t>(1, std::min<std::size_t>(10, x.rows() / 20));
    GmmModel best;
    double best_bic = std::numeric_limits<double>::infinity();
    for (std::size_t kk = 1; kk <= k_max; ++kk) {
        GmmModel model = fit_fixed_k(x, kk, derive_seed(seed, {kk}));
        const double bic = gmm_bic(model, x.rows());
        if (bic < best_bic) {
            best_bic = bic;
            best = std::move(model);
        }
    }
    return best;
}

DataMatrix sample_gmm(const GmmModel& model, std::size_t n, Seed seed) {
    require(n >= 1, Err::BadParameter, "sample count must be >= 1");
    require(model.n_components() >= 1, Err::DegenerateData, "empty mixture");
    const std::size_t d = model.dims();

    std::vector<Eigen::MatrixXd> chol(model.n_components());
    for (std::size_t c = 0; c < model.n_components(); ++c) {
        Eigen::LLT<Eigen::MatrixXd> llt(model.covariances[c]);
        require(llt.info() == Eigen::Success, Err::DegenerateData,
                "mixture covariance not positive definite");
        chol[c] = llt.matrixL();
    }

    Rng rng(seed);
    DataMatrix out(n, d);
    Eigen::VectorXd z(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        std::size_t comp = model.n_components() - 1;
        double acc = 0.0;
        for (std::size_t c = 0; c < model.n_components(); ++c) {
            acc += model.weights[c];
            if (u < acc) {
                comp = c;
                break;
            }
        }
        for (std::size_t j = 0; j < d; ++j) z(static_cast<Eigen::Index>(j)) = rng.normal();
        const Eigen::VectorXd sample = model.means[comp] + chol[comp] * z;
        for (std::size_t j = 0; j < d; ++j) out(i, j) = sample(static_cast<Eigen::Index>(j));
    }
    return out;
}

GmmModel GmmModel::with_scaled_covariances(double factor) const {
    GmmModel scaled = *this;
    for (auto& cov : scaled.covariances) cov *= factor;
    return scaled;
}

GmmModel GmmModel::with_scaled_means(double factor) const {
    GmmModel scaled = *this;
    for (auto& mean : scaled.means) mean *= factor;
    return scaled;
}

} // namespace adbench::synth
