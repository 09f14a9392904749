#pragma once

#include <vector>

#include <Eigen/Dense>

#include "adbench/core/seed.hpp"
#include "adbench/core/types.hpp"

namespace adbench::synth {

// Full-covariance Gaussian mixture fitted by EM.
struct GmmModel {
    std::vector<double> weights;
    std::vector<Eigen::VectorXd> means;
    std::vector<Eigen::MatrixXd> covariances;
    bool converged = false;
    double log_likelihood = 0.0;
    std::vector<double> ll_trace; // per-iteration log-likelihood of the kept restart

    std::size_t n_components() const noexcept { return weights.size(); }
    std::size_t dims() const noexcept { return means.empty() ? 0 : means.front().size(); }

    // Copies with every covariance (resp. mean) scaled; sampling these yields
    // the covariance- and mean-shifted mixtures used by the generators.
    GmmModel with_scaled_covariances(double factor) const;
    GmmModel with_scaled_means(double factor) const;
};

// EM with k-means++ initialization, 5 restarts, 200-iteration cap, 1e-6
// relative log-likelihood tolerance, covariance floor 1e-6 * max feature
// variance. k = 0 selects the component count in {1..min(10, n/20)} by
// minimum BIC. Non-convergence is reported through GmmModel::converged with
// the best model so far.
GmmModel fit_gmm(const DataMatrix& x, std::size_t k, Seed seed);

// i.i.d. mixture samples; deterministic per seed.
DataMatrix sample_gmm(const GmmModel& model, std::size_t n, Seed seed);

double gmm_log_likelihood(const GmmModel& model, const DataMatrix& x);

double gmm_bic(const GmmModel& model, std::size_t n_rows);

} // namespace adbench::synth
