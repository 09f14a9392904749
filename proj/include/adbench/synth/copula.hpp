#pragma once

#include <vector>

#include <Eigen/Dense>

#include "adbench/core/rng.hpp"
#include "adbench/core/types.hpp"
#include "adbench/synth/kde.hpp"

namespace adbench::synth {

// Gaussian copula over KDE marginals: rank correlation (Kendall's tau mapped
// through the sine transform) repaired to a PSD correlation matrix.
class CopulaModel {
public:
    explicit CopulaModel(const DataMatrix& x_normal);

    std::size_t dims() const noexcept { return marginals_.size(); }
    const Eigen::MatrixXd& correlation() const noexcept { return correlation_; }
    const MarginalKde& marginal(std::size_t j) const { return marginals_[j]; }

    // Dependency-preserving samples: correlated Gaussian scores pushed through
    // the KDE quantiles.
    DataMatrix sample_coupled(std::size_t n, Rng& rng) const;

    // Dependency-free samples: independent uniforms per feature through the
    // same marginals.
    DataMatrix sample_independent(std::size_t n, Rng& rng) const;

private:
    std::vector<MarginalKde> marginals_;
    Eigen::MatrixXd correlation_;
    Eigen::MatrixXd cholesky_;
};

// Kendall tau-a by merge-sort inversion counting; exposed for tests.
double kendall_tau(std::span<const double> a, std::span<const double> b);

} // namespace adbench::synth
