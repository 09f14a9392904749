#include "adbench/synth/copula.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace adbench::synth {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

std::size_t count_inversions(std::vector<double>& v, std::vector<double>& buffer,
                             std::size_t lo, std::size_t hi) {
    if (hi - lo <= 1) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::size_t inv = count_inversions(v, buffer, lo, mid) + count_inversions(v, buffer, mid, hi);
    std::merge(v.begin() + lo, v.begin() + mid, v.begin() + mid, v.begin() + hi,
               buffer.begin() + lo);
    // count pairs (i from left, j from right) with v[i] > v[j]
    std::size_t i = lo, j = mid;
    while (i < mid && j < hi) {
        if (v[i] > v[j]) {
            inv += mid - i;
            ++j;
        } else {
            ++i;
        }
    }
    std::copy(buffer.begin() + lo, buffer.begin() + hi, v.begin() + lo);
    return inv;
}

} // namespace

double kendall_tau(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    require(n == b.size() && n >= 2, Err::LengthMismatch, "kendall_tau needs paired data");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (a[i] != a[j]) return a[i] < a[j];
        return b[i] < b[j];
    });
    std::vector<double> b_sorted(n), buffer(n);
    for (std::size_t i = 0; i < n; ++i) b_sorted[i] = b[order[i]];
    const double inv = static_cast<double>(count_inversions(b_sorted, buffer, 0, n));
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return 1.0 - 2.0 * inv / pairs;
}

CopulaModel::CopulaModel(const DataMatrix& x_normal) {
    require(x_normal.rows() >= 10, Err::TooFewSamples,
            "copula fit needs at least 10 rows");
    const std::size_t d = x_normal.cols();

    std::vector<std::vector<double>> columns(d);
    for (std::size_t j = 0; j < d; ++j) columns[j] = x_normal.column(j);
    marginals_.reserve(d);
    for (std::size_t j = 0; j < d; ++j) marginals_.emplace_back(columns[j]);

    correlation_.setIdentity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            const double tau = kendall_tau(columns[i], columns[j]);
            const double rho = std::sin(0.5 * std::numbers::pi * tau);
            correlation_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rho;
            correlation_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = rho;
        }

    // PSD repair: clip eigenvalues, renormalize to unit diagonal
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(correlation_);
    require(solver.info() == Eigen::Success, Err::DegenerateData,
            "correlation eigendecomposition failed");
    const Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(1e-10);
    correlation_ = solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().transpose();
    Eigen::VectorXd scale = correlation_.diagonal().cwiseSqrt().cwiseInverse();
    correlation_ = scale.asDiagonal() * correlation_ * scale.asDiagonal();
    correlation_ = 0.5 * (correlation_ + correlation_.transpose());

    Eigen::LLT<Eigen::MatrixXd> llt(correlation_);
    if (llt.info() != Eigen::Success) {
        // nudge the diagonal if clipping left a marginal factorization
        correlation_.diagonal().array() += 1e-10;
        llt.compute(correlation_);
        require(llt.info() == Eigen::Success, Err::DegenerateData,
                "copula correlation not factorizable");
    }
    cholesky_ = llt.matrixL();
}

DataMatrix CopulaModel::sample_coupled(std::size_t n, Rng& rng) const {
    const std::size_t d = dims();
    DataMatrix out(n, d);
    Eigen::VectorXd z(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) z(static_cast<Eigen::Index>(j)) = rng.normal();
        const Eigen::VectorXd correlated = cholesky_ * z;
        for (std::size_t j = 0; j < d; ++j)
            out(i, j) = marginals_[j].quantile(normal_cdf(correlated(static_cast<Eigen::Index>(j))));
    }
    return out;
}

DataMatrix CopulaModel::sample_independent(std::size_t n, Rng& rng) const {
    const std::size_t d = dims();
    DataMatrix out(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) out(i, j) = marginals_[j].quantile(rng.uniform());
    return out;
}

} // namespace adbench::synth
