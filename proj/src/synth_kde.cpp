#include "adbench/synth/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace adbench::synth {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

// kernels further than this many bandwidths contribute 0 or 1 exactly at
// double precision
constexpr double kKernelCut = 9.0;

} // namespace

MarginalKde::MarginalKde(std::vector<double> values) : values_(std::move(values)) {
    require(!values_.empty(), Err::TooFewSamples, "KDE needs at least one value");
    std::sort(values_.begin(), values_.end());
    const double n = static_cast<double>(values_.size());

    double mean = 0.0;
    for (double v : values_) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values_) var += (v - mean) * (v - mean);
    const double stddev = std::sqrt(var / n);

    const auto q = [&](double p) {
        const double idx = p * (n - 1.0);
        const auto lo = static_cast<std::size_t>(idx);
        const std::size_t hi = std::min<std::size_t>(lo + 1, values_.size() - 1);
        return values_[lo] + (idx - static_cast<double>(lo)) * (values_[hi] - values_[lo]);
    };
    const double iqr = q(0.75) - q(0.25);

    // Silverman's rule with an absolute floor for (near-)constant features.
    double spread = stddev;
    if (iqr > 0.0) spread = std::min(stddev, iqr / 1.34);
    bandwidth_ = 0.9 * spread * std::pow(n, -0.2);
    bandwidth_ = std::max(bandwidth_, 1e-6 * (stddev + 1e-12));

    lo_ = values_.front() - kKernelCut * bandwidth_;
    hi_ = values_.back() + kKernelCut * bandwidth_;

    // monotone grid for inverse-CDF bracketing
    constexpr std::size_t kGridSize = 1024;
    grid_x_.resize(kGridSize);
    grid_cdf_.resize(kGridSize);
    for (std::size_t g = 0; g < kGridSize; ++g) {
        grid_x_[g] = lo_ + (hi_ - lo_) * static_cast<double>(g) /
                               static_cast<double>(kGridSize - 1);
        grid_cdf_[g] = cdf(grid_x_[g]);
    }
}

double MarginalKde::cdf(double x) const {
    // values below the kernel window contribute exactly 1, above exactly 0
    const double cut = kKernelCut * bandwidth_;
    const auto begin =
        std::lower_bound(values_.begin(), values_.end(), x - cut) - values_.begin();
    const auto end = std::upper_bound(values_.begin(), values_.end(), x + cut) - values_.begin();
    double acc = static_cast<double>(begin); // each fully-passed kernel adds 1
    for (auto i = begin; i < end; ++i) acc += normal_cdf((x - values_[static_cast<std::size_t>(i)]) / bandwidth_);
    return acc / static_cast<double>(values_.size());
}

double MarginalKde::pdf(double x) const {
    const double cut = kKernelCut * bandwidth_;
    const auto begin =
        std::lower_bound(values_.begin(), values_.end(), x - cut) - values_.begin();
    const auto end = std::upper_bound(values_.begin(), values_.end(), x + cut) - values_.begin();
    double acc = 0.0;
    for (auto i = begin; i < end; ++i)
        acc += normal_pdf((x - values_[static_cast<std::size_t>(i)]) / bandwidth_);
    return acc / (bandwidth_ * static_cast<double>(values_.size()));
}

double MarginalKde::quantile(double u) const {
    u = std::clamp(u, 1e-14, 1.0 - 1e-14);
    // bracket on the grid, then safeguarded Newton with the exact CDF
    const auto it = std::lower_bound(grid_cdf_.begin(), grid_cdf_.end(), u);
    std::size_t hi_idx = static_cast<std::size_t>(it - grid_cdf_.begin());
    hi_idx = std::clamp<std::size_t>(hi_idx, 1, grid_x_.size() - 1);
    double lo = grid_x_[hi_idx - 1], hi = grid_x_[hi_idx];

    // interpolated start
    const double c_lo = grid_cdf_[hi_idx - 1], c_hi = grid_cdf_[hi_idx];
    double x = c_hi > c_lo ? lo + (hi - lo) * (u - c_lo) / (c_hi - c_lo) : 0.5 * (lo + hi);

    for (int iter = 0; iter < 30; ++iter) {
        const double f = cdf(x) - u;
        if (f > 0.0)
            hi = x;
        else
            lo = x;
        if (std::abs(f) < 1e-12 || hi - lo < 1e-12 * (1.0 + std::abs(lo))) break;
        const double slope = pdf(x);
        double next = slope > 0.0 ? x - f / slope : 0.5 * (lo + hi);
        if (next <= lo || next >= hi) next = 0.5 * (lo + hi); // Newton left the bracket
        x = next;
    }
    return x;
}

} // namespace adbench::synth
