#pragma once

#include <vector>

#include "adbench/core/types.hpp"

namespace adbench::synth {

// Gaussian kernel density estimate of one feature, with the quantile function
// needed for copula-coupled sampling.
class MarginalKde {
public:
    MarginalKde() = default;
    explicit MarginalKde(std::vector<double> values);

    double bandwidth() const noexcept { return bandwidth_; }

    double cdf(double x) const;
    double pdf(double x) const;
    // inverse CDF: grid bracket + safeguarded Newton; u in [0, 1]
    double quantile(double u) const;

private:
    std::vector<double> values_; // sorted
    double bandwidth_ = 1.0;
    double lo_ = 0.0, hi_ = 0.0; // quantile search bracket
    std::vector<double> grid_x_, grid_cdf_;
};

} // namespace adbench::synth
