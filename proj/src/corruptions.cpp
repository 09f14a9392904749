#include "adbench/corrupt/corruptions.hpp"

#include <algorithm>
#include <cmath>

#include "adbench/core/rng.hpp"

namespace adbench::corrupt {

namespace {

void duplicate_side(const DataMatrix& x, const LabelVector& y, std::size_t factor, Rng& rng,
                    DataMatrix& out_x, LabelVector& out_y) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        rows.push_back(i);
        if (y[i] == 1)
            for (std::size_t copy = 1; copy < factor; ++copy) rows.push_back(i);
    }
    rng.shuffle(rows);
    out_x = DataMatrix(rows.size(), x.cols());
    std::vector<int> labels(rows.size());
    for (std::size_t pos = 0; pos < rows.size(); ++pos) {
        const auto src = x.row(rows[pos]);
        std::copy(src.begin(), src.end(), out_x.row(pos).begin());
        labels[pos] = y[rows[pos]];
    }
    out_y = LabelVector(std::move(labels));
}

} // namespace

SplitDataset duplicate_anomalies(const SplitDataset& split, std::size_t factor, Seed seed) {
    require(factor >= 1 && factor <= 6, Err::FactorOutOfRange,
            "duplication factor must lie in [1, 6]");
    SplitDataset out;
    Rng train_rng(derive_seed(seed, {0}));
    Rng test_rng(derive_seed(seed, {1}));
    duplicate_side(split.train_x, split.train_y, factor, train_rng, out.train_x, out.train_y);
    duplicate_side(split.test_x, split.test_y, factor, test_rng, out.test_x, out.test_y);
    return out;
}

SplitDataset add_irrelevant_features(const SplitDataset& split, double noise_ratio, Seed seed) {
    require(noise_ratio >= 0.0 && noise_ratio <= 0.5, Err::RatioOutOfRange,
            "noise ratio must lie in [0, 0.5]");
    const std::size_t d = split.train_x.cols();
    const auto extra = static_cast<std::size_t>(
        std::llround(static_cast<double>(d) * noise_ratio));
    if (extra == 0) return split;

    Rng rng(seed);
    SplitDataset out;
    out.train_y = split.train_y;
    out.test_y = split.test_y;
    out.train_x = DataMatrix(split.train_x.rows(), d + extra);
    out.test_x = DataMatrix(split.test_x.rows(), d + extra);
    for (std::size_t i = 0; i < split.train_x.rows(); ++i) {
        const auto src = split.train_x.row(i);
        std::copy(src.begin(), src.end(), out.train_x.row(i).begin());
    }
    for (std::size_t i = 0; i < split.test_x.rows(); ++i) {
        const auto src = split.test_x.row(i);
        std::copy(src.begin(), src.end(), out.test_x.row(i).begin());
    }

    for (std::size_t c = 0; c < extra; ++c) {
        const std::size_t source = rng.uniform_index(d);
        const auto col = split.train_x.column(source);
        const auto [lo_it, hi_it] = std::minmax_element(col.begin(), col.end());
        const double lo = *lo_it, hi = *hi_it;
        for (std::size_t i = 0; i < out.train_x.rows(); ++i)
            out.train_x(i, d + c) = rng.uniform(lo, hi);
        for (std::size_t i = 0; i < out.test_x.rows(); ++i)
            out.test_x(i, d + c) = rng.uniform(lo, hi);
    }
    return out;
}

SplitDataset flip_labels(const SplitDataset& split, double error_ratio, Seed seed) {
    require(error_ratio >= 0.0 && error_ratio <= 0.5, Err::RatioOutOfRange,
            "error ratio must lie in [0, 0.5]");
    SplitDataset out = split;
    const std::size_t n = split.train_y.size();
    const auto n_flips =
        static_cast<std::size_t>(std::llround(static_cast<double>(n) * error_ratio));
    if (n_flips == 0) return out;

    Rng rng(seed);
    for (std::size_t idx : rng.sample_without_replacement(n, n_flips))
        out.train_y[idx] = 1 - out.train_y[idx];
    return out;
}

} // namespace adbench::corrupt
