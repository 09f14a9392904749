#include "adbench/eval/split.hpp"

#include <algorithm>
#include <cmath>

#include "adbench/core/rng.hpp"

namespace adbench::eval {

SplitDataset stratified_split(const DataMatrix& x, const LabelVector& y, double train_frac,
                              Seed seed) {
    require(x.rows() == y.size(), Err::LengthMismatch, "labels do not match matrix rows");
    require(train_frac > 0.0 && train_frac < 1.0, Err::RatioOutOfRange,
            "train_frac must lie strictly between 0 and 1");

    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i] == 1].push_back(i);
    require(by_class[0].size() >= 2 && by_class[1].size() >= 2, Err::ClassTooSmall,
            "each class needs at least 2 members to split");

    Rng rng(seed);
    std::vector<std::size_t> train_idx, test_idx;
    for (auto& cls : by_class) {
        rng.shuffle(cls);
        const std::size_t count = cls.size();
        std::size_t take = static_cast<std::size_t>(
            std::llround(static_cast<double>(count) * train_frac));
        take = std::clamp<std::size_t>(take, 1, count - 1); // keep >=1 on both sides
        train_idx.insert(train_idx.end(), cls.begin(), cls.begin() + take);
        test_idx.insert(test_idx.end(), cls.begin() + take, cls.end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());

    SplitDataset out;
    out.train_x = DataMatrix(train_idx.size(), x.cols());
    out.test_x = DataMatrix(test_idx.size(), x.cols());
    std::vector<int> ytr, yte;
    for (std::size_t r = 0; r < train_idx.size(); ++r) {
        const auto src = x.row(train_idx[r]);
        std::copy(src.begin(), src.end(), out.train_x.row(r).begin());
        ytr.push_back(y[train_idx[r]]);
    }
    for (std::size_t r = 0; r < test_idx.size(); ++r) {
        const auto src = x.row(test_idx[r]);
        std::copy(src.begin(), src.end(), out.test_x.row(r).begin());
        yte.push_back(y[test_idx[r]]);
    }
    out.train_y = LabelVector(std::move(ytr));
    out.test_y = LabelVector(std::move(yte));
    return out;
}

LabelMask subsample_labels(const LabelVector& y_train, double gamma_l, Seed seed) {
    require(gamma_l > 0.0 && gamma_l <= 1.0, Err::RatioOutOfRange,
            "gamma_l must lie in (0, 1]");
    std::vector<std::size_t> anomalies;
    for (std::size_t i = 0; i < y_train.size(); ++i)
        if (y_train[i] == 1) anomalies.push_back(i);
    require(!anomalies.empty(), Err::NoAnomalies, "no anomalies to reveal");

    std::size_t reveal = static_cast<std::size_t>(
        std::llround(static_cast<double>(anomalies.size()) * gamma_l));
    reveal = std::clamp<std::size_t>(reveal, 1, anomalies.size());

    Rng rng(seed);
    rng.shuffle(anomalies);
    LabelMask mask(y_train.size());
    for (std::size_t i = 0; i < reveal; ++i) mask.set_revealed(anomalies[i]);
    return mask;
}

} // namespace adbench::eval
