#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "adbench/core/rng.hpp"
#include "adbench/corrupt/corruptions.hpp"

using namespace adbench;
using namespace adbench::corrupt;

namespace {

SplitDataset make_split(std::size_t n_train, std::size_t n_test, std::size_t anomalies_each,
                        Seed seed) {
    Rng rng(seed);
    SplitDataset s;
    s.train_x = DataMatrix(n_train, 3);
    s.test_x = DataMatrix(n_test, 3);
    std::vector<int> ytr(n_train, 0), yte(n_test, 0);
    for (std::size_t i = 0; i < n_train; ++i) {
        for (std::size_t j = 0; j < 3; ++j) s.train_x(i, j) = rng.normal();
        if (i < anomalies_each) ytr[i] = 1;
    }
    for (std::size_t i = 0; i < n_test; ++i) {
        for (std::size_t j = 0; j < 3; ++j) s.test_x(i, j) = rng.normal();
        if (i < anomalies_each) yte[i] = 1;
    }
    s.train_y = LabelVector(std::move(ytr));
    s.test_y = LabelVector(std::move(yte));
    return s;
}

std::multiset<std::vector<double>> row_multiset(const DataMatrix& x) {
    std::multiset<std::vector<double>> rows;
    for (std::size_t i = 0; i < x.rows(); ++i)
        rows.emplace(x.row(i).begin(), x.row(i).end());
    return rows;
}

} // namespace

TEST(DuplicateAnomalies, FactorOneIsIdentityUpToOrder) {
    const SplitDataset s = make_split(40, 20, 5, 1);
    const SplitDataset out = duplicate_anomalies(s, 1, 9);
    EXPECT_EQ(out.train_x.rows(), 40u);
    EXPECT_EQ(row_multiset(out.train_x), row_multiset(s.train_x));
    EXPECT_EQ(out.train_y.anomaly_count(), 5u);
}

TEST(DuplicateAnomalies, FactorSixSextuplesAnomalies) {
    const SplitDataset s = make_split(100, 50, 10, 2);
    const SplitDataset out = duplicate_anomalies(s, 6, 9);
    EXPECT_EQ(out.train_y.anomaly_count(), 60u);
    EXPECT_EQ(out.train_x.rows(), 90u + 60u);
    EXPECT_EQ(out.test_y.anomaly_count(), 60u);
}

TEST(DuplicateAnomalies, RatioArithmetic) {
    // p=0.1, f=6: new ratio = 6*0.1 / (6*0.1 + 0.9) = 0.4
    const SplitDataset s = make_split(100, 100, 10, 3);
    const SplitDataset out = duplicate_anomalies(s, 6, 9);
    EXPECT_DOUBLE_EQ(out.train_y.anomaly_ratio(), 0.4);
}

TEST(DuplicateAnomalies, PreservesDistinctAnomalyRows) {
    const SplitDataset s = make_split(30, 30, 4, 4);
    const SplitDataset out = duplicate_anomalies(s, 3, 11);
    std::multiset<std::vector<double>> original, duplicated;
    for (std::size_t i = 0; i < s.train_x.rows(); ++i)
        if (s.train_y[i] == 1)
            original.emplace(s.train_x.row(i).begin(), s.train_x.row(i).end());
    for (std::size_t i = 0; i < out.train_x.rows(); ++i)
        if (out.train_y[i] == 1)
            duplicated.emplace(out.train_x.row(i).begin(), out.train_x.row(i).end());
    EXPECT_EQ(duplicated.size(), 3 * original.size());
    for (const auto& row : original) EXPECT_EQ(duplicated.count(row), 3u);
}

TEST(DuplicateAnomalies, FactorOutOfRangeRejected) {
    const SplitDataset s = make_split(20, 20, 3, 5);
    EXPECT_THROW(duplicate_anomalies(s, 0, 1), BenchError);
    EXPECT_THROW(duplicate_anomalies(s, 7, 1), BenchError);
}

TEST(AddIrrelevantFeatures, ZeroRatioIsIdentity) {
    const SplitDataset s = make_split(25, 10, 3, 6);
    const SplitDataset out = add_irrelevant_features(s, 0.0, 3);
    EXPECT_EQ(out.train_x.values(), s.train_x.values());
    EXPECT_EQ(out.test_x.values(), s.test_x.values());
}

TEST(AddIrrelevantFeatures, HalfRatioOnTenColumnsGivesFifteen) {
    Rng rng(7);
    SplitDataset s;
    s.train_x = DataMatrix(30, 10);
    s.test_x = DataMatrix(10, 10);
    for (std::size_t i = 0; i < 30; ++i)
        for (std::size_t j = 0; j < 10; ++j) s.train_x(i, j) = rng.normal();
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 10; ++j) s.test_x(i, j) = rng.normal();
    std::vector<int> y(30, 0);
    y[0] = 1;
    s.train_y = LabelVector(y);
    std::vector<int> yt(10, 0);
    yt[0] = 1;
    s.test_y = LabelVector(yt);

    const SplitDataset out = add_irrelevant_features(s, 0.5, 8);
    EXPECT_EQ(out.train_x.cols(), 15u);
    EXPECT_EQ(out.test_x.cols(), 15u);
}

TEST(AddIrrelevantFeatures, OriginalColumnsBitIdenticalAndNoiseBounded) {
    const SplitDataset s = make_split(60, 30, 5, 9);
    const SplitDataset out = add_irrelevant_features(s, 0.5, 10);
    ASSERT_EQ(out.train_x.cols(), 5u); // round(3 * 0.5) = 2 extra
    for (std::size_t i = 0; i < s.train_x.rows(); ++i)
        for (std::size_t j = 0; j < 3; ++j)
            EXPECT_EQ(out.train_x(i, j), s.train_x(i, j));

    // noise values fall inside SOME original feature's train range; verify
    // against the loosest train bounds
    double lo = 1e300, hi = -1e300;
    for (std::size_t j = 0; j < 3; ++j) {
        const auto col = s.train_x.column(j);
        lo = std::min(lo, *std::min_element(col.begin(), col.end()));
        hi = std::max(hi, *std::max_element(col.begin(), col.end()));
    }
    for (std::size_t j = 3; j < 5; ++j) {
        for (double v : out.train_x.column(j)) {
            EXPECT_GE(v, lo);
            EXPECT_LE(v, hi);
        }
        for (double v : out.test_x.column(j)) {
            EXPECT_GE(v, lo);
            EXPECT_LE(v, hi);
        }
    }
}

TEST(AddIrrelevantFeatures, RatioOutOfRangeRejected) {
    const SplitDataset s = make_split(20, 10, 2, 11);
    EXPECT_THROW(add_irrelevant_features(s, 0.6, 1), BenchError);
    EXPECT_THROW(add_irrelevant_features(s, -0.1, 1), BenchError);
}

TEST(FlipLabels, ZeroRatioIsIdentity) {
    const SplitDataset s = make_split(30, 10, 4, 12);
    const SplitDataset out = flip_labels(s, 0.0, 5);
    EXPECT_EQ(out.train_y.values(), s.train_y.values());
}

TEST(FlipLabels, FlipsExactlyHalfAt50Percent) {
    const SplitDataset s = make_split(100, 40, 10, 13);
    const SplitDataset out = flip_labels(s, 0.5, 6);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < 100; ++i) changed += (out.train_y[i] != s.train_y[i]);
    EXPECT_EQ(changed, 50u);
    EXPECT_EQ(out.test_y.values(), s.test_y.values());
    EXPECT_EQ(out.train_x.values(), s.train_x.values());
}

TEST(FlipLabels, SameSeedTwiceRestoresLabels) {
    const SplitDataset s = make_split(50, 20, 6, 14);
    const SplitDataset once = flip_labels(s, 0.3, 7);
    const SplitDataset twice = flip_labels(once, 0.3, 7);
    EXPECT_EQ(twice.train_y.values(), s.train_y.values());
}

TEST(FlipLabels, RatioOutOfRangeRejected) {
    const SplitDataset s = make_split(20, 10, 2, 15);
    EXPECT_THROW(flip_labels(s, 0.51, 1), BenchError);
}

TEST(Corruptions, DeterministicPerSeed) {
    const SplitDataset s = make_split(64, 32, 8, 16);
    const auto a = duplicate_anomalies(s, 4, 21);
    const auto b = duplicate_anomalies(s, 4, 21);
    EXPECT_EQ(a.train_x.values(), b.train_x.values());
    const auto c = add_irrelevant_features(s, 0.4, 22);
    const auto d = add_irrelevant_features(s, 0.4, 22);
    EXPECT_EQ(c.train_x.values(), d.train_x.values());
    EXPECT_TRUE(c.train_x.all_finite());
}
