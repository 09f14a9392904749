#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "adbench/core/error.hpp"

namespace adbench {

// Dense row-major feature matrix. Immutable by convention once built:
// detectors and generators take it by const reference and never write back.
class DataMatrix {
public:
    DataMatrix() = default;

    DataMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

    DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : rows_(rows), cols_(cols), values_(std::move(values)) {
        require(values_.size() == rows_ * cols_, Err::LengthMismatch,
                "value buffer does not match rows*cols");
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }

    std::vector<double> column(std::size_t j) const {
        std::vector<double> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out[i] = values_[i * cols_ + j];
        return out;
    }

    const std::vector<double>& values() const noexcept { return values_; }

    bool all_finite() const noexcept;

    // Row-wise assembly used by generators and the CSV loader.
    static DataMatrix from_rows(const std::vector<std::vector<double>>& rows);
    void append_row(std::span<const double> row);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

// Binary ground-truth labels, 0 = normal, 1 = anomaly. Stored as int to keep
// the door open for multi-class labels without a format change.
class LabelVector {
public:
    LabelVector() = default;
    explicit LabelVector(std::vector<int> labels) : labels_(std::move(labels)) {}
    LabelVector(std::initializer_list<int> labels) : labels_(labels) {}

    std::size_t size() const noexcept { return labels_.size(); }
    int operator[](std::size_t i) const { return labels_[i]; }
    int& operator[](std::size_t i) { return labels_[i]; }
    const std::vector<int>& values() const noexcept { return labels_; }

    void push_back(int v) { labels_.push_back(v); }

    bool binary() const noexcept {
        for (int v : labels_)
            if (v != 0 && v != 1) return false;
        return true;
    }

    std::size_t anomaly_count() const noexcept {
        std::size_t n = 0;
        for (int v : labels_) n += (v == 1);
        return n;
    }

    double anomaly_ratio() const noexcept {
        return labels_.empty() ? 0.0
                               : static_cast<double>(anomaly_count()) / labels_.size();
    }

private:
    std::vector<int> labels_;
};

// Partially revealed labels: revealed[i] && y[i]==1 means "known anomaly";
// everything else is presented to detectors as unlabeled.
class LabelMask {
public:
    LabelMask() = default;
    explicit LabelMask(std::size_t n) : revealed_(n, 0) {}
    explicit LabelMask(std::vector<std::uint8_t> revealed) : revealed_(std::move(revealed)) {}

    std::size_t size() const noexcept { return revealed_.size(); }
    bool revealed(std::size_t i) const { return revealed_[i] != 0; }
    void set_revealed(std::size_t i) { revealed_[i] = 1; }

    std::size_t revealed_count() const noexcept {
        std::size_t n = 0;
        for (auto v : revealed_) n += (v != 0);
        return n;
    }

    // Labels as a semi-supervised detector sees them: revealed anomalies are 1,
    // every other sample is treated as normal.
    LabelVector effective_labels() const {
        std::vector<int> y(revealed_.size());
        for (std::size_t i = 0; i < revealed_.size(); ++i) y[i] = revealed_[i] ? 1 : 0;
        return LabelVector(std::move(y));
    }

private:
    std::vector<std::uint8_t> revealed_;
};

using ScoreVector = std::vector<double>;

struct ValidatedDataset {
    DataMatrix x;
    LabelVector y;
};

// Checks all type invariants and the length agreement; returns the pair
// unchanged on success. Idempotent.
ValidatedDataset validate_dataset(DataMatrix x, LabelVector y);

} // namespace adbench
