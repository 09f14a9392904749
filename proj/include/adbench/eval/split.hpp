#pragma once

#include "adbench/core/seed.hpp"
#include "adbench/core/types.hpp"

namespace adbench {

// A dataset after the train/test partition. Corruption transforms operate on
// this, never on the unsplit dataset.
struct SplitDataset {
    DataMatrix train_x;
    LabelVector train_y;
    DataMatrix test_x;
    LabelVector test_y;
};

namespace eval {

// Per-class shuffled partition; train takes round(class_count * train_frac)
// from each class, adjusted so both splits keep at least one member of each.
SplitDataset stratified_split(const DataMatrix& x, const LabelVector& y, double train_frac,
                              Seed seed);

// Reveals max(1, round(n_anomalies * gamma_l)) anomaly labels chosen uniformly
// without replacement; everything else stays unlabeled.
LabelMask subsample_labels(const LabelVector& y_train, double gamma_l, Seed seed);

} // namespace eval
} // namespace adbench
