#pragma once

#include "adbench/core/seed.hpp"
#include "adbench/eval/split.hpp"

namespace adbench::corrupt {

// Every anomaly row (features and label) appears exactly `factor` times in
// both splits; normal rows untouched; appended rows are shuffled in by seed.
SplitDataset duplicate_anomalies(const SplitDataset& split, std::size_t factor, Seed seed);

// Appends round(d * noise_ratio) uniform-noise columns. Each new column picks
// a source feature at random and draws from its [min, max] over the TRAIN
// split only; labels untouched.
SplitDataset add_irrelevant_features(const SplitDataset& split, double noise_ratio, Seed seed);

// Flips round(n_train * error_ratio) training labels 0<->1 chosen uniformly
// without replacement. Test labels and all features stay untouched so metrics
// remain against the true labels.
SplitDataset flip_labels(const SplitDataset& split, double error_ratio, Seed seed);

} // namespace adbench::corrupt
