#pragma once

#include <filesystem>
#include <string>
#include <utility>

#include "adbench/core/types.hpp"

namespace adbench::bench {

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

// Header row required; all columns numeric; the final column must be named
// `label` and hold {0,1}; the remaining columns are features in file order.
std::pair<DataMatrix, LabelVector> load_csv(const std::filesystem::path& path);

void write_dataset_csv(const std::filesystem::path& path, const DataMatrix& x,
                       const LabelVector& y);

} // namespace adbench::bench
