#pragma once

#include <filesystem>
#include <span>

#include "adbench/eval/stats.hpp"

namespace adbench::bench {

// Critical-difference diagram: a rank axis with one labeled tick per
// algorithm and one horizontal bar per maximal non-significance clique.
// Writes the SVG to out_path and a plain-text companion (ranks, adjusted
// p matrix, cliques) next to it with a .txt extension.
eval::CdResult render_cd(std::span<const eval::MetricRecord> records, eval::Metric metric,
                         double alpha, const std::filesystem::path& out_path);

} // namespace adbench::bench
