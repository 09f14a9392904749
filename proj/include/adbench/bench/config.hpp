#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adbench/core/seed.hpp"
#include "adbench/detectors/detector.hpp"
#include "adbench/synth/generate.hpp"

namespace adbench::bench {

enum class CorruptionMode { Duplicate, Irrelevant, Flip };

std::string_view to_string(CorruptionMode mode) noexcept;
std::optional<CorruptionMode> corruption_mode_from_string(std::string_view s) noexcept;

struct TypeSetting {
    synth::AnomalyType type = synth::AnomalyType::Local;
    double alpha = 5.0;
    std::optional<double> gamma_l; // label-informed algorithms run only if set
};

struct CorruptionSetting {
    CorruptionMode mode = CorruptionMode::Duplicate;
    double level = 1.0; // factor for duplicate, ratio otherwise
    std::optional<double> gamma_l;
};

// The whole experiment grid. Parsed from a JSON file whose keys are exactly
// the field names here; unknown keys are hard errors.
struct BenchmarkConfig {
    std::vector<std::string> datasets;
    std::vector<detectors::DetectorSpec> algorithms;
    std::vector<double> supervision;          // gamma_l settings
    std::vector<TypeSetting> anomaly_types;   // synthetic-anomaly settings
    std::vector<CorruptionSetting> corruptions;
    int n_repeats = 3;
    double train_frac = 0.7;
    Seed seed = 0;
    int threads = 0; // 0: ADBENCH_THREADS env var, else hardware concurrency
    std::string out_dir = "results";
    bool record_timings = true;

    static BenchmarkConfig from_json_file(const std::filesystem::path& path);
    static BenchmarkConfig from_json_text(const std::string& text);

    void validate() const;
};

} // namespace adbench::bench
