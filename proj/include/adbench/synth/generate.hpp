#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include "adbench/core/seed.hpp"
#include "adbench/core/types.hpp"
#include "adbench/synth/gmm.hpp"

namespace adbench::synth {

enum class AnomalyType { Local, Global, Dependency, Clustered };

std::string_view to_string(AnomalyType type) noexcept;
std::optional<AnomalyType> anomaly_type_from_string(std::string_view s) noexcept;

// 5 for the covariance- and mean-scaling types, 1.1 for the uniform bounds.
double default_alpha(AnomalyType type) noexcept;

struct SynthParams {
    AnomalyType anomaly_type = AnomalyType::Local;
    double alpha = 5.0;
    std::size_t n_normal = 0;  // 0: match the seed dataset's normal count
    std::size_t n_anomaly = 0; // 0: match the seed dataset's anomaly count
    Seed seed = 0;

    static SynthParams for_type(AnomalyType type, Seed seed = 0) {
        SynthParams p;
        p.anomaly_type = type;
        p.alpha = default_alpha(type);
        p.seed = seed;
        return p;
    }
};

// Mixture samples with every component covariance scaled by alpha: anomalies
// that deviate inside their local neighborhood.
DataMatrix gen_local(const GmmModel& model, std::size_t n_anomaly, double alpha, Seed seed);

// Per-feature Unif(alpha*min, alpha*max) samples, bounds reordered when the
// scaling inverts them.
DataMatrix gen_global(const DataMatrix& x_normal, std::size_t n_anomaly, double alpha, Seed seed);

// (normals, anomalies): copula-coupled KDE samples vs independent per-feature
// KDE samples.
std::pair<DataMatrix, DataMatrix> gen_dependency(const DataMatrix& x_normal,
                                                 std::size_t n_normal, std::size_t n_anomaly,
                                                 Seed seed);

// Mixture samples with every component mean scaled by alpha: a shifted
// anomaly cluster.
DataMatrix gen_clustered(const GmmModel& model, std::size_t n_anomaly, double alpha, Seed seed);

// Fits the generators on the seed dataset's normal rows only and emits a
// fresh dataset of generated normals (label 0) and type-specific anomalies
// (label 1), shuffled by seed.
std::pair<DataMatrix, LabelVector> assemble_synthetic(const DataMatrix& x, const LabelVector& y,
                                                      const SynthParams& params);

} // namespace adbench::synth
