#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adbench/core/seed.hpp"
#include "adbench/core/types.hpp"

namespace adbench::detectors {

enum class DetectorName {
    Pca,
    Knn,
    Lof,
    Cblof,
    Hbos,
    Ecod,
    Copod,
    IForest,
    Loda,
    Gnb,
    RForest,
    ScoreStack,
};

enum class Supervision { Unsupervised, Supervised, SemiSupervised };

Supervision supervision_of(DetectorName name) noexcept;
std::string_view to_string(DetectorName name) noexcept;
std::optional<DetectorName> detector_from_string(std::string_view s) noexcept;

// Detector identity plus its hyperparameters. Construction validates every
// parameter name and domain, so a spec that parses is a spec that runs.
struct DetectorSpec {
    DetectorName name = DetectorName::Knn;
    std::map<std::string, double> params;
    // scorestack only: its unsupervised base detectors. nullopt selects the
    // default roster; an explicit empty list means no augmentation.
    std::optional<std::vector<DetectorSpec>> roster;

    static DetectorSpec make(std::string_view name,
                             std::map<std::string, double> params = {},
                             std::optional<std::vector<DetectorSpec>> roster = std::nullopt);

    double param(const std::string& key, double fallback) const {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }
};

// The default scorestack roster: {knn, lof, hbos, ecod, iforest, pca}.
std::vector<DetectorSpec> default_stack_roster();

// Immutable fitted state under a uniform scoring contract: higher score means
// more anomalous, output length equals input rows, all values finite.
class FittedModel {
public:
    virtual ~FittedModel() = default;

    ScoreVector score(const DataMatrix& x) const;
    std::size_t train_cols() const noexcept { return train_cols_; }

protected:
    explicit FittedModel(std::size_t train_cols) : train_cols_(train_cols) {}
    virtual ScoreVector do_score(const DataMatrix& x) const = 0;

private:
    std::size_t train_cols_;
};

using ModelPtr = std::unique_ptr<FittedModel>;

// Per-detector fit entry points.
ModelPtr fit_pca(const DataMatrix& train, double variance_kept = 0.9);
ModelPtr fit_knn(const DataMatrix& train, std::size_t k = 5);
ModelPtr fit_lof(const DataMatrix& train, std::size_t k = 20);
ModelPtr fit_cblof(const DataMatrix& train, Seed seed, std::size_t n_clusters = 8,
                   double alpha = 0.9, double beta = 5.0);
ModelPtr fit_hbos(const DataMatrix& train, std::size_t n_bins = 10);
ModelPtr fit_ecod(const DataMatrix& train);
ModelPtr fit_copod(const DataMatrix& train);
ModelPtr fit_iforest(const DataMatrix& train, Seed seed, std::size_t n_trees = 100,
                     std::size_t subsample = 256);
ModelPtr fit_loda(const DataMatrix& train, Seed seed, std::size_t n_projections = 100);
ModelPtr fit_gnb(const DataMatrix& train, const LabelVector& y, double var_smoothing = 1e-9);
ModelPtr fit_rforest(const DataMatrix& train, const LabelVector& y, Seed seed,
                     std::size_t n_trees = 100);
ModelPtr fit_scorestack(const DataMatrix& train, const LabelMask& mask,
                        const std::vector<DetectorSpec>& roster, Seed seed,
                        std::size_t n_trees = 100);

// Label context for the uniform fit entry point. Unsupervised detectors ignore
// it; supervised ones require labels; scorestack requires the mask.
struct FitContext {
    const LabelVector* labels = nullptr;
    const LabelMask* mask = nullptr;
};

ModelPtr fit_detector(const DetectorSpec& spec, const DataMatrix& train, const FitContext& ctx,
                      Seed seed);

} // namespace adbench::detectors
