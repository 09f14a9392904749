#include "adbench/detectors/detector.hpp"

#include <algorithm>
#include <cmath>

namespace adbench::detectors {

Supervision supervision_of(DetectorName name) noexcept {
    switch (name) {
    case DetectorName::Gnb:
    case DetectorName::RForest: return Supervision::Supervised;
    case DetectorName::ScoreStack: return Supervision::SemiSupervised;
    default: return Supervision::Unsupervised;
    }
}

std::string_view to_string(DetectorName name) noexcept {
    switch (name) {
    case DetectorName::Pca: return "pca";
    case DetectorName::Knn: return "knn";
    case DetectorName::Lof: return "lof";
    case DetectorName::Cblof: return "cblof";
    case DetectorName::Hbos: return "hbos";
    case DetectorName::Ecod: return "ecod";
    case DetectorName::Copod: return "copod";
    case DetectorName::IForest: return "iforest";
    case DetectorName::Loda: return "loda";
    case DetectorName::Gnb: return "gnb";
    case DetectorName::RForest: return "rforest";
    case DetectorName::ScoreStack: return "scorestack";
    }
    return "?";
}

std::optional<DetectorName> detector_from_string(std::string_view s) noexcept {
    for (auto name :
         {DetectorName::Pca, DetectorName::Knn, DetectorName::Lof, DetectorName::Cblof,
          DetectorName::Hbos, DetectorName::Ecod, DetectorName::Copod, DetectorName::IForest,
          DetectorName::Loda, DetectorName::Gnb, DetectorName::RForest, DetectorName::ScoreStack})
        if (to_string(name) == s) return name;
    return std::nullopt;
}

namespace {

struct ParamRule {
    const char* key;
    double lo;
    double hi;
    bool integral;
};

// Allowed hyperparameters per detector and their domains.
std::vector<ParamRule> rules_for(DetectorName name) {
    switch (name) {
    case DetectorName::Pca: return {{"variance_kept", 1e-12, 1.0, false}};
    case DetectorName::Knn: return {{"k", 1, 1e9, true}};
    case DetectorName::Lof: return {{"k", 1, 1e9, true}};
    case DetectorName::Cblof:
        return {{"n_clusters", 1, 1e9, true}, {"alpha", 0.5, 1.0, false}, {"beta", 1.0, 1e9, false}};
    case DetectorName::Hbos: return {{"n_bins", 1, 1e9, true}};
    case DetectorName::Ecod:
    case DetectorName::Copod: return {};
    case DetectorName::IForest:
        return {{"n_trees", 1, 1e9, true}, {"subsample", 2, 1e9, true}};
    case DetectorName::Loda: return {{"n_projections", 1, 1e9, true}};
    case DetectorName::Gnb: return {{"var_smoothing", 0.0, 1.0, false}};
    case DetectorName::RForest: return {{"n_trees", 1, 1e9, true}};
    case DetectorName::ScoreStack: return {{"n_trees", 1, 1e9, true}};
    }
    return {};
}

} // namespace

DetectorSpec DetectorSpec::make(std::string_view name, std::map<std::string, double> params,
                                std::optional<std::vector<DetectorSpec>> roster) {
    auto parsed = detector_from_string(name);
    require(parsed.has_value(), Err::BadParameter, "unknown detector '" + std::string(name) + "'");

    DetectorSpec spec;
    spec.name = *parsed;
    spec.params = std::move(params);
    spec.roster = std::move(roster);

    const auto rules = rules_for(spec.name);
    for (const auto& [key, value] : spec.params) {
        auto rule = std::find_if(rules.begin(), rules.end(),
                                 [&](const ParamRule& r) { return key == r.key; });
        require(rule != rules.end(), Err::BadParameter,
                "unknown parameter '" + key + "' for detector " + std::string(name));
        require(std::isfinite(value) && value >= rule->lo && value <= rule->hi,
                Err::BadParameter, "parameter '" + key + "' out of domain");
        if (rule->integral)
            require(value == std::floor(value), Err::BadParameter,
                    "parameter '" + key + "' must be an integer");
    }

    if (spec.name != DetectorName::ScoreStack) {
        require(!spec.roster.has_value(), Err::BadParameter,
                "roster is only valid for scorestack");
    } else if (spec.roster.has_value()) {
        for (const auto& base : *spec.roster)
            require(supervision_of(base.name) == Supervision::Unsupervised, Err::BadParameter,
                    "scorestack roster must contain unsupervised detectors only");
    }
    return spec;
}

std::vector<DetectorSpec> default_stack_roster() {
    std::vector<DetectorSpec> roster;
    for (auto name : {"knn", "lof", "hbos", "ecod", "iforest", "pca"})
        roster.push_back(DetectorSpec::make(name));
    return roster;
}

ScoreVector FittedModel::score(const DataMatrix& x) const {
    require(x.cols() == train_cols_, Err::DimMismatch,
            "scoring matrix width differs from training width");
    ScoreVector scores = do_score(x);
    require(scores.size() == x.rows(), Err::LengthMismatch, "detector returned wrong length");
    for (double s : scores)
        require(std::isfinite(s), Err::NonFiniteValue, "detector produced non-finite score");
    return scores;
}

ModelPtr fit_detector(const DetectorSpec& spec, const DataMatrix& train, const FitContext& ctx,
                      Seed seed) {
    const auto need_labels = [&]() -> const LabelVector& {
        require(ctx.labels != nullptr, Err::SingleClassTraining,
                "detector requires labels but none were provided");
        return *ctx.labels;
    };
    switch (spec.name) {
    case DetectorName::Pca: return fit_pca(train, spec.param("variance_kept", 0.9));
    case DetectorName::Knn:
        return fit_knn(train, static_cast<std::size_t>(spec.param("k", 5)));
    case DetectorName::Lof:
        return fit_lof(train, static_cast<std::size_t>(spec.param("k", 20)));
    case DetectorName::Cblof:
        return fit_cblof(train, seed, static_cast<std::size_t>(spec.param("n_clusters", 8)),
                         spec.param("alpha", 0.9), spec.param("beta", 5.0));
    case DetectorName::Hbos:
        return fit_hbos(train, static_cast<std::size_t>(spec.param("n_bins", 10)));
    case DetectorName::Ecod: return fit_ecod(train);
    case DetectorName::Copod: return fit_copod(train);
    case DetectorName::IForest:
        return fit_iforest(train, seed, static_cast<std::size_t>(spec.param("n_trees", 100)),
                           static_cast<std::size_t>(spec.param("subsample", 256)));
    case DetectorName::Loda:
        return fit_loda(train, seed, static_cast<std::size_t>(spec.param("n_projections", 100)));
    case DetectorName::Gnb:
        return fit_gnb(train, need_labels(), spec.param("var_smoothing", 1e-9));
    case DetectorName::RForest:
        return fit_rforest(train, need_labels(), seed,
                           static_cast<std::size_t>(spec.param("n_trees", 100)));
    case DetectorName::ScoreStack: {
        require(ctx.mask != nullptr, Err::SingleClassTraining,
                "scorestack requires a label mask");
        const auto roster = spec.roster.has_value() ? *spec.roster : default_stack_roster();
        return fit_scorestack(train, *ctx.mask, roster, seed,
                              static_cast<std::size_t>(spec.param("n_trees", 100)));
    }
    }
    fail(Err::BadParameter, "unhandled detector");
}

} // namespace adbench::detectors
