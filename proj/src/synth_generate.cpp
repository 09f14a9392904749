#include "adbench/synth/generate.hpp"

#include <algorithm>
#include <cmath>

#include "adbench/core/rng.hpp"
#include "adbench/synth/copula.hpp"

namespace adbench::synth {

std::string_view to_string(AnomalyType type) noexcept {
    switch (type) {
    case AnomalyType::Local: return "local";
    case AnomalyType::Global: return "global";
    case AnomalyType::Dependency: return "dependency";
    case AnomalyType::Clustered: return "clustered";
    }
    return "?";
}

std::optional<AnomalyType> anomaly_type_from_string(std::string_view s) noexcept {
    for (auto t : {AnomalyType::Local, AnomalyType::Global, AnomalyType::Dependency,
                   AnomalyType::Clustered})
        if (to_string(t) == s) return t;
    return std::nullopt;
}

double default_alpha(AnomalyType type) noexcept {
    return type == AnomalyType::Global ? 1.1 : 5.0;
}

DataMatrix gen_local(const GmmModel& model, std::size_t n_anomaly, double alpha, Seed seed) {
    require(alpha > 0.0, Err::BadParameter, "alpha must be > 0");
    return sample_gmm(model.with_scaled_covariances(alpha), n_anomaly, seed);
}

DataMatrix gen_clustered(const GmmModel& model, std::size_t n_anomaly, double alpha, Seed seed) {
    require(alpha > 0.0, Err::BadParameter, "alpha must be > 0");
    return sample_gmm(model.with_scaled_means(alpha), n_anomaly, seed);
}

DataMatrix gen_global(const DataMatrix& x_normal, std::size_t n_anomaly, double alpha,
                      Seed seed) {
    require(alpha > 0.0, Err::BadParameter, "alpha must be > 0");
    require(x_normal.rows() >= 1, Err::TooFewSamples, "no normal rows");
    const std::size_t d = x_normal.cols();

    std::vector<std::pair<double, double>> bounds(d);
    for (std::size_t j = 0; j < d; ++j) {
        const auto col = x_normal.column(j);
        const auto [lo_it, hi_it] = std::minmax_element(col.begin(), col.end());
        double lo = alpha * *lo_it;
        double hi = alpha * *hi_it;
        if (lo > hi) std::swap(lo, hi); // negative minima invert after scaling
        bounds[j] = {lo, hi};
    }

    Rng rng(seed);
    DataMatrix out(n_anomaly, d);
    for (std::size_t i = 0; i < n_anomaly; ++i)
        for (std::size_t j = 0; j < d; ++j)
            out(i, j) = rng.uniform(bounds[j].first, bounds[j].second);
    return out;
}

std::pair<DataMatrix, DataMatrix> gen_dependency(const DataMatrix& x_normal,
                                                 std::size_t n_normal, std::size_t n_anomaly,
                                                 Seed seed) {
    const CopulaModel copula(x_normal);
    Rng normal_rng(derive_seed(seed, {1}));
    Rng anomaly_rng(derive_seed(seed, {2}));
    return {copula.sample_coupled(n_normal, normal_rng),
            copula.sample_independent(n_anomaly, anomaly_rng)};
}

std::pair<DataMatrix, LabelVector> assemble_synthetic(const DataMatrix& x, const LabelVector& y,
                                                      const SynthParams& params) {
    require(x.rows() == y.size(), Err::LengthMismatch, "labels do not match rows");
    require(params.alpha > 0.0, Err::BadParameter, "alpha must be > 0");

    DataMatrix normals_in;
    for (std::size_t i = 0; i < x.rows(); ++i)
        if (y[i] == 0) normals_in.append_row(x.row(i));
    require(normals_in.rows() >= 10, Err::TooFewSamples,
            "need at least 10 normal rows to fit generators");

    std::size_t n_normal = params.n_normal > 0 ? params.n_normal : normals_in.rows();
    std::size_t n_anomaly =
        params.n_anomaly > 0 ? params.n_anomaly : (x.rows() - normals_in.rows());
    require(n_normal >= 1 && n_anomaly >= 1, Err::BadParameter,
            "generated class counts must be >= 1");

    const Seed fit_seed = derive_seed(params.seed, {0});
    const Seed normal_seed = derive_seed(params.seed, {1});
    const Seed anomaly_seed = derive_seed(params.seed, {2});
    const Seed shuffle_seed = derive_seed(params.seed, {3});

    DataMatrix gen_normals, gen_anomalies;
    switch (params.anomaly_type) {
    case AnomalyType::Local: {
        const GmmModel model = fit_gmm(normals_in, 0, fit_seed);
        gen_normals = sample_gmm(model, n_normal, normal_seed);
        gen_anomalies = gen_local(model, n_anomaly, params.alpha, anomaly_seed);
        break;
    }
    case AnomalyType::Clustered: {
        const GmmModel model = fit_gmm(normals_in, 0, fit_seed);
        gen_normals = sample_gmm(model, n_normal, normal_seed);
        gen_anomalies = gen_clustered(model, n_anomaly, params.alpha, anomaly_seed);
        break;
    }
    case AnomalyType::Global: {
        const GmmModel model = fit_gmm(normals_in, 0, fit_seed);
        gen_normals = sample_gmm(model, n_normal, normal_seed);
        gen_anomalies = gen_global(normals_in, n_anomaly, params.alpha, anomaly_seed);
        break;
    }
    case AnomalyType::Dependency: {
        auto [normals, anomalies] =
            gen_dependency(normals_in, n_normal, n_anomaly, derive_seed(params.seed, {4}));
        gen_normals = std::move(normals);
        gen_anomalies = std::move(anomalies);
        break;
    }
    }

    // interleave and shuffle
    const std::size_t total = n_normal + n_anomaly;
    Rng rng(shuffle_seed);
    const auto perm = rng.permutation(total);
    DataMatrix out_x(total, x.cols());
    std::vector<int> out_y(total, 0);
    for (std::size_t pos = 0; pos < total; ++pos) {
        const std::size_t src = perm[pos];
        const bool anomaly = src >= n_normal;
        const auto row = anomaly ? gen_anomalies.row(src - n_normal) : gen_normals.row(src);
        std::copy(row.begin(), row.end(), out_x.row(pos).begin());
        out_y[pos] = anomaly ? 1 : 0;
    }
    return {std::move(out_x), LabelVector(std::move(out_y))};
}

} // namespace adbench::synth
