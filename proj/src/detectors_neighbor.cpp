#include <cmath>
#include <memory>
#include <vector>

#include "adbench/detectors/detector.hpp"
#include "adbench/detectors/neighbors.hpp"

namespace adbench::detectors {

namespace {

// Guards the 1/(mean reachability) ratio; coincident duplicate neighborhoods
// then cancel to LOF = 1 instead of dividing infinities.
constexpr double kLrdEpsilon = 1e-10;

class KnnModel final : public FittedModel {
public:
    KnnModel(const DataMatrix& train, std::size_t k)
        : FittedModel(train.cols()), train_(train), k_(k) {
        require(k >= 1 && k <= train.rows(), Err::KTooLarge,
                "knn: k must lie in [1, train rows]");
        index_ = std::make_unique<NeighborIndex>(train_);
    }

private:
    ScoreVector do_score(const DataMatrix& x) const override {
        ScoreVector scores(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i)
            scores[i] = index_->kth_distance(x.row(i), k_);
        return scores;
    }

    DataMatrix train_;
    std::size_t k_;
    std::unique_ptr<NeighborIndex> index_;
};

class LofModel final : public FittedModel {
public:
    LofModel(const DataMatrix& train, std::size_t k)
        : FittedModel(train.cols()), train_(train), k_(k) {
        require(k >= 1 && k < train.rows(), Err::KTooLarge,
                "lof: k must lie in [1, train rows)");
        index_ = std::make_unique<NeighborIndex>(train_);

        const std::size_t n = train_.rows();
        k_distance_.resize(n);
        std::vector<Neighborhood> hoods(n);
        for (std::size_t i = 0; i < n; ++i) {
            hoods[i] = index_->query(train_.row(i), k_, i); // self excluded at fit
            k_distance_[i] = hoods[i].kth_distance;
        }
        lrd_.resize(n);
        for (std::size_t i = 0; i < n; ++i) lrd_[i] = lrd_of(hoods[i]);
    }

private:
    double lrd_of(const Neighborhood& hood) const {
        double reach_sum = 0.0;
        for (std::size_t t = 0; t < hood.indices.size(); ++t)
            reach_sum += std::max(k_distance_[hood.indices[t]], hood.distances[t]);
        const double mean_reach = reach_sum / static_cast<double>(hood.indices.size());
        return 1.0 / (mean_reach + kLrdEpsilon);
    }

    ScoreVector do_score(const DataMatrix& x) const override {
        ScoreVector scores(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const Neighborhood hood = index_->query(x.row(i), k_); // no self notion here
            double neighbor_lrd = 0.0;
            for (std::size_t idx : hood.indices) neighbor_lrd += lrd_[idx];
            neighbor_lrd /= static_cast<double>(hood.indices.size());
            scores[i] = neighbor_lrd / lrd_of(hood);
        }
        return scores;
    }

    DataMatrix train_;
    std::size_t k_;
    std::unique_ptr<NeighborIndex> index_;
    std::vector<double> k_distance_;
    std::vector<double> lrd_;
};

} // namespace

ModelPtr fit_knn(const DataMatrix& train, std::size_t k) {
    return std::make_unique<KnnModel>(train, k);
}

ModelPtr fit_lof(const DataMatrix& train, std::size_t k) {
    return std::make_unique<LofModel>(train, k);
}

} // namespace adbench::detectors
