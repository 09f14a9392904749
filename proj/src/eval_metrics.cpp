#include "adbench/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace adbench::eval {

namespace {

void check_inputs(const ScoreVector& scores, const LabelVector& y) {
    require(scores.size() == y.size(), Err::LengthMismatch,
            "score vector length does not match labels");
    for (double s : scores)
        require(std::isfinite(s), Err::NonFiniteValue, "score vector contains NaN or Inf");
}

} // namespace

double aucroc(const ScoreVector& scores, const LabelVector& y) {
    check_inputs(scores, y);
    const std::size_t n = scores.size();
    std::size_t n_pos = y.anomaly_count();
    std::size_t n_neg = n - n_pos;
    require(n_pos >= 1 && n_neg >= 1, Err::SingleClassEval,
            "AUCROC needs at least one positive and one negative");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Midrank sum over positives.
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j); // ranks i+1..j
        for (std::size_t t = i; t < j; ++t)
            if (y[order[t]] == 1) pos_rank_sum += midrank;
        i = j;
    }

    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return std::clamp((pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn), 0.0, 1.0);
}

double aucpr(const ScoreVector& scores, const LabelVector& y) {
    check_inputs(scores, y);
    const std::size_t n = scores.size();
    const std::size_t n_pos = y.anomaly_count();
    require(n_pos >= 1, Err::NoPositives, "AUCPR needs at least one positive");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    // Average precision with tie groups: precision is evaluated once per
    // distinct threshold, and each group's recall increment weights it.
    double ap = 0.0;
    double tp = 0.0, fp = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        double group_tp = 0.0, group_fp = 0.0;
        while (j < n && scores[order[j]] == scores[order[i]]) {
            if (y[order[j]] == 1)
                group_tp += 1.0;
            else
                group_fp += 1.0;
            ++j;
        }
        const double tp_prev = tp;
        tp += group_tp;
        fp += group_fp;
        const double precision = tp / (tp + fp);
        const double delta_recall = (tp - tp_prev) / static_cast<double>(n_pos);
        ap += delta_recall * precision;
        i = j;
    }
    return std::clamp(ap, 0.0, 1.0);
}

} // namespace adbench::eval
