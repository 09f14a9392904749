#pragma once

#include <chrono>
#include <utility>

namespace adbench::eval {

// Wall-clock milliseconds around a fit callable and a score callable.
template <typename FitFn, typename ScoreFn>
std::pair<double, double> measure_timing(FitFn&& fit, ScoreFn&& score) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    fit();
    const auto t1 = clock::now();
    score();
    const auto t2 = clock::now();
    const double fit_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    const double score_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
    return {fit_ms, score_ms};
}

} // namespace adbench::eval
