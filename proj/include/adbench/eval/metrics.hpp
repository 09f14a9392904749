#pragma once

#include "adbench/core/types.hpp"

namespace adbench::eval {

// Probability that a random positive outranks a random negative, ties counted
// one-half (Mann-Whitney with midranks). Requires both classes present.
double aucroc(const ScoreVector& scores, const LabelVector& y);

// Average precision over the PR step curve; tied scores are processed as a
// single threshold group. Requires at least one positive.
double aucpr(const ScoreVector& scores, const LabelVector& y);

} // namespace adbench::eval
