#pragma once

#include "housing/ahp.hpp"
#include "housing/domain.hpp"
#include "housing/scores.hpp"

#include <span>

namespace housing {

// sum_j w_j * a_j. No check that the weights sum to 1.
double weighted_sum(std::span<const double> row, std::span<const double> weights);

// score_i = sum_j w_j * a_ij over a scale-10 matrix; every score lies in [0, 10].
ScoreVector wsm_scores(const DecisionMatrix& dm, const WeightVector& w);

}  // namespace housing
