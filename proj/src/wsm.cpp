#include "housing/wsm.hpp"

#include <numeric>
#include <string>

#include "housing/errors.hpp"

namespace housing {

double weighted_sum(std::span<const double> row, std::span<const double> weights) {
  if (row.size() != weights.size()) {
    throw DomainError("row has " + std::to_string(row.size()) + " values for " + std::to_string(weights.size()) +
                      " weights");
  }
  return std::inner_product(row.begin(), row.end(), weights.begin(), 0.0);
}

ScoreVector wsm_scores(const DecisionMatrix& dm, const WeightVector& w) {
  require_matching_weights(dm, w);
  ScoreVector out{Method::Wsm, dm.rows(), {}};
  out.scores.reserve(dm.row_count());
  for (std::size_t i = 0; i < dm.row_count(); ++i) {
    out.scores.push_back(weighted_sum(dm.row(i), w.values()));
  }
  return out;
}

}  // namespace housing
