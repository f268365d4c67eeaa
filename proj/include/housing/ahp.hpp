#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "housing/domain.hpp"
#include "housing/scores.hpp"

namespace housing {

inline constexpr double kReciprocityTolerance = 1e-9;
inline constexpr double kWeightSumTolerance = 1e-9;
inline constexpr double kConsistencyThreshold = 0.1;

// Positive reciprocal comparison matrix over labelled items. Entry (i, j)
// states how much more important item i is than item j.
class PairwiseMatrix {
 public:
  // All-ones matrix.
  explicit PairwiseMatrix(std::vector<std::string> labels);
  // Row-major entries; throws DomainError unless positive, finite, unit
  // diagonal and reciprocal within kReciprocityTolerance.
  PairwiseMatrix(std::vector<std::string> labels, std::vector<double> entries);

  // upper holds the n(n-1)/2 strictly-upper entries row by row:
  // (0,1), (0,2), ..., (0,n-1), (1,2), ...
  static PairwiseMatrix from_upper_triangle(std::vector<std::string> labels,
                                            std::span<const double> upper);
  // a_ij = w_i / w_j, perfectly consistent.
  static PairwiseMatrix from_weights(std::vector<std::string> labels, std::span<const double> w);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& entries() const noexcept { return entries_; }
  double at(std::size_t i, std::size_t j) const { return entries_[i * size() + j]; }
  std::span<const double> row(std::size_t i) const { return {entries_.data() + i * size(), size()}; }
  std::size_t index_of(std::string_view label) const;  // throws LookupError

  // Writes value at (i, j) and 1/value at (j, i).
  void set_judgment(std::size_t i, std::size_t j, double value);

  bool operator==(const PairwiseMatrix&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<double> entries_;
};

// Non-negative weights over labelled criteria summing to 1.
class WeightVector {
 public:
  WeightVector() = default;
  // Throws DomainError unless non-negative, finite and summing to 1 within kWeightSumTolerance.
  WeightVector(std::vector<std::string> labels, std::vector<double> values);

  // Scales positive raw weights to sum 1.
  static WeightVector normalized(std::vector<std::string> labels, std::vector<double> raw);
  static WeightVector uniform(std::vector<std::string> labels);

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double at(std::string_view label) const;  // throws LookupError

  bool operator==(const WeightVector&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<double> values_;
};

struct ConsistencyReport {
  double lambda_max = 0;
  double ci = 0;
  double cr = 0;
  double ri = 0;
  std::size_t n = 0;
  bool consistent = true;  // cr <= 0.1

  bool operator==(const ConsistencyReport&) const = default;
};

enum class PriorityAlgorithm { Eigenvector, GeometricMean };

std::string_view to_string(PriorityAlgorithm algorithm);
PriorityAlgorithm parse_priority_algorithm(std::string_view text);

struct PowerIterationOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 10'000;
};

// Principal right eigenvector (power iteration) or normalized row geometric
// means. Throws NumericError when power iteration fails to converge.
WeightVector priority_vector(const PairwiseMatrix& m,
                             PriorityAlgorithm algorithm = PriorityAlgorithm::Eigenvector,
                             PowerIterationOptions options = {});

// Saaty random index for matrix order n (1..10); throws DomainError beyond the table.
double random_index(std::size_t n);

// lambda_max = mean over rows of (row_i . w) / w_i, CI = (lambda_max - n)/(n - 1),
// CR = CI / RI(n) (0 when RI is 0).
ConsistencyReport consistency(const PairwiseMatrix& m, const WeightVector& w);

// True iff value is one of 1..9 or the reciprocal of one, within 1e-9.
bool saaty_scale_check(double value);

// Distributive mode: the criterion column divided by its sum, uniform when
// the column is all zeros.
std::vector<double> ahp_alternative_priorities(const DecisionMatrix& dm, std::string_view criterion);

// score_i = sum_j w_j * priority_j(i); sums to 1.
ScoreVector ahp_scores(const DecisionMatrix& dm, const WeightVector& w);

// Throws DomainError unless w is labelled with dm's columns in the same order.
void require_matching_weights(const DecisionMatrix& dm, const WeightVector& w);

}  // namespace housing
