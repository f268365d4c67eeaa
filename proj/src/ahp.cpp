#include "housing/ahp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>

#include "housing/errors.hpp"

namespace housing {

namespace {

void check_labels(const std::vector<std::string>& labels) {
  if (labels.empty()) throw DomainError("pairwise matrix needs at least one label");
  std::set<std::string_view> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw DuplicateError("duplicate label " + l);
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

PairwiseMatrix::PairwiseMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)), entries_(labels_.size() * labels_.size(), 1.0) {
  check_labels(labels_);
}

PairwiseMatrix::PairwiseMatrix(std::vector<std::string> labels, std::vector<double> entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
  check_labels(labels_);
  const std::size_t n = labels_.size();
  if (entries_.size() != n * n) {
    throw DomainError("pairwise matrix needs " + std::to_string(n * n) + " entries, got " +
                      std::to_string(entries_.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (at(i, i) != 1.0) throw DomainError("pairwise diagonal must be 1 at " + labels_[i]);
    for (std::size_t j = 0; j < n; ++j) {
      const double a = at(i, j);
      if (!std::isfinite(a) || a <= 0) {
        throw DomainError("pairwise entry " + labels_[i] + "/" + labels_[j] +
                          " must be positive and finite");
      }
      if (j > i && std::abs(a * at(j, i) - 1.0) > kReciprocityTolerance) {
        throw DomainError("pairwise entries " + labels_[i] + "/" + labels_[j] +
                          " are not reciprocal");
      }
    }
  }
}

PairwiseMatrix PairwiseMatrix::from_upper_triangle(std::vector<std::string> labels,
                                                   std::span<const double> upper) {
  PairwiseMatrix m(std::move(labels));
  const std::size_t n = m.size();
  if (upper.size() != n * (n - 1) / 2) {
    throw DomainError("upper triangle of a " + std::to_string(n) + "x" + std::to_string(n) +
                      " matrix needs " + std::to_string(n * (n - 1) / 2) + " entries, got " +
                      std::to_string(upper.size()));
  }
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) m.set_judgment(i, j, upper[k++]);
  }
  return m;
}

PairwiseMatrix PairwiseMatrix::from_weights(std::vector<std::string> labels,
                                            std::span<const double> w) {
  PairwiseMatrix m(std::move(labels));
  if (w.size() != m.size()) throw DomainError("weight count does not match label count");
  for (double v : w) {
    if (!std::isfinite(v) || v <= 0) throw DomainError("weights must be positive");
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) m.set_judgment(i, j, w[i] / w[j]);
  }
  return m;
}

std::size_t PairwiseMatrix::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw LookupError("unknown label '" + std::string(label) + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

void PairwiseMatrix::set_judgment(std::size_t i, std::size_t j, double value) {
  const std::size_t n = size();
  if (i >= n || j >= n) throw LookupError("judgment index out of range");
  if (!std::isfinite(value) || value <= 0) {
    throw DomainError("judgment " + labels_[i] + "/" + labels_[j] + " must be positive and finite");
  }
  if (i == j) {
    if (value != 1.0) throw DomainError("self-comparison of " + labels_[i] + " must be 1");
    return;
  }
  entries_[i * n + j] = value;
  entries_[j * n + i] = 1.0 / value;
}

WeightVector::WeightVector(std::vector<std::string> labels, std::vector<double> values)
    : labels_(std::move(labels)), values_(std::move(values)) {
  if (labels_.size() != values_.size()) {
    throw DomainError("weight vector has " + std::to_string(values_.size()) + " values for " +
                      std::to_string(labels_.size()) + " labels");
  }
  double sum = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0) {
      throw DomainError("weight " + labels_[i] + " must be non-negative and finite");
    }
    sum += values_[i];
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    throw DomainError("weights must sum to 1, got " + std::to_string(sum));
  }
}

WeightVector WeightVector::normalized(std::vector<std::string> labels, std::vector<double> raw) {
  double sum = 0;
  for (double v : raw) {
    if (!std::isfinite(v) || v < 0) throw DomainError("raw weights must be non-negative and finite");
    sum += v;
  }
  if (sum <= 0) throw DomainError("raw weights must not all be zero");
  for (double& v : raw) v /= sum;
  return {std::move(labels), std::move(raw)};
}

WeightVector WeightVector::uniform(std::vector<std::string> labels) {
  std::vector<double> raw(labels.size(), 1.0);
  return normalized(std::move(labels), std::move(raw));
}

double WeightVector::at(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw LookupError("no weight for '" + std::string(label) + "'");
  return values_[static_cast<std::size_t>(it - labels_.begin())];
}

std::string_view to_string(PriorityAlgorithm algorithm) {
  return algorithm == PriorityAlgorithm::Eigenvector ? "eigenvector" : "geometric_mean";
}

PriorityAlgorithm parse_priority_algorithm(std::string_view text) {
  const auto t = lower(text);
  if (t == "eigenvector") return PriorityAlgorithm::Eigenvector;
  if (t == "geometric_mean" || t == "geometric-mean") return PriorityAlgorithm::GeometricMean;
  throw DomainError("priority algorithm must be eigenvector or geometric_mean, got '" +
                    std::string(text) + "'");
}

WeightVector priority_vector(const PairwiseMatrix& m, PriorityAlgorithm algorithm,
                             PowerIterationOptions options) {
  const std::size_t n = m.size();
  if (n < 2) throw DomainError("priority vector needs at least 2 items");

  if (algorithm == PriorityAlgorithm::GeometricMean) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
      double log_sum = 0;
      for (double a : m.row(i)) log_sum += std::log(a);
      g[i] = std::exp(log_sum / static_cast<double>(n));
    }
    return WeightVector::normalized(m.labels(), std::move(g));
  }

  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = m.row(i);
      next[i] = std::inner_product(row.begin(), row.end(), w.begin(), 0.0);
      sum += next[i];
    }
    double delta = 0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= sum;
      delta = std::max(delta, std::abs(next[i] - w[i]));
    }
    w.swap(next);
    if (delta < options.tolerance) return WeightVector::normalized(m.labels(), std::move(w));
  }
  throw NumericError("power iteration did not converge after " +
                         std::to_string(options.max_iterations) + " iterations",
                     options.max_iterations);
}

double random_index(std::size_t n) {
  static constexpr double kTable[] = {0, 0, 0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49};
  if (n == 0 || n >= std::size(kTable)) {
    throw DomainError("no random index for a matrix of order " + std::to_string(n));
  }
  return kTable[n];
}

ConsistencyReport consistency(const PairwiseMatrix& m, const WeightVector& w) {
  const std::size_t n = m.size();
  if (n < 2) throw DomainError("consistency needs at least 2 items");
  if (w.size() != n) throw DomainError("weight count does not match matrix order");

  double ratio_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] == 0) {
      throw NumericError("weight of " + m.labels()[i] + " is zero; consistency ratio undefined", 0);
    }
    const auto row = m.row(i);
    ratio_sum += std::inner_product(row.begin(), row.end(), w.values().begin(), 0.0) / w[i];
  }
  ConsistencyReport r;
  r.n = n;
  r.lambda_max = ratio_sum / static_cast<double>(n);
  r.ci = (r.lambda_max - static_cast<double>(n)) / static_cast<double>(n - 1);
  r.ri = random_index(n);
  r.cr = r.ri > 0 ? r.ci / r.ri : 0.0;
  r.consistent = r.cr <= kConsistencyThreshold;
  return r;
}

bool saaty_scale_check(double value) {
  if (!std::isfinite(value) || value <= 0) return false;
  for (int k = 1; k <= 9; ++k) {
    if (std::abs(value - k) <= 1e-9 || std::abs(value - 1.0 / k) <= 1e-9) return true;
  }
  return false;
}

std::vector<double> ahp_alternative_priorities(const DecisionMatrix& dm, std::string_view criterion) {
  auto column = dm.column(dm.col_index(criterion));
  const double sum = std::accumulate(column.begin(), column.end(), 0.0);
  if (sum <= 0) {
    std::fill(column.begin(), column.end(), 1.0 / static_cast<double>(column.size()));
    return column;
  }
  for (double& v : column) v /= sum;
  return column;
}

void require_matching_weights(const DecisionMatrix& dm, const WeightVector& w) {
  if (w.labels() != dm.cols()) {
    throw DomainError("weights must cover the decision matrix criteria in column order");
  }
  if (dm.scale() != Scale::Scale10) throw DomainError("decision matrix must be on scale 10");
}

ScoreVector ahp_scores(const DecisionMatrix& dm, const WeightVector& w) {
  require_matching_weights(dm, w);
  ScoreVector out{Method::Ahp, dm.rows(), std::vector<double>(dm.row_count(), 0.0)};
  for (std::size_t j = 0; j < dm.col_count(); ++j) {
    const auto priorities = ahp_alternative_priorities(dm, dm.cols()[j]);
    for (std::size_t i = 0; i < dm.row_count(); ++i) out.scores[i] += w[j] * priorities[i];
  }
  return out;
}

}  // namespace housing
