#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "housing/ahp.hpp"
#include "housing/domain.hpp"
#include "housing/scores.hpp"

namespace housing {

enum class PreferenceShape {
  Usual,     // 1 for any positive difference
  LinearP,   // d / p up to p, then 1
  LinearQP,  // 0 up to q, linear between q and p, then 1
};

std::string_view to_string(PreferenceShape shape);
PreferenceShape parse_preference_shape(std::string_view text);

// Maps the difference d = g(a) - g(b) on one criterion to a preference degree in [0, 1].
struct PreferenceFunction {
  PreferenceShape shape = PreferenceShape::Usual;
  double q = 0;  // indifference threshold
  double p = 0;  // preference threshold

  static PreferenceFunction usual() { return {}; }
  static PreferenceFunction linear(double p) { return {PreferenceShape::LinearP, 0, p}; }
  static PreferenceFunction linear(double q, double p) { return {PreferenceShape::LinearQP, q, p}; }

  // Throws DomainError on negative or inverted thresholds.
  void validate() const;
  double operator()(double d) const;

  bool operator==(const PreferenceFunction&) const = default;
};

// Outranking flows of every alternative. preference(a, b) is the aggregated
// preference index of a over b.
struct FlowTable {
  std::vector<std::string> ids;
  std::size_t criteria_count = 0;
  std::vector<double> pi;  // n x n, row-major
  std::vector<double> phi_plus;
  std::vector<double> phi_minus;
  std::vector<double> phi_net;

  std::size_t size() const noexcept { return ids.size(); }
  double preference(std::size_t a, std::size_t b) const { return pi[a * ids.size() + b]; }
  ScoreVector net_scores() const { return {Method::Promethee, ids, phi_net}; }

  bool operator==(const FlowTable&) const = default;
};

// PROMETHEE II. Throws DomainError with fewer than 2 alternatives, since the
// flows are averaged over the other n - 1 alternatives.
FlowTable promethee_rank(const DecisionMatrix& dm, const WeightVector& w,
                         std::span<const PreferenceFunction> functions);
FlowTable promethee_rank(const DecisionMatrix& dm, const WeightVector& w,
                         const PreferenceFunction& function = PreferenceFunction::usual());

}  // namespace housing
