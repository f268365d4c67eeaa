#include "housing/promethee.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "housing/errors.hpp"

namespace housing {

std::string_view to_string(PreferenceShape shape) {
  switch (shape) {
    case PreferenceShape::Usual: return "usual";
    case PreferenceShape::LinearP: return "linear_p";
    case PreferenceShape::LinearQP: return "linear_qp";
  }
  return "?";
}

PreferenceShape parse_preference_shape(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "usual") return PreferenceShape::Usual;
  if (t == "linear_p") return PreferenceShape::LinearP;
  if (t == "linear_qp") return PreferenceShape::LinearQP;
  throw DomainError("preference shape must be usual, linear_p or linear_qp; got '" +
                    std::string(text) + "'");
}

void PreferenceFunction::validate() const {
  if (!std::isfinite(q) || !std::isfinite(p) || q < 0) {
    throw DomainError("preference thresholds must be finite with q >= 0");
  }
  if (p < q) throw DomainError("preference threshold p must be >= q");
  if (shape == PreferenceShape::LinearP && p <= 0) {
    throw DomainError("linear_p preference needs p > 0");
  }
}

double PreferenceFunction::operator()(double d) const {
  if (d <= 0) return 0.0;
  switch (shape) {
    case PreferenceShape::Usual:
      return 1.0;
    case PreferenceShape::LinearP:
      return d >= p ? 1.0 : d / p;
    case PreferenceShape::LinearQP:
      if (d <= q) return 0.0;
      if (d >= p) return 1.0;
      return (d - q) / (p - q);
  }
  return 0.0;
}

FlowTable promethee_rank(const DecisionMatrix& dm, const WeightVector& w,
                         std::span<const PreferenceFunction> functions) {
  require_matching_weights(dm, w);
  const std::size_t n = dm.row_count();
  const std::size_t k = dm.col_count();
  if (n < 2) {
    throw DomainError("PROMETHEE needs at least 2 alternatives, got " + std::to_string(n));
  }
  if (functions.size() != k) {
    throw DomainError("one preference function per criterion is required");
  }
  for (const auto& f : functions) f.validate();

  FlowTable t;
  t.ids = dm.rows();
  t.criteria_count = k;
  t.pi.assign(n * n, 0.0);

  // Criterion-major accumulation: one column at a time, every ordered pair in
  // row order, so the result does not depend on how pairs are scheduled.
  for (std::size_t j = 0; j < k; ++j) {
    if (w[j] == 0) continue;
    const auto column = dm.column(j);
    const auto& pf = functions[j];
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        const double pref = pf(column[a] - column[b]);
        if (pref > 0) t.pi[a * n + b] += w[j] * pref;
      }
    }
  }

  const double scale = 1.0 / static_cast<double>(n - 1);
  t.phi_plus.assign(n, 0.0);
  t.phi_minus.assign(n, 0.0);
  t.phi_net.assign(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t x = 0; x < n; ++x) {
      t.phi_plus[a] += t.pi[a * n + x];
      t.phi_minus[a] += t.pi[x * n + a];
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    t.phi_plus[a] *= scale;
    t.phi_minus[a] *= scale;
    t.phi_net[a] = t.phi_plus[a] - t.phi_minus[a];
  }
  return t;
}

FlowTable promethee_rank(const DecisionMatrix& dm, const WeightVector& w,
                         const PreferenceFunction& function) {
  std::vector<PreferenceFunction> functions(dm.col_count(), function);
  return promethee_rank(dm, w, functions);
}

}  // namespace housing
