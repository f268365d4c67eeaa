#include "housing/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "housing/errors.hpp"

namespace housing {

namespace {

// Orders ids best-first; higher_is_better selects the direction.
RankingResult rank_values(Method method, std::span<const std::string> ids,
                          std::span<const double> values, bool higher_is_better) {
  if (ids.empty()) throw DomainError("cannot rank an empty set of alternatives");
  if (ids.size() != values.size()) throw DomainError("score count does not match id count");
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("scores must be finite");
  }

  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return higher_is_better ? values[a] > values[b] : values[a] < values[b];
  });

  RankingResult out;
  out.method = method;
  out.entries.reserve(ids.size());
  std::size_t start = 0;
  while (start < order.size()) {
    const double leader = values[order[start]];
    const double eps = kTieTolerance * std::max(1.0, std::abs(leader));
    std::size_t end = start + 1;
    while (end < order.size() && std::abs(values[order[end]] - leader) <= eps) ++end;
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(start),
              order.begin() + static_cast<std::ptrdiff_t>(end),
              [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
    for (std::size_t i = start; i < end; ++i) {
      out.entries.push_back({ids[order[i]], values[order[i]], static_cast<int>(start + 1)});
    }
    start = end;
  }
  return out;
}

std::map<std::string_view, int> rank_map(const RankingResult& r) {
  std::map<std::string_view, int> m;
  for (const auto& e : r.entries) m.emplace(e.student_id, e.rank);
  return m;
}

void require_same_students(const RankingResult& a, const RankingResult& b) {
  if (a.size() != b.size()) throw DomainError("rankings cover different student sets");
  const auto ma = rank_map(a);
  for (const auto& e : b.entries) {
    if (!ma.contains(e.student_id)) {
      throw DomainError("rankings cover different student sets (" + e.student_id + ")");
    }
  }
}

}  // namespace

int RankingResult::rank_of(std::string_view student_id) const {
  for (const auto& e : entries) {
    if (e.student_id == student_id) return e.rank;
  }
  throw LookupError("student '" + std::string(student_id) + "' is not ranked");
}

std::vector<std::string> RankingResult::order() const {
  std::vector<std::string> ids;
  ids.reserve(entries.size());
  for (const auto& e : entries) ids.push_back(e.student_id);
  return ids;
}

RankingResult assign_ranks(const ScoreVector& scores) {
  return rank_values(scores.method, scores.ids, scores.scores, true);
}

RankingResult assign_ranks(const FlowTable& flows) {
  return rank_values(Method::Promethee, flows.ids, flows.phi_net, true);
}

SimilarityReport rank_similarity(const RankingResult& r1, const RankingResult& r2) {
  require_same_students(r1, r2);
  if (r1.size() == 0) throw DomainError("cannot compare empty rankings");
  const auto ranks2 = rank_map(r2);
  SimilarityReport rep{r1.method, r2.method, r1.size(), 0, 0.0};
  for (const auto& e : r1.entries) {
    if (ranks2.at(e.student_id) == e.rank) ++rep.matches;
  }
  rep.percent = 100.0 * static_cast<double>(rep.matches) / static_cast<double>(rep.n);
  return rep;
}

std::vector<SimilarityReport> similarity_matrix(std::span<const RankingResult> rankings) {
  std::vector<SimilarityReport> out;
  for (std::size_t i = 0; i < rankings.size(); ++i) {
    for (std::size_t j = i + 1; j < rankings.size(); ++j) {
      out.push_back(rank_similarity(rankings[i], rankings[j]));
    }
  }
  return out;
}

RankingResult aggregate_ranks(std::span<const RankingResult> rankings) {
  if (rankings.size() < 2) throw DomainError("aggregation needs at least 2 rankings");
  for (std::size_t i = 1; i < rankings.size(); ++i) require_same_students(rankings[0], rankings[i]);

  // Sum in a fixed order (input ranking order) so the mean is reproducible.
  std::map<std::string, double> sums;
  for (const auto& e : rankings[0].entries) sums[e.student_id] = 0.0;
  for (const auto& r : rankings) {
    for (const auto& e : r.entries) sums[e.student_id] += e.rank;
  }
  std::vector<std::string> ids;
  std::vector<double> means;
  for (const auto& [id, sum] : sums) {
    ids.push_back(id);
    means.push_back(sum / static_cast<double>(rankings.size()));
  }
  auto out = rank_values(Method::Aggregate, ids, means, false);
  out.cohort = rankings[0].cohort;
  return out;
}

std::string_view to_string(StraddlePolicy policy) {
  return policy == StraddlePolicy::StudentId ? "student_id" : "lottery";
}

StraddlePolicy parse_straddle_policy(std::string_view text) {
  if (text == "student_id") return StraddlePolicy::StudentId;
  if (text == "lottery") return StraddlePolicy::Lottery;
  throw DomainError("straddle policy must be student_id or lottery, got '" + std::string(text) + "'");
}

AllocationResult allocate(const RankingResult& ranking, std::size_t capacity,
                          AllocationOptions options) {
  AllocationResult out;
  out.capacity = capacity;
  out.basis = ranking.method;
  out.options = options;

  auto order = ranking.order();
  if (capacity < order.size() && capacity > 0 && options.straddle == StraddlePolicy::Lottery) {
    // Locate the tie class that contains the cutoff and shuffle only that class.
    const int cutoff_rank = ranking.entries[capacity - 1].rank;
    if (ranking.entries[capacity].rank == cutoff_rank) {
      std::size_t begin = capacity - 1;
      while (begin > 0 && ranking.entries[begin - 1].rank == cutoff_rank) --begin;
      std::size_t end = capacity;
      while (end < order.size() && ranking.entries[end].rank == cutoff_rank) ++end;
      std::mt19937_64 rng(options.seed);
      std::shuffle(order.begin() + static_cast<std::ptrdiff_t>(begin),
                   order.begin() + static_cast<std::ptrdiff_t>(end), rng);
    }
  }
  const std::size_t take = std::min(capacity, order.size());
  out.allocated.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
  out.waitlist.assign(order.begin() + static_cast<std::ptrdiff_t>(take), order.end());
  return out;
}

}  // namespace housing
