#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "housing/ahp.hpp"
#include "housing/domain.hpp"
#include "housing/promethee.hpp"
#include "housing/scores.hpp"

namespace housing {

// Equal scores share a rank and the next distinct score is ranked 1 + the
// number of strictly better alternatives (1, 2, 2, 4).
enum class TiePolicy { Competition };

// Scores closer than this (relative to the tie-class leader, floor 1) are tied.
inline constexpr double kTieTolerance = 1e-12;

struct RankedEntry {
  std::string student_id;
  double value = 0;  // score, net flow or mean rank
  int rank = 0;

  bool operator==(const RankedEntry&) const = default;
};

struct RankingResult {
  Method method = Method::Wsm;
  std::vector<RankedEntry> entries;  // best first; ties listed by ascending student_id
  TiePolicy tie_policy = TiePolicy::Competition;
  std::optional<CohortKey> cohort;
  std::optional<WeightVector> weights;

  std::size_t size() const noexcept { return entries.size(); }
  int rank_of(std::string_view student_id) const;  // throws LookupError
  std::vector<std::string> order() const;

  bool operator==(const RankingResult&) const = default;
};

// Descending by score. Throws DomainError on empty or non-finite input.
RankingResult assign_ranks(const ScoreVector& scores);
RankingResult assign_ranks(const FlowTable& flows);

struct SimilarityReport {
  Method first = Method::Ahp;
  Method second = Method::Wsm;
  std::size_t n = 0;
  std::size_t matches = 0;  // students holding the same rank in both
  double percent = 0;       // matches / n * 100

  bool operator==(const SimilarityReport&) const = default;
};

// Throws DomainError unless both rankings cover the same students.
SimilarityReport rank_similarity(const RankingResult& r1, const RankingResult& r2);

// Similarity of every unordered pair, in input order.
std::vector<SimilarityReport> similarity_matrix(std::span<const RankingResult> rankings);

// Mean rank across methods, ranked ascending with competition ties.
// Needs at least two rankings over the same students.
RankingResult aggregate_ranks(std::span<const RankingResult> rankings);

enum class StraddlePolicy {
  StudentId,  // tie class crossing the cutoff is admitted in ascending id order
  Lottery,    // seeded shuffle of the crossing tie class
};

std::string_view to_string(StraddlePolicy policy);
StraddlePolicy parse_straddle_policy(std::string_view text);

struct AllocationOptions {
  StraddlePolicy straddle = StraddlePolicy::StudentId;
  std::uint64_t seed = 0;

  bool operator==(const AllocationOptions&) const = default;
};

struct AllocationResult {
  std::size_t capacity = 0;
  std::vector<std::string> allocated;
  std::vector<std::string> waitlist;  // rank order
  Method basis = Method::Aggregate;
  AllocationOptions options;

  bool operator==(const AllocationResult&) const = default;
};

AllocationResult allocate(const RankingResult& ranking, std::size_t capacity,
                          AllocationOptions options = {});

}  // namespace housing
