#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "housing/ahp.hpp"
#include "housing/bundle.hpp"
#include "housing/config.hpp"
#include "housing/domain.hpp"
#include "housing/eligibility.hpp"
#include "housing/ranking.hpp"

namespace housing {

inline constexpr Method kRankingMethods[] = {Method::Ahp, Method::Wsm, Method::Promethee};

struct WeightDerivation {
  PairwiseMatrix matrix;
  WeightVector weights;
  ConsistencyReport consistency;
};

WeightDerivation derive_weights(const JudgmentSet& judgments,
                                PriorityAlgorithm algorithm = PriorityAlgorithm::Eigenvector);

// Reorders w to follow the given criterion order. Throws DomainError when the
// label sets differ.
WeightVector align_weights(const WeightVector& w, std::span<const std::string> criteria);

// Scores and ranks the matrix with one method; the result carries the cohort
// key and a snapshot of the weights.
RankingResult rank_matrix(Method method, const DecisionMatrix& dm, const WeightVector& w,
                          const MethodSettings& settings, const CohortKey& cohort);

// Ranking basis for allocation: the aggregate when requested and available,
// otherwise the named method.
const RankingResult& allocation_basis(Method basis, std::span<const RankingResult> rankings,
                                      const std::optional<RankingResult>& aggregate);

// The stages below compose into run_pipeline; each takes the bundle left by
// the previous one, so running them one at a time gives the same document.

// Stage 1: basic-criteria screening.
ResultBundle screen_stage(const Cohort& cohort, const Config& config,
                          const std::optional<std::string>& timestamp = std::nullopt);

struct RankOptions {
  bool force = false;                   // rank even when CR > 0.1
  std::optional<WeightVector> weights;  // bypasses the configured judgments
};

// Stage 2: weights and rankings of the eligible students. Rankings already in
// the bundle are kept when the weights are unchanged. Clears any comparison
// and allocation. No-op when nobody is eligible.
void rank_stage(ResultBundle& bundle, const Cohort& cohort, const Config& config,
                std::span<const Method> methods, const RankOptions& options = {});

void compare_stage(ResultBundle& bundle);

struct AllocateOptions {
  std::optional<std::size_t> capacity;
  std::optional<Method> basis;
  std::optional<AllocationOptions> allocation;
};

void allocate_stage(ResultBundle& bundle, const Config& config, const AllocateOptions& options = {});

struct PipelineOptions {
  bool force = false;                           // rank even when CR > 0.1
  std::optional<std::string> timestamp;         // copied into the bundle
  std::optional<WeightVector> weights;          // bypasses the configured judgments
  std::optional<std::size_t> capacity;          // overrides the configured capacity
};

// Screening, weighting, the three rankings, their comparison, aggregation and
// allocation for one cohort.
ResultBundle run_pipeline(const Cohort& cohort, const Config& config, const PipelineOptions& options = {});

}  // namespace housing
