#include "housing/pipeline.hpp"

#include <algorithm>
#include <cstdio>

#include "housing/errors.hpp"
#include "housing/promethee.hpp"
#include "housing/wsm.hpp"

namespace housing {

WeightDerivation derive_weights(const JudgmentSet& judgments, PriorityAlgorithm algorithm) {
  auto matrix = judgments.to_matrix();
  auto weights = priority_vector(matrix, algorithm);
  auto report = consistency(matrix, weights);
  return {std::move(matrix), std::move(weights), report};
}

WeightVector align_weights(const WeightVector& w, std::span<const std::string> criteria) {
  if (w.size() != criteria.size()) throw DomainError("weights do not cover the ranking criteria");
  std::vector<double> values;
  values.reserve(criteria.size());
  for (const auto& id : criteria) {
    try {
      values.push_back(w.at(id));
    } catch (const LookupError&) {
      throw DomainError("no weight for criterion " + id);
    }
  }
  return {std::vector<std::string>(criteria.begin(), criteria.end()), std::move(values)};
}

RankingResult rank_matrix(Method method, const DecisionMatrix& dm, const WeightVector& w,
                          const MethodSettings& settings, const CohortKey& cohort) {
  const auto aligned = align_weights(w, dm.cols());
  RankingResult result;
  switch (method) {
    case Method::Ahp:
      result = assign_ranks(ahp_scores(dm, aligned));
      break;
    case Method::Wsm:
      result = assign_ranks(wsm_scores(dm, aligned));
      break;
    case Method::Promethee:
      result = assign_ranks(promethee_rank(dm, aligned, settings.preference_functions(dm.cols())));
      break;
    case Method::Aggregate:
      throw DomainError("aggregate is computed from other rankings, not from a matrix");
  }
  result.cohort = cohort;
  result.weights = aligned;
  return result;
}

const RankingResult& allocation_basis(Method basis, std::span<const RankingResult> rankings,
                                      const std::optional<RankingResult>& aggregate) {
  if (basis == Method::Aggregate) {
    if (aggregate) return *aggregate;
    if (rankings.size() == 1) return rankings.front();
    throw DomainError("no aggregate ranking is available for allocation");
  }
  for (const auto& r : rankings) {
    if (r.method == basis) return r;
  }
  throw DomainError("no " + std::string(to_string(basis)) + " ranking is available for allocation");
}

ResultBundle screen_stage(const Cohort& cohort, const Config& config,
                          const std::optional<std::string>& timestamp) {
  ResultBundle bundle;
  bundle.cohort = cohort.key();
  bundle.config_hash = config_hash(config);
  bundle.generated_at = timestamp;
  const auto screening = screen_cohort(cohort, config.eligibility);
  bundle.counts = screening.counts;
  bundle.screening = screening.outcomes;
  return bundle;
}

namespace {

std::vector<std::string> eligible_ids(const ResultBundle& bundle) {
  std::vector<std::string> ids;
  for (const auto& o : bundle.screening) {
    if (o.verdict == Verdict::Eligible) ids.push_back(o.student_id);
  }
  return ids;
}

}  // namespace

void rank_stage(ResultBundle& bundle, const Cohort& cohort, const Config& config,
                std::span<const Method> methods, const RankOptions& options) {
  if (!(bundle.cohort == cohort.key())) throw DomainError("bundle belongs to another cohort");
  const auto eligible = eligible_ids(bundle);
  if (eligible.empty()) return;

  std::vector<std::string> criteria;
  for (const auto& c : cohort.criteria()) criteria.push_back(c.id);
  WeightVector weights;
  std::optional<ConsistencyReport> report;
  bool forced = false;
  if (options.weights) {
    weights = align_weights(*options.weights, criteria);
  } else {
    if (!config.judgments) throw ConfigError("no criteria judgments configured");
    auto derived = derive_weights(*config.judgments, config.methods.priority_algorithm);
    report = derived.consistency;
    if (!derived.consistency.consistent) {
      if (!options.force) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4f", derived.consistency.cr);
        throw DomainError(std::string("criteria judgments are inconsistent (CR ") + buf +
                          " > 0.1); revise them or force the ranking");
      }
      forced = true;
    }
    weights = align_weights(derived.weights, criteria);
  }

  auto matrix = build_decision_matrix(cohort, eligible);
  std::vector<RankingResult> fresh;
  for (Method m : methods) fresh.push_back(rank_matrix(m, matrix, weights, config.methods, cohort.key()));

  // Rankings made under other weights are dropped rather than mixed in.
  if (!bundle.weights || !(*bundle.weights == weights)) bundle.rankings.clear();
  std::vector<RankingResult> merged;
  for (Method m : kRankingMethods) {
    auto pick = [m](const RankingResult& r) { return r.method == m; };
    if (auto it = std::find_if(fresh.begin(), fresh.end(), pick); it != fresh.end()) {
      merged.push_back(std::move(*it));
    } else if (auto old = std::find_if(bundle.rankings.begin(), bundle.rankings.end(), pick);
               old != bundle.rankings.end()) {
      merged.push_back(std::move(*old));
    }
  }
  bundle.weights = std::move(weights);
  bundle.consistency = report;
  bundle.forced = forced;
  bundle.matrix = std::move(matrix);
  bundle.rankings = std::move(merged);
  bundle.aggregate.reset();
  if (bundle.rankings.size() >= 2) bundle.aggregate = aggregate_ranks(bundle.rankings);
  bundle.similarity.clear();
  bundle.allocation.reset();
}

void compare_stage(ResultBundle& bundle) {
  if (bundle.rankings.empty() && bundle.counts.eligible == 0) {
    bundle.similarity.clear();
    return;
  }
  if (bundle.rankings.size() < 2) throw DomainError("comparison needs at least 2 rankings");
  bundle.similarity = similarity_matrix(bundle.rankings);
}

void allocate_stage(ResultBundle& bundle, const Config& config, const AllocateOptions& options) {
  const std::size_t capacity = options.capacity.value_or(config.allocation.capacity_for(bundle.cohort));
  const Method basis = options.basis.value_or(config.allocation.basis);
  const AllocationOptions alloc = options.allocation.value_or(config.allocation.options);
  if (bundle.rankings.empty()) {
    if (bundle.counts.eligible != 0) throw DomainError("cohort must be ranked before allocation");
    bundle.allocation = AllocationResult{capacity, {}, {}, basis, alloc};
    return;
  }
  bundle.allocation = allocate(allocation_basis(basis, bundle.rankings, bundle.aggregate), capacity, alloc);
}

ResultBundle run_pipeline(const Cohort& cohort, const Config& config, const PipelineOptions& options) {
  auto bundle = screen_stage(cohort, config, options.timestamp);
  rank_stage(bundle, cohort, config, kRankingMethods, {options.force, options.weights});
  compare_stage(bundle);
  allocate_stage(bundle, config, {options.capacity, std::nullopt, std::nullopt});
  return bundle;
}

}  // namespace housing
