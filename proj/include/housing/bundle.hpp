#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "housing/ahp.hpp"
#include "housing/domain.hpp"
#include "housing/eligibility.hpp"
#include "housing/ranking.hpp"

namespace housing {

inline constexpr std::string_view kBundleFormat = "housing-result-bundle/1";

// Everything one cohort run produced, self-describing enough to audit why each
// application was accepted, rejected, ranked and allocated.
struct ResultBundle {
  CohortKey cohort;
  std::string config_hash;
  std::optional<std::string> generated_at;  // caller-supplied; never read from the clock
  bool forced = false;                      // ranking ran despite inconsistent judgments

  ScreeningCounts counts;
  std::vector<ScreeningOutcome> screening;
  std::optional<DecisionMatrix> matrix;  // absent when nobody is eligible
  std::optional<WeightVector> weights;
  std::optional<ConsistencyReport> consistency;
  std::vector<RankingResult> rankings;
  std::vector<SimilarityReport> similarity;
  std::optional<RankingResult> aggregate;
  std::optional<AllocationResult> allocation;

  bool operator==(const ResultBundle&) const = default;
};

nlohmann::json to_json(const ResultBundle& bundle);
nlohmann::json to_json(const ScreeningOutcome& outcome);
nlohmann::json to_json(const WeightVector& weights);
nlohmann::json to_json(const ConsistencyReport& report);
nlohmann::json to_json(const RankingResult& ranking);
nlohmann::json to_json(const SimilarityReport& similarity);
nlohmann::json to_json(const AllocationResult& allocation);
ResultBundle bundle_from_json(const nlohmann::json& payload);

// {"format", "payload", "sha256"} with the digest taken over payload.dump().
// Output is byte-identical for equal bundles.
std::string save_results(const ResultBundle& bundle);
// Throws IntegrityError when the document is unreadable or the digest differs.
ResultBundle load_results(std::string_view document);

enum class ReportFormat { Csv, Json };

// Flat tables:
//   rankings   method,student_id,score,rank
//   similarity method_a,method_b,n,matches,percent
//   allocation status,position,student_id
// CSV output separates the tables with "# <name>" lines.
std::string export_report(const ResultBundle& bundle, ReportFormat format);

// Directory of bundles, one file per cohort. Writes for a cohort are
// serialized and land via rename, so readers see the old or the new file.
class ResultStore {
 public:
  explicit ResultStore(std::filesystem::path dir);

  std::filesystem::path path_for(const CohortKey& key) const;
  void save(const ResultBundle& bundle);
  std::optional<ResultBundle> load(const CohortKey& key) const;
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::mutex& lock_for(const std::string& slug);

  std::filesystem::path dir_;
  std::mutex locks_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

}  // namespace housing
