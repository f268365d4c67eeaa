#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "housing/ahp.hpp"
#include "housing/domain.hpp"
#include "housing/eligibility.hpp"
#include "housing/promethee.hpp"
#include "housing/ranking.hpp"

namespace housing {

// Upper triangle of a criteria comparison matrix, row by row.
struct JudgmentSet {
  std::vector<std::string> criteria;
  std::vector<double> upper;  // n(n-1)/2 entries: (0,1), (0,2), ..., (1,2), ...

  PairwiseMatrix to_matrix() const;
  bool operator==(const JudgmentSet&) const = default;
};

// The criteria comparison matrix behind the default weights.
JudgmentSet default_judgments();

struct MethodSettings {
  PriorityAlgorithm priority_algorithm = PriorityAlgorithm::Eigenvector;
  PreferenceFunction default_preference;
  std::map<std::string, PreferenceFunction> preference;  // per-criterion overrides

  std::vector<PreferenceFunction> preference_functions(const std::vector<std::string>& criteria) const;
  bool operator==(const MethodSettings&) const = default;
};

struct AllocationSettings {
  std::size_t default_capacity = 0;
  std::map<std::string, std::size_t> capacity;  // by cohort key, "Computer science/L1"
  AllocationOptions options;
  Method basis = Method::Aggregate;

  std::size_t capacity_for(const CohortKey& key) const;
  bool operator==(const AllocationSettings&) const = default;
};

struct Config {
  std::vector<Criterion> criteria = default_social_criteria();
  EligibilityRuleSet eligibility = default_rules();
  MethodSettings methods;
  std::optional<JudgmentSet> judgments = default_judgments();
  AllocationSettings allocation;

  bool operator==(const Config&) const = default;
};

// Sections: criteria, eligibility, methods, judgments, allocation. Unknown keys
// are rejected; anything omitted keeps its default. Throws ConfigError.
Config parse_config(const nlohmann::json& doc);
Config load_config(const std::filesystem::path& path);
nlohmann::json to_json(const Config& config);

// Accepts either a bare {"criteria": [...], "upper": [[...], ...]} object or a
// full config document with a judgments section.
JudgmentSet parse_judgments(const nlohmann::json& doc);
JudgmentSet load_judgments(const std::filesystem::path& path);
nlohmann::json to_json(const JudgmentSet& judgments);

// Judgment value: a number or a fraction string such as "1/3".
double parse_judgment_value(const nlohmann::json& value);

// SHA-256 of the canonical JSON form.
std::string config_hash(const Config& config);
std::string sha256_hex(std::string_view data);

std::string read_file(const std::filesystem::path& path);  // throws Error

}  // namespace housing
