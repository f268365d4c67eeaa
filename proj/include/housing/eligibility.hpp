#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "housing/domain.hpp"

namespace housing {

// The six basic criteria an application must meet before it is ranked.
enum class Rule {
  Age,
  BaccalaureateYear,
  AdministrativeRegistration,
  ExaminationResult,
  Nationality,
  ProfessionalSituation,
};

std::string_view rule_id(Rule rule);  // "AGE", "ADMINISTRATIVE_REGISTRATION", ...
Rule parse_rule(std::string_view id);

struct AgeBounds {
  int min = 0;
  int max = 0;
  bool operator==(const AgeBounds&) const = default;
};

struct EligibilityRuleSet {
  std::string academic_year;                   // informational, e.g. "2017-2018"
  std::map<Level, AgeBounds> age_bounds;       // inclusive
  std::map<Level, std::set<int>> bacc_years;   // acceptable baccalaureate years
  std::optional<std::set<std::string>> allowed_nationalities;  // nullopt = any
  bool require_enrolled = true;
  bool require_passed = true;
  bool forbid_employed = true;

  // Throws ConfigError on min > max or an empty bacc-year set.
  void validate() const;
  bool operator==(const EligibilityRuleSet&) const = default;
};

// Bounds consistent with the 2017-2018 first-year intake: admitted L1 students
// are 16-22 and took the baccalaureate in 2017; nationality restricted to Malagasy.
EligibilityRuleSet default_rules();

enum class Verdict { Eligible, Rejected };

struct ScreeningOutcome {
  std::string student_id;
  Verdict verdict = Verdict::Eligible;
  std::vector<Rule> failed_rules;  // empty iff eligible, in Rule declaration order

  bool operator==(const ScreeningOutcome&) const = default;
};

struct ScreeningCounts {
  std::size_t received = 0;
  std::size_t eligible = 0;
  std::size_t rejected = 0;
  bool operator==(const ScreeningCounts&) const = default;
};

struct CohortScreening {
  std::vector<std::string> eligible;         // input order
  std::vector<ScreeningOutcome> rejected;    // input order
  std::vector<ScreeningOutcome> outcomes;    // every application, input order
  ScreeningCounts counts;
};

// Evaluates every rule so the rejection reasons are complete.
// Throws ConfigError when the rule set does not cover the application's level.
ScreeningOutcome screen_application(const StudentApplication& app, const EligibilityRuleSet& rules);

// Throws EmptyCohortError on an empty cohort; per-application errors are
// rethrown with the student id prefixed.
CohortScreening screen_cohort(const Cohort& cohort, const EligibilityRuleSet& rules);

}  // namespace housing
