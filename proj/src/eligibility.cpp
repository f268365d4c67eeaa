#include "housing/eligibility.hpp"

#include "housing/errors.hpp"

namespace housing {

namespace {

constexpr Rule kAllRules[] = {Rule::Age,         Rule::BaccalaureateYear,
                              Rule::AdministrativeRegistration, Rule::ExaminationResult,
                              Rule::Nationality, Rule::ProfessionalSituation};

}  // namespace

std::string_view rule_id(Rule rule) {
  switch (rule) {
    case Rule::Age: return "AGE";
    case Rule::BaccalaureateYear: return "BACCALAUREATE_YEAR";
    case Rule::AdministrativeRegistration: return "ADMINISTRATIVE_REGISTRATION";
    case Rule::ExaminationResult: return "EXAMINATION_RESULT";
    case Rule::Nationality: return "NATIONALITY";
    case Rule::ProfessionalSituation: return "PROFESSIONAL_SITUATION";
  }
  return "?";
}

Rule parse_rule(std::string_view id) {
  for (Rule r : kAllRules) {
    if (rule_id(r) == id) return r;
  }
  throw DomainError("unknown eligibility rule '" + std::string(id) + "'");
}

void EligibilityRuleSet::validate() const {
  for (const auto& [level, bounds] : age_bounds) {
    if (bounds.min > bounds.max) {
      throw ConfigError("age bounds for " + std::string(to_string(level)) + " have min > max");
    }
  }
  for (const auto& [level, years] : bacc_years) {
    if (years.empty()) {
      throw ConfigError("baccalaureate years for " + std::string(to_string(level)) + " are empty");
    }
  }
}

EligibilityRuleSet default_rules() {
  EligibilityRuleSet rules;
  rules.academic_year = "2017-2018";
  rules.age_bounds = {{Level::L1, {16, 22}}, {Level::L2, {17, 23}}, {Level::L3, {18, 24}},
                      {Level::M1, {19, 26}}, {Level::M2, {20, 27}}, {Level::PhD, {21, 35}}};
  rules.bacc_years = {{Level::L1, {2017}},
                      {Level::L2, {2016}},
                      {Level::L3, {2015}},
                      {Level::M1, {2013, 2014}},
                      {Level::M2, {2012, 2013}},
                      {Level::PhD, {2005, 2006, 2007, 2008, 2009, 2010, 2011}}};
  rules.allowed_nationalities = std::set<std::string>{"Malagasy"};
  return rules;
}

ScreeningOutcome screen_application(const StudentApplication& app, const EligibilityRuleSet& rules) {
  const auto age_it = rules.age_bounds.find(app.level);
  const auto bacc_it = rules.bacc_years.find(app.level);
  if (age_it == rules.age_bounds.end() || bacc_it == rules.bacc_years.end()) {
    throw ConfigError("eligibility rules do not cover level " + std::string(to_string(app.level)));
  }

  ScreeningOutcome out{app.student_id, Verdict::Eligible, {}};
  const auto& bounds = age_it->second;
  if (app.age < bounds.min || app.age > bounds.max) out.failed_rules.push_back(Rule::Age);
  if (!bacc_it->second.contains(app.bacc_year)) out.failed_rules.push_back(Rule::BaccalaureateYear);
  if (rules.require_enrolled && !app.enrolled) {
    out.failed_rules.push_back(Rule::AdministrativeRegistration);
  }
  if (rules.require_passed && !app.passed_exam) out.failed_rules.push_back(Rule::ExaminationResult);
  if (rules.allowed_nationalities && !rules.allowed_nationalities->contains(app.nationality)) {
    out.failed_rules.push_back(Rule::Nationality);
  }
  if (rules.forbid_employed && app.employed) out.failed_rules.push_back(Rule::ProfessionalSituation);

  if (!out.failed_rules.empty()) out.verdict = Verdict::Rejected;
  return out;
}

CohortScreening screen_cohort(const Cohort& cohort, const EligibilityRuleSet& rules) {
  if (cohort.size() == 0) {
    throw EmptyCohortError("cohort " + cohort.key().to_string() + " has no applications");
  }
  rules.validate();
  CohortScreening result;
  result.outcomes.reserve(cohort.size());
  for (const auto& app : cohort.applications()) {
    ScreeningOutcome outcome;
    try {
      outcome = screen_application(app, rules);
    } catch (const ConfigError& e) {
      throw ConfigError(app.student_id + ": " + e.what());
    }
    if (outcome.verdict == Verdict::Eligible) {
      result.eligible.push_back(outcome.student_id);
    } else {
      result.rejected.push_back(outcome);
    }
    result.outcomes.push_back(std::move(outcome));
  }
  result.counts = {cohort.size(), result.eligible.size(), result.rejected.size()};
  return result;
}

}  // namespace housing
