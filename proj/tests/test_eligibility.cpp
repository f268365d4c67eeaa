#include <doctest.h>

#include "housing/eligibility.hpp"
#include "housing/errors.hpp"
#include "support.hpp"

using namespace housing;

namespace {

StudentApplication applicant(int age, int bacc, bool enrolled, bool passed) {
  auto a = testing::make_app(testing::kCsSocial[0]);
  a.age = age;
  a.bacc_year = bacc;
  a.enrolled = enrolled;
  a.passed_exam = passed;
  return a;
}

bool fails(const ScreeningOutcome& o, Rule r) {
  return std::find(o.failed_rules.begin(), o.failed_rules.end(), r) != o.failed_rules.end();
}

}  // namespace

TEST_SUITE("eligibility") {
  TEST_CASE("rule ids round trip") {
    for (Rule r : {Rule::Age, Rule::BaccalaureateYear, Rule::AdministrativeRegistration,
                   Rule::ExaminationResult, Rule::Nationality, Rule::ProfessionalSituation}) {
      CHECK(parse_rule(rule_id(r)) == r);
    }
    CHECK(rule_id(Rule::AdministrativeRegistration) == "ADMINISTRATIVE_REGISTRATION");
    CHECK_THROWS_AS(parse_rule("HEIGHT"), DomainError);
  }

  TEST_CASE("printed admitted computer science rows pass") {
    const auto rules = default_rules();
    for (auto [id, age] : {std::pair{"L1MIA16", 18}, {"L1MIA05", 20}, {"L1MIA06", 16}, {"L1MIA07", 22},
                           {"L1MIA08", 20}, {"L1MIA11", 18}, {"L1MIA12", 19}, {"L1MIA13", 18}}) {
      auto a = applicant(age, 2017, true, true);
      a.student_id = id;
      const auto o = screen_application(a, rules);
      CHECK_MESSAGE(o.verdict == Verdict::Eligible, id);
      CHECK(o.failed_rules.empty());
    }
  }

  TEST_CASE("printed rejected rows fail registration or the examination") {
    const auto rules = default_rules();
    CHECK(fails(screen_application(applicant(18, 2017, false, true), rules), Rule::AdministrativeRegistration));
    const auto r17 = screen_application(applicant(23, 2016, false, true), rules);
    CHECK(r17.verdict == Verdict::Rejected);
    CHECK(fails(r17, Rule::AdministrativeRegistration));
    const auto r33 = screen_application(applicant(18, 2017, false, false), rules);
    CHECK(fails(r33, Rule::AdministrativeRegistration));
    CHECK(fails(r33, Rule::ExaminationResult));
    const auto law11 = screen_application(applicant(19, 2017, true, false), rules);
    CHECK(law11.failed_rules == std::vector<Rule>{Rule::ExaminationResult});
  }

  TEST_CASE("every failed rule is reported, in declaration order") {
    auto a = applicant(40, 1999, false, false);
    a.employed = true;
    a.nationality = "French";
    const auto o = screen_application(a, default_rules());
    CHECK(o.failed_rules == std::vector<Rule>{Rule::Age, Rule::BaccalaureateYear,
                                              Rule::AdministrativeRegistration, Rule::ExaminationResult,
                                              Rule::Nationality, Rule::ProfessionalSituation});
  }

  TEST_CASE("age bounds are inclusive") {
    const auto rules = default_rules();
    CHECK(screen_application(applicant(16, 2017, true, true), rules).verdict == Verdict::Eligible);
    CHECK(screen_application(applicant(22, 2017, true, true), rules).verdict == Verdict::Eligible);
    CHECK(screen_application(applicant(15, 2017, true, true), rules).failed_rules == std::vector<Rule>{Rule::Age});
    CHECK(screen_application(applicant(23, 2017, true, true), rules).failed_rules == std::vector<Rule>{Rule::Age});
  }

  TEST_CASE("relaxed switches and open nationality") {
    auto rules = default_rules();
    rules.allowed_nationalities.reset();
    rules.require_enrolled = false;
    auto a = applicant(18, 2017, false, true);
    a.nationality = "Comorian";
    CHECK(screen_application(a, rules).verdict == Verdict::Eligible);
  }

  TEST_CASE("rule set validation") {
    auto rules = default_rules();
    CHECK_NOTHROW(rules.validate());
    rules.age_bounds[Level::L1] = {30, 20};
    CHECK_THROWS_AS(rules.validate(), ConfigError);
    rules = default_rules();
    rules.bacc_years[Level::L2].clear();
    CHECK_THROWS_AS(rules.validate(), ConfigError);
  }

  TEST_CASE("uncovered level is a config error naming the student") {
    auto rules = default_rules();
    rules.age_bounds.erase(Level::L1);
    const auto cohort = testing::cs_cohort();
    CHECK_THROWS_WITH_AS(screen_cohort(cohort, rules), doctest::Contains("L1MIA16"), ConfigError);
  }

  TEST_CASE("cohort screening counts and order") {
    auto apps = testing::cs_cohort().applications();
    apps[1].enrolled = false;
    apps[4].age = 30;
    const Cohort cohort({"Computer science", Level::L1}, apps);
    const auto s = screen_cohort(cohort, default_rules());
    CHECK(s.counts.received == 26);
    CHECK(s.counts.eligible == 24);
    CHECK(s.counts.rejected == 2);
    CHECK(s.outcomes.size() == 26);
    REQUIRE(s.rejected.size() == 2);
    CHECK(s.rejected[0].student_id == "L1MIA05");
    CHECK(s.rejected[1].student_id == "L1MIA08");
    CHECK(s.eligible.front() == "L1MIA16");
    CHECK(s.eligible[1] == "L1MIA06");
  }

  TEST_CASE("empty cohort") {
    const Cohort cohort({"Computer science", Level::L1}, {});
    CHECK_THROWS_AS(screen_cohort(cohort, default_rules()), EmptyCohortError);
  }
}
