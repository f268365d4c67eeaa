#include "housing/domain.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "housing/errors.hpp"

namespace housing {

namespace {

constexpr std::string_view kCanonicalOrder[] = {"CP", "DD", "EC", "LTP", "OP"};

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void require_finite_non_negative(double v, std::string_view field) {
  if (!std::isfinite(v)) throw DomainError(std::string(field) + " must be finite");
  if (v < 0) throw DomainError(std::string(field) + " must be non-negative");
}

}  // namespace

std::string_view to_string(Level level) {
  switch (level) {
    case Level::L1: return "L1";
    case Level::L2: return "L2";
    case Level::L3: return "L3";
    case Level::M1: return "M1";
    case Level::M2: return "M2";
    case Level::PhD: return "PhD";
  }
  return "?";
}

Level parse_level(std::string_view text) {
  for (Level l : kAllLevels) {
    if (to_string(l) == text) return l;
  }
  throw DomainError("level must be one of {L1,L2,L3,M1,M2,PhD}, got '" + std::string(text) + "'");
}

bool ValueDomain::accepts(double raw) const {
  if (!std::isfinite(raw) || raw < 0) return false;
  if (!allowed.empty()) return std::find(allowed.begin(), allowed.end(), raw) != allowed.end();
  if (integral) return raw == std::floor(raw);
  return true;
}

std::string ValueDomain::describe() const {
  if (!allowed.empty()) {
    std::string out = "one of {";
    for (std::size_t i = 0; i < allowed.size(); ++i) {
      if (i) out += ',';
      out += format_number(allowed[i]);
    }
    return out + "}";
  }
  return integral ? "a non-negative integer" : "a non-negative number";
}

std::vector<Criterion> default_social_criteria() {
  return {
      {"CP", "Physical capacity", CriterionKind::Social, Direction::Benefit, 10.0, {{5, 10}, true}},
      {"DD", "Distance from home", CriterionKind::Social, Direction::Benefit, 1467.0, {{}, false}},
      {"EC", "Dependent child of parent", CriterionKind::Social, Direction::Benefit, 7.0, {{}, true}},
      {"LTP", "Parent's place of work", CriterionKind::Social, Direction::Benefit, 5.0, {{0, 5}, true}},
      {"OP", "Orphan of parent", CriterionKind::Social, Direction::Benefit, 10.0, {{0, 5, 10}, true}},
  };
}

void validate_criteria(std::span<const Criterion> criteria) {
  if (criteria.size() != std::size(kCanonicalOrder)) {
    throw DomainError("expected the five social criteria CP, DD, EC, LTP, OP");
  }
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    if (c.id != kCanonicalOrder[i]) {
      throw DomainError("criterion " + std::to_string(i) + " must be " +
                        std::string(kCanonicalOrder[i]) + ", got " + c.id);
    }
    if (!std::isfinite(c.ref_max) || c.ref_max <= 0) {
      throw DomainError(c.id + ".ref_max must be positive");
    }
  }
}

double social_value(const StudentApplication& app, std::string_view id) {
  if (id == "CP") return app.cp;
  if (id == "DD") return app.dd;
  if (id == "EC") return app.ec;
  if (id == "LTP") return app.ltp;
  if (id == "OP") return app.op;
  throw LookupError("unknown social criterion '" + std::string(id) + "'");
}

void validate_application(const StudentApplication& app) {
  if (app.student_id.empty()) throw DomainError("student_id must not be empty");
  if (app.age < 0) throw DomainError("age must be non-negative");
  for (const auto& c : default_social_criteria()) {
    std::string field = c.id;
    std::transform(field.begin(), field.end(), field.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (field == "dd") field = "dd_km";
    const double v = social_value(app, c.id);
    require_finite_non_negative(v, field);
    if (!c.domain.accepts(v)) throw DomainError(field + " must be " + c.domain.describe());
  }
}

std::string CohortKey::to_string() const {
  return mention + "/" + std::string(housing::to_string(level));
}

std::string CohortKey::slug() const {
  std::string out;
  auto push = [&out](std::string_view s) {
    for (unsigned char ch : s) {
      if (std::isalnum(ch)) {
        out += static_cast<char>(std::tolower(ch));
      } else if (!out.empty() && out.back() != '-') {
        out += '-';
      }
    }
    if (!out.empty() && out.back() != '-') out += '-';
  };
  push(mention);
  push(housing::to_string(level));
  if (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

CohortKey CohortKey::parse(std::string_view text) {
  const auto slash = text.rfind('/');
  if (slash == std::string_view::npos || slash == 0) {
    throw DomainError("cohort key must look like 'Mention/Level', got '" + std::string(text) + "'");
  }
  return {std::string(text.substr(0, slash)), parse_level(text.substr(slash + 1))};
}

Cohort::Cohort(CohortKey key, std::vector<StudentApplication> applications,
               std::vector<Criterion> criteria)
    : key_(std::move(key)), applications_(std::move(applications)), criteria_(std::move(criteria)) {
  validate_criteria(criteria_);
  std::set<std::string_view> seen;
  for (const auto& app : applications_) {
    if (app.mention != key_.mention || app.level != key_.level) {
      throw DomainError("application " + app.student_id + " does not belong to cohort " +
                        key_.to_string());
    }
    if (!seen.insert(app.student_id).second) {
      throw DuplicateError("duplicate student_id " + app.student_id + " in cohort " +
                           key_.to_string());
    }
  }
}

const StudentApplication* Cohort::find(std::string_view student_id) const {
  auto it = std::find_if(applications_.begin(), applications_.end(),
                         [&](const auto& a) { return a.student_id == student_id; });
  return it == applications_.end() ? nullptr : &*it;
}

const StudentApplication& Cohort::at(std::string_view student_id) const {
  if (const auto* app = find(student_id)) return *app;
  throw LookupError("unknown student '" + std::string(student_id) + "' in cohort " +
                    key_.to_string());
}

DecisionMatrix::DecisionMatrix(std::vector<std::string> rows, std::vector<std::string> cols,
                               std::vector<double> values, Scale scale)
    : rows_(std::move(rows)), cols_(std::move(cols)), values_(std::move(values)), scale_(scale) {
  if (values_.size() != rows_.size() * cols_.size()) {
    throw DomainError("decision matrix has " + std::to_string(values_.size()) +
                      " values for " + std::to_string(rows_.size()) + "x" +
                      std::to_string(cols_.size()) + " labels");
  }
  auto check_unique = [](const std::vector<std::string>& labels, const char* what) {
    std::set<std::string_view> seen;
    for (const auto& l : labels) {
      if (!seen.insert(l).second) throw DuplicateError(std::string("duplicate ") + what + " " + l);
    }
  };
  check_unique(rows_, "row label");
  check_unique(cols_, "column label");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("decision matrix entries must be finite");
  }
}

std::vector<double> DecisionMatrix::column(std::size_t c) const {
  std::vector<double> out(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) out[r] = at(r, c);
  return out;
}

std::size_t DecisionMatrix::col_index(std::string_view id) const {
  auto it = std::find(cols_.begin(), cols_.end(), id);
  if (it == cols_.end()) throw LookupError("unknown criterion '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - cols_.begin());
}

double normalize_value(double raw, const Criterion& criterion) {
  if (!std::isfinite(raw)) throw DomainError(criterion.id + " value must be finite");
  if (raw < 0) throw DomainError(criterion.id + " value must be non-negative");
  if (!std::isfinite(criterion.ref_max) || criterion.ref_max <= 0) {
    throw DomainError(criterion.id + ".ref_max must be positive");
  }
  if (raw >= criterion.ref_max) return 10.0;
  return raw / criterion.ref_max * 10.0;
}

DecisionMatrix build_decision_matrix(const Cohort& cohort, std::span<const std::string> eligible_ids) {
  if (eligible_ids.empty()) {
    throw EmptyCohortError("cohort " + cohort.key().to_string() + " has no eligible students");
  }
  const auto& criteria = cohort.criteria();
  std::vector<std::string> cols;
  cols.reserve(criteria.size());
  for (const auto& c : criteria) cols.push_back(c.id);

  std::vector<double> values;
  values.reserve(eligible_ids.size() * criteria.size());
  for (const auto& id : eligible_ids) {
    const auto& app = cohort.at(id);
    for (const auto& c : criteria) values.push_back(normalize_value(social_value(app, c.id), c));
  }
  return {std::vector<std::string>(eligible_ids.begin(), eligible_ids.end()), std::move(cols),
          std::move(values), Scale::Scale10};
}

}  // namespace housing
