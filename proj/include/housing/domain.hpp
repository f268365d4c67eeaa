#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace housing {

enum class CriterionKind { Basic, Social };
enum class Direction { Benefit };

// Study level of an applicant. Screening and ranking happen per (mention, level).
enum class Level { L1, L2, L3, M1, M2, PhD };

std::string_view to_string(Level level);
Level parse_level(std::string_view text);  // throws DomainError
inline constexpr Level kAllLevels[] = {Level::L1, Level::L2, Level::L3,
                                       Level::M1, Level::M2, Level::PhD};

// Legal raw values of a social criterion.
struct ValueDomain {
  std::vector<double> allowed;  // enumerated levels; empty means any value >= 0
  bool integral = false;        // counts such as dependent children

  bool accepts(double raw) const;
  std::string describe() const;
  bool operator==(const ValueDomain&) const = default;
};

struct Criterion {
  std::string id;
  std::string name;
  CriterionKind kind = CriterionKind::Social;
  Direction direction = Direction::Benefit;
  double ref_max = 10.0;  // raw value mapped to 10 on the normalized scale
  ValueDomain domain;

  bool operator==(const Criterion&) const = default;
};

// CP, DD, EC, LTP, OP with the reference maxima that reproduce the published
// scale-10 matrix (CP 10, DD 1467 km, EC 7, LTP 5, OP 10).
std::vector<Criterion> default_social_criteria();

// Throws DomainError when ref_max is not a positive finite number or when the
// ids are not exactly the canonical column order.
void validate_criteria(std::span<const Criterion> criteria);

struct StudentApplication {
  std::string student_id;
  std::string mention;
  Level level = Level::L1;
  int age = 0;
  bool employed = false;
  int bacc_year = 0;
  std::string nationality;
  bool enrolled = true;
  bool passed_exam = true;
  double cp = 5;   // 5 normal, 10 disability
  double op = 0;   // 0 none, 5 one parent, 10 both
  double ltp = 0;  // 5 parent works at the university, 0 other
  double ec = 0;   // dependent children
  double dd = 0;   // distance from home, km

  bool operator==(const StudentApplication&) const = default;
};

// Raw value of a social criterion by id ("CP", "DD", "EC", "LTP", "OP").
double social_value(const StudentApplication& app, std::string_view criterion_id);

// Throws DomainError naming the offending field.
void validate_application(const StudentApplication& app);

struct CohortKey {
  std::string mention;
  Level level = Level::L1;

  std::string to_string() const;  // "Computer science/L1"
  std::string slug() const;       // "computer-science-l1"
  static CohortKey parse(std::string_view text);
  auto operator<=>(const CohortKey&) const = default;
};

class Cohort {
 public:
  Cohort(CohortKey key, std::vector<StudentApplication> applications,
         std::vector<Criterion> criteria = default_social_criteria());

  const CohortKey& key() const noexcept { return key_; }
  const std::vector<StudentApplication>& applications() const noexcept { return applications_; }
  const std::vector<Criterion>& criteria() const noexcept { return criteria_; }
  std::size_t size() const noexcept { return applications_.size(); }

  const StudentApplication* find(std::string_view student_id) const;
  const StudentApplication& at(std::string_view student_id) const;  // throws LookupError

  bool operator==(const Cohort&) const = default;

 private:
  CohortKey key_;
  std::vector<StudentApplication> applications_;
  std::vector<Criterion> criteria_;
};

enum class Scale { Raw, Scale10 };

// Eligible students x social criteria, row-major.
class DecisionMatrix {
 public:
  DecisionMatrix() = default;
  DecisionMatrix(std::vector<std::string> rows, std::vector<std::string> cols,
                 std::vector<double> values, Scale scale);

  std::size_t row_count() const noexcept { return rows_.size(); }
  std::size_t col_count() const noexcept { return cols_.size(); }
  const std::vector<std::string>& rows() const noexcept { return rows_; }
  const std::vector<std::string>& cols() const noexcept { return cols_; }
  const std::vector<double>& values() const noexcept { return values_; }
  Scale scale() const noexcept { return scale_; }

  double at(std::size_t row, std::size_t col) const { return values_[row * cols_.size() + col]; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_.size(), cols_.size()};
  }
  std::vector<double> column(std::size_t c) const;
  std::size_t col_index(std::string_view id) const;  // throws LookupError

  bool operator==(const DecisionMatrix&) const = default;

 private:
  std::vector<std::string> rows_;
  std::vector<std::string> cols_;
  std::vector<double> values_;
  Scale scale_ = Scale::Scale10;
};

// raw / ref_max * 10, clamped to 10 above ref_max.
double normalize_value(double raw, const Criterion& criterion);

DecisionMatrix build_decision_matrix(const Cohort& cohort,
                                     std::span<const std::string> eligible_ids);

}  // namespace housing
