#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "housing/ahp.hpp"
#include "housing/config.hpp"
#include "housing/domain.hpp"
#include "housing/eligibility.hpp"

namespace testing {

// First-year computer science intake admitted to ranking, in printed order.
struct SocialRow {
  const char* id;
  double cp, dd, ec, ltp, op;
};

inline const std::array<SocialRow, 26> kCsSocial = {{
    {"L1MIA16", 5, 100, 4, 0, 5},  {"L1MIA05", 5, 102, 2, 0, 5},  {"L1MIA06", 5, 100, 3, 0, 0},
    {"L1MIA07", 5, 100, 5, 0, 5},  {"L1MIA08", 5, 100, 4, 0, 5},  {"L1MIA11", 5, 100, 2, 0, 0},
    {"L1MIA12", 5, 100, 1, 0, 0},  {"L1MIA13", 5, 923, 1, 0, 10}, {"L1MIA15", 5, 100, 3, 0, 0},
    {"L1MIA18", 5, 100, 2, 0, 0},  {"L1MIA21", 5, 100, 4, 0, 0},  {"L1MIA22", 5, 100, 1, 0, 5},
    {"L1MIA23", 5, 350, 2, 0, 10}, {"L1MIA24", 5, 100, 6, 0, 0},  {"L1MIA25", 5, 100, 5, 0, 0},
    {"L1MIA26", 5, 100, 2, 0, 0},  {"L1MIA27", 5, 102, 1, 0, 0},  {"L1MIA28", 5, 100, 4, 0, 5},
    {"L1MIA29", 5, 100, 5, 0, 5},  {"L1MIA30", 5, 399, 1, 0, 0},  {"L1MIA31", 5, 100, 3, 0, 10},
    {"L1MIA32", 5, 923, 4, 5, 5},  {"L1MIA34", 5, 399, 2, 0, 10}, {"L1MIA35", 5, 100, 2, 0, 0},
    {"L1MIA02", 5, 100, 5, 0, 5},  {"L1MIA04", 5, 100, 6, 0, 0},
}};

// The published scale-10 matrix, two decimals, same row order.
inline const std::array<std::array<double, 5>, 26> kCsScale10 = {{
    {5, 0.68, 5.71, 0, 5},  {5, 0.7, 2.86, 0, 5},   {5, 0.68, 4.29, 0, 0},  {5, 0.68, 7.14, 0, 5},
    {5, 0.68, 5.71, 0, 5},  {5, 0.68, 2.86, 0, 0},  {5, 0.68, 1.43, 0, 0},  {5, 6.3, 1.43, 0, 10},
    {5, 0.68, 4.29, 0, 0},  {5, 0.68, 2.86, 0, 0},  {5, 0.68, 5.71, 0, 0},  {5, 0.68, 1.43, 0, 5},
    {5, 2.39, 2.86, 0, 10}, {5, 0.68, 8.57, 0, 0},  {5, 0.68, 7.14, 0, 0},  {5, 0.68, 2.86, 0, 0},
    {5, 0.7, 1.43, 0, 0},   {5, 0.68, 5.71, 0, 5},  {5, 0.68, 7.14, 0, 5},  {5, 2.72, 1.43, 0, 0},
    {5, 0.68, 4.29, 0, 10}, {5, 6.3, 5.71, 10, 5},  {5, 2.72, 2.86, 0, 10}, {5, 0.68, 2.86, 0, 0},
    {5, 0.68, 7.14, 0, 5},  {5, 0.68, 8.57, 0, 0},
}};

// Criteria comparison matrix as printed: upper triangle and the published outputs.
inline const std::vector<double> kCriteriaUpper = {3, 4, 4, 3, 2, 2, 1, 1, 0.5, 0.5};
inline const std::vector<std::string> kCriteria = {"CP", "DD", "EC", "LTP", "OP"};
inline constexpr std::array<double, 5> kPublishedWeights = {0.45, 0.18, 0.10, 0.10, 0.18};
inline constexpr double kPublishedLambda = 5.0244;
inline constexpr double kPublishedCi = 0.0061;
inline constexpr double kPublishedCr = 0.0054;

inline housing::StudentApplication make_app(const SocialRow& r, std::string mention = "Computer science") {
  housing::StudentApplication a;
  a.student_id = r.id;
  a.mention = std::move(mention);
  a.level = housing::Level::L1;
  a.age = 18;
  a.bacc_year = 2017;
  a.nationality = "Malagasy";
  a.cp = r.cp;
  a.dd = r.dd;
  a.ec = r.ec;
  a.ltp = r.ltp;
  a.op = r.op;
  return a;
}

inline housing::Cohort cs_cohort() {
  std::vector<housing::StudentApplication> apps;
  for (const auto& r : kCsSocial) apps.push_back(make_app(r));
  return housing::Cohort({"Computer science", housing::Level::L1}, std::move(apps));
}

inline std::vector<std::string> cs_ids() {
  std::vector<std::string> ids;
  for (const auto& r : kCsSocial) ids.emplace_back(r.id);
  return ids;
}

inline housing::PairwiseMatrix criteria_matrix() {
  return housing::PairwiseMatrix::from_upper_triangle(kCriteria, kCriteriaUpper);
}

inline housing::WeightVector published_weights() {
  return housing::WeightVector::normalized(kCriteria, {kPublishedWeights.begin(), kPublishedWeights.end()});
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("housing-test-" + name + "-" +
                                                       std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path data_dir() { return HOUSING_DATA_DIR; }

}  // namespace testing
