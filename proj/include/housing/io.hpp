#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "housing/domain.hpp"

namespace housing {

enum class InputFormat { Csv, Json };

// Exact CSV header of an applications file.
inline constexpr std::string_view kApplicationsHeader =
    "student_id,mention,level,age,employed,bacc_year,nationality,enrolled,passed_exam,cp,op,ltp,ec,dd_km";

// Parses an applications file and groups rows into cohorts by (mention, level),
// in order of first appearance; row order is kept within each cohort.
//
// CSV: comma separated, first non-comment line is the header. Lines starting
// with '#' and blank lines are ignored. Fields may be double-quoted, which is
// how a decimal comma ("0,68") is written. Booleans are true/false.
// JSON: an array of objects (or {"applications": [...]}) keyed by the CSV columns.
//
// Ingestion is all-or-nothing: the first invalid row aborts the whole file.
// Throws ParseError (malformed, with line), DomainError (invalid value, naming
// line and field) or DuplicateError (repeated student_id).
std::vector<Cohort> load_applications(std::istream& in, InputFormat format);
std::vector<Cohort> load_applications(std::string_view text, InputFormat format);
// Format chosen from the extension (.json, otherwise CSV).
std::vector<Cohort> load_applications_file(const std::filesystem::path& path);

std::string write_applications_csv(std::span<const Cohort> cohorts);

// Accepts '.' or ',' as decimal mark.
double parse_decimal(std::string_view text);

// Shortest text that round-trips to the same double.
std::string format_double(double v);

}  // namespace housing
