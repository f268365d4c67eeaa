#include "housing/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "housing/config.hpp"
#include "housing/errors.hpp"

namespace housing {

using nlohmann::json;

namespace {

constexpr std::size_t kColumnCount = 14;
constexpr const char* kColumns[kColumnCount] = {
    "student_id", "mention", "level", "age", "employed", "bacc_year", "nationality",
    "enrolled",   "passed_exam", "cp", "op", "ltp", "ec", "dd_km"};

// Splits one CSV record; quotes may wrap a field and "" escapes a quote.
std::vector<std::string> split_csv(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      if (!cur.empty() || was_quoted) throw ParseError("unexpected quote", line_no);
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      if (was_quoted) throw ParseError("text after closing quote", line_no);
      cur += c;
    }
  }
  if (quoted) throw ParseError("unterminated quote", line_no);
  fields.push_back(std::move(cur));
  return fields;
}

int parse_int(std::string_view text, const char* field, std::size_t line_no) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(std::string(field) + " must be an integer, got '" + std::string(text) + "'",
                     line_no);
  }
  return v;
}

bool parse_bool(std::string_view text, const char* field, std::size_t line_no) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ParseError(std::string(field) + " must be true or false, got '" + std::string(text) + "'",
                   line_no);
}

double parse_number(std::string_view text, const char* field, std::size_t line_no) {
  try {
    return parse_decimal(text);
  } catch (const DomainError&) {
    throw ParseError(std::string(field) + " must be a number, got '" + std::string(text) + "'",
                     line_no);
  }
}

StudentApplication from_fields(const std::vector<std::string>& f, std::size_t line_no) {
  StudentApplication app;
  app.student_id = f[0];
  app.mention = f[1];
  try {
    app.level = parse_level(f[2]);
  } catch (const DomainError& e) {
    throw DomainError("line " + std::to_string(line_no) + ": " + e.what());
  }
  app.age = parse_int(f[3], "age", line_no);
  app.employed = parse_bool(f[4], "employed", line_no);
  app.bacc_year = parse_int(f[5], "bacc_year", line_no);
  app.nationality = f[6];
  app.enrolled = parse_bool(f[7], "enrolled", line_no);
  app.passed_exam = parse_bool(f[8], "passed_exam", line_no);
  app.cp = parse_number(f[9], "cp", line_no);
  app.op = parse_number(f[10], "op", line_no);
  app.ltp = parse_number(f[11], "ltp", line_no);
  app.ec = parse_number(f[12], "ec", line_no);
  app.dd = parse_number(f[13], "dd_km", line_no);
  return app;
}

struct Row {
  StudentApplication app;
  std::size_t line;
};

std::vector<Cohort> group(std::vector<Row> rows) {
  std::set<std::string> ids;
  std::vector<CohortKey> keys;
  std::map<CohortKey, std::vector<StudentApplication>> groups;
  for (auto& row : rows) {
    try {
      validate_application(row.app);
    } catch (const DomainError& e) {
      throw DomainError("line " + std::to_string(row.line) + ": " + e.what());
    }
    if (!ids.insert(row.app.student_id).second) {
      throw DuplicateError("line " + std::to_string(row.line) + ": duplicate student_id " +
                           row.app.student_id);
    }
    CohortKey key{row.app.mention, row.app.level};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) keys.push_back(key);
    it->second.push_back(std::move(row.app));
  }
  std::vector<Cohort> cohorts;
  cohorts.reserve(keys.size());
  for (const auto& key : keys) cohorts.emplace_back(key, std::move(groups.at(key)));
  return cohorts;
}

std::vector<Cohort> load_csv(std::istream& in) {
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kApplicationsHeader) {
        throw ParseError("header must be exactly '" + std::string(kApplicationsHeader) + "'", line_no);
      }
      header_seen = true;
      continue;
    }
    auto fields = split_csv(line, line_no);
    if (fields.size() != kColumnCount) {
      throw ParseError("expected " + std::to_string(kColumnCount) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    rows.push_back({from_fields(fields, line_no), line_no});
  }
  if (!header_seen) throw ParseError("missing header row", line_no);
  return group(std::move(rows));
}

std::string json_field_text(const json& v, const char* field, std::size_t row_no) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_double(v.get<double>());
  throw ParseError(std::string(field) + " has an unsupported type", row_no);
}

std::vector<Cohort> load_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 0);
  }
  if (doc.is_object() && doc.contains("applications")) doc = doc.at("applications");
  if (!doc.is_array()) throw ParseError("expected an array of applications", 0);

  std::vector<Row> rows;
  std::size_t row_no = 0;
  for (const auto& obj : doc) {
    ++row_no;
    if (!obj.is_object()) throw ParseError("application must be an object", row_no);
    for (const auto& [key, _] : obj.items()) {
      if (std::find(std::begin(kColumns), std::end(kColumns), key) == std::end(kColumns)) {
        throw ParseError("unknown field '" + key + "'", row_no);
      }
    }
    std::vector<std::string> fields;
    for (const char* col : kColumns) {
      if (!obj.contains(col)) throw ParseError(std::string("missing field ") + col, row_no);
      fields.push_back(json_field_text(obj.at(col), col, row_no));
    }
    rows.push_back({from_fields(fields, row_no), row_no});
  }
  return group(std::move(rows));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

double parse_decimal(std::string_view text) {
  std::string s(text);
  for (char& c : s) {
    if (c == ',') c = '.';
  }
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw DomainError("'" + std::string(text) + "' is not a decimal number");
  }
  return v;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<Cohort> load_applications(std::istream& in, InputFormat format) {
  return format == InputFormat::Csv ? load_csv(in) : load_json(in);
}

std::vector<Cohort> load_applications(std::string_view text, InputFormat format) {
  std::istringstream in{std::string(text)};
  return load_applications(in, format);
}

std::vector<Cohort> load_applications_file(const std::filesystem::path& path) {
  const auto format = path.extension() == ".json" ? InputFormat::Json : InputFormat::Csv;
  try {
    return load_applications(read_file(path), format);
  } catch (const ParseError& e) {
    throw e.prefixed(path.string());
  } catch (const DuplicateError& e) {
    throw DuplicateError(path.string() + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(path.string() + ": " + e.what());
  }
}

std::string write_applications_csv(std::span<const Cohort> cohorts) {
  std::string out(kApplicationsHeader);
  out += '\n';
  auto b = [](bool v) { return v ? "true" : "false"; };
  for (const auto& cohort : cohorts) {
    for (const auto& a : cohort.applications()) {
      out += csv_field(a.student_id) + ',' + csv_field(a.mention) + ',' +
             std::string(to_string(a.level)) + ',' + std::to_string(a.age) + ',' + b(a.employed) +
             ',' + std::to_string(a.bacc_year) + ',' + csv_field(a.nationality) + ',' +
             b(a.enrolled) + ',' + b(a.passed_exam) + ',' + format_double(a.cp) + ',' +
             format_double(a.op) + ',' + format_double(a.ltp) + ',' + format_double(a.ec) + ',' +
             format_double(a.dd) + '\n';
    }
  }
  return out;
}

}  // namespace housing
