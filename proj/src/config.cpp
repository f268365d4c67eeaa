#include "housing/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <type_traits>

#include "housing/errors.hpp"

namespace housing {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get_as(const json& obj, const std::string& key, const std::string& where) {
  // nlohmann converts -1 or 2.5 to an unsigned without complaint
  if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
    const auto& v = obj.at(key);
    if (std::is_unsigned_v<T> ? !v.is_number_unsigned() : !v.is_number_integer()) {
      throw ConfigError(where + "." + key + (std::is_unsigned_v<T> ? " must be a non-negative integer"
                                                                    : " must be an integer"));
    }
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

PreferenceFunction parse_preference(const json& obj, const std::string& where) {
  check_keys(obj, {"shape", "q", "p"}, where);
  PreferenceFunction f;
  try {
    f.shape = parse_preference_shape(get_as<std::string>(obj, "shape", where));
    if (obj.contains("q")) f.q = get_as<double>(obj, "q", where);
    if (obj.contains("p")) f.p = get_as<double>(obj, "p", where);
    f.validate();
  } catch (const DomainError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return f;
}

json preference_json(const PreferenceFunction& f) {
  return {{"shape", to_string(f.shape)}, {"q", f.q}, {"p", f.p}};
}

Level level_key(const std::string& key, const std::string& where) {
  try {
    return parse_level(key);
  } catch (const DomainError&) {
    throw ConfigError("unknown level '" + key + "' in " + where);
  }
}

void parse_criteria(const json& obj, std::vector<Criterion>& criteria) {
  if (!obj.is_object()) throw ConfigError("criteria must be an object");
  for (const auto& [id, spec] : obj.items()) {
    auto it = std::find_if(criteria.begin(), criteria.end(), [&](const auto& c) { return c.id == id; });
    if (it == criteria.end()) throw ConfigError("unknown criterion '" + id + "' in criteria");
    const std::string where = "criteria." + id;
    check_keys(spec, {"ref_max", "name"}, where);
    if (spec.contains("ref_max")) it->ref_max = get_as<double>(spec, "ref_max", where);
    if (spec.contains("name")) it->name = get_as<std::string>(spec, "name", where);
  }
  try {
    validate_criteria(criteria);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

void parse_eligibility(const json& obj, EligibilityRuleSet& rules) {
  const std::string where = "eligibility";
  check_keys(obj,
             {"academic_year", "age_bounds", "bacc_years", "allowed_nationalities",
              "require_enrolled", "require_passed", "forbid_employed"},
             where);
  if (obj.contains("academic_year")) rules.academic_year = get_as<std::string>(obj, "academic_year", where);
  if (obj.contains("age_bounds")) {
    rules.age_bounds.clear();
    const auto& bounds = obj.at("age_bounds");
    if (!bounds.is_object()) throw ConfigError("eligibility.age_bounds must be an object");
    for (const auto& [lvl, b] : bounds.items()) {
      const std::string w = where + ".age_bounds." + lvl;
      check_keys(b, {"min", "max"}, w);
      rules.age_bounds[level_key(lvl, w)] = {get_as<int>(b, "min", w), get_as<int>(b, "max", w)};
    }
  }
  if (obj.contains("bacc_years")) {
    rules.bacc_years.clear();
    const auto& years = obj.at("bacc_years");
    if (!years.is_object()) throw ConfigError("eligibility.bacc_years must be an object");
    for (const auto& [lvl, list] : years.items()) {
      const std::string w = where + ".bacc_years." + lvl;
      try {
        auto v = list.get<std::vector<int>>();
        rules.bacc_years[level_key(lvl, w)] = {v.begin(), v.end()};
      } catch (const json::exception&) {
        throw ConfigError(w + " must be a list of years");
      }
    }
  }
  if (obj.contains("allowed_nationalities")) {
    const auto& nat = obj.at("allowed_nationalities");
    if (nat.is_string() && nat.get<std::string>() == "any") {
      rules.allowed_nationalities.reset();
    } else {
      try {
        auto v = nat.get<std::vector<std::string>>();
        rules.allowed_nationalities = std::set<std::string>(v.begin(), v.end());
      } catch (const json::exception&) {
        throw ConfigError("eligibility.allowed_nationalities must be \"any\" or a list of strings");
      }
    }
  }
  if (obj.contains("require_enrolled")) rules.require_enrolled = get_as<bool>(obj, "require_enrolled", where);
  if (obj.contains("require_passed")) rules.require_passed = get_as<bool>(obj, "require_passed", where);
  if (obj.contains("forbid_employed")) rules.forbid_employed = get_as<bool>(obj, "forbid_employed", where);
  rules.validate();
}

void parse_methods(const json& obj, MethodSettings& methods, const std::vector<Criterion>& criteria) {
  const std::string where = "methods";
  check_keys(obj, {"priority_algorithm", "default_preference", "preference_functions"}, where);
  try {
    if (obj.contains("priority_algorithm")) {
      methods.priority_algorithm =
          parse_priority_algorithm(get_as<std::string>(obj, "priority_algorithm", where));
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (obj.contains("default_preference")) {
    methods.default_preference = parse_preference(obj.at("default_preference"), where + ".default_preference");
  }
  if (obj.contains("preference_functions")) {
    const auto& pfs = obj.at("preference_functions");
    if (!pfs.is_object()) throw ConfigError("methods.preference_functions must be an object");
    for (const auto& [id, spec] : pfs.items()) {
      if (std::none_of(criteria.begin(), criteria.end(), [&](const auto& c) { return c.id == id; })) {
        throw ConfigError("unknown criterion '" + id + "' in methods.preference_functions");
      }
      methods.preference[id] = parse_preference(spec, where + ".preference_functions." + id);
    }
  }
}

void parse_allocation(const json& obj, AllocationSettings& alloc) {
  const std::string where = "allocation";
  check_keys(obj, {"default_capacity", "capacity", "straddle_policy", "seed", "basis"}, where);
  if (obj.contains("default_capacity")) {
    alloc.default_capacity = get_as<std::size_t>(obj, "default_capacity", where);
  }
  if (obj.contains("capacity")) {
    const auto& caps = obj.at("capacity");
    if (!caps.is_object()) throw ConfigError("allocation.capacity must be an object");
    for (const auto& [key, value] : caps.items()) {
      try {
        if (!value.is_number_unsigned()) throw ConfigError("allocation.capacity." + key + " must be a non-negative integer");
        alloc.capacity[CohortKey::parse(key).to_string()] = value.get<std::size_t>();
      } catch (const json::exception&) {
        throw ConfigError("allocation.capacity." + key + " must be a non-negative integer");
      } catch (const DomainError& e) {
        throw ConfigError(std::string("allocation.capacity: ") + e.what());
      }
    }
  }
  try {
    if (obj.contains("straddle_policy")) {
      alloc.options.straddle = parse_straddle_policy(get_as<std::string>(obj, "straddle_policy", where));
    }
    if (obj.contains("basis")) alloc.basis = parse_method(get_as<std::string>(obj, "basis", where));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (obj.contains("seed")) alloc.options.seed = get_as<std::uint64_t>(obj, "seed", where);
}

}  // namespace

PairwiseMatrix JudgmentSet::to_matrix() const {
  return PairwiseMatrix::from_upper_triangle(criteria, upper);
}

JudgmentSet default_judgments() {
  return {{"CP", "DD", "EC", "LTP", "OP"},
          {3, 4, 4, 3,
           2, 2, 1,
           1, 0.5,
           0.5}};
}

std::vector<PreferenceFunction> MethodSettings::preference_functions(
    const std::vector<std::string>& criteria) const {
  std::vector<PreferenceFunction> out;
  out.reserve(criteria.size());
  for (const auto& id : criteria) {
    auto it = preference.find(id);
    out.push_back(it == preference.end() ? default_preference : it->second);
  }
  return out;
}

std::size_t AllocationSettings::capacity_for(const CohortKey& key) const {
  auto it = capacity.find(key.to_string());
  return it == capacity.end() ? default_capacity : it->second;
}

double parse_judgment_value(const json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const auto text = value.get<std::string>();
    const auto slash = text.find('/');
    auto parse = [&](std::string_view s) {
      double v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw DomainError("judgment '" + text + "' is not a number or fraction");
      }
      return v;
    };
    if (slash == std::string::npos) return parse(text);
    const double den = parse(std::string_view(text).substr(slash + 1));
    if (den == 0) throw DomainError("judgment '" + text + "' divides by zero");
    return parse(std::string_view(text).substr(0, slash)) / den;
  }
  throw DomainError("judgment values must be numbers or fraction strings");
}

JudgmentSet parse_judgments(const json& doc) {
  if (doc.is_object() && !doc.contains("upper") && doc.contains("judgments")) {
    return parse_judgments(doc.at("judgments"));
  }
  check_keys(doc, {"criteria", "upper"}, "judgments");
  JudgmentSet js;
  try {
    js.criteria = doc.at("criteria").get<std::vector<std::string>>();
  } catch (const json::exception&) {
    throw ConfigError("judgments.criteria must be a list of criterion ids");
  }
  if (!doc.contains("upper") || !doc.at("upper").is_array()) {
    throw ConfigError("judgments.upper must be a list");
  }
  try {
    for (const auto& item : doc.at("upper")) {
      if (item.is_array()) {
        for (const auto& v : item) js.upper.push_back(parse_judgment_value(v));
      } else {
        js.upper.push_back(parse_judgment_value(item));
      }
    }
    (void)js.to_matrix();
  } catch (const Error& e) {
    throw ConfigError(std::string("judgments: ") + e.what());
  }
  return js;
}

json to_json(const JudgmentSet& judgments) {
  json rows = json::array();
  const std::size_t n = judgments.criteria.size();
  std::size_t k = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    json row = json::array();
    for (std::size_t j = i + 1; j < n; ++j) row.push_back(judgments.upper.at(k++));
    rows.push_back(std::move(row));
  }
  return {{"criteria", judgments.criteria}, {"upper", rows}};
}

Config parse_config(const json& doc) {
  check_keys(doc, {"criteria", "eligibility", "methods", "judgments", "allocation"}, "config");
  Config config;
  if (doc.contains("criteria")) parse_criteria(doc.at("criteria"), config.criteria);
  if (doc.contains("eligibility")) parse_eligibility(doc.at("eligibility"), config.eligibility);
  if (doc.contains("methods")) parse_methods(doc.at("methods"), config.methods, config.criteria);
  if (doc.contains("judgments")) {
    if (doc.at("judgments").is_null()) {
      config.judgments.reset();
    } else {
      config.judgments = parse_judgments(doc.at("judgments"));
    }
  }
  if (doc.contains("allocation")) parse_allocation(doc.at("allocation"), config.allocation);
  return config;
}

json to_json(const Config& config) {
  json criteria = json::object();
  for (const auto& c : config.criteria) criteria[c.id] = {{"ref_max", c.ref_max}, {"name", c.name}};

  const auto& r = config.eligibility;
  json ages = json::object();
  for (const auto& [lvl, b] : r.age_bounds) ages[std::string(to_string(lvl))] = {{"min", b.min}, {"max", b.max}};
  json bacc = json::object();
  for (const auto& [lvl, ys] : r.bacc_years) bacc[std::string(to_string(lvl))] = ys;
  json nat = r.allowed_nationalities ? json(*r.allowed_nationalities) : json("any");

  json pfs = json::object();
  for (const auto& [id, f] : config.methods.preference) pfs[id] = preference_json(f);

  json caps = json::object();
  for (const auto& [key, cap] : config.allocation.capacity) caps[key] = cap;

  return {
      {"criteria", criteria},
      {"eligibility",
       {{"academic_year", r.academic_year},
        {"age_bounds", ages},
        {"bacc_years", bacc},
        {"allowed_nationalities", nat},
        {"require_enrolled", r.require_enrolled},
        {"require_passed", r.require_passed},
        {"forbid_employed", r.forbid_employed}}},
      {"methods",
       {{"priority_algorithm", to_string(config.methods.priority_algorithm)},
        {"default_preference", preference_json(config.methods.default_preference)},
        {"preference_functions", pfs}}},
      {"judgments", config.judgments ? to_json(*config.judgments) : json(nullptr)},
      {"allocation",
       {{"default_capacity", config.allocation.default_capacity},
        {"capacity", caps},
        {"straddle_policy", to_string(config.allocation.options.straddle)},
        {"seed", config.allocation.options.seed},
        {"basis", to_string(config.allocation.basis)}}},
  };
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace {

json parse_json_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

Config load_config(const std::filesystem::path& path) {
  try {
    return parse_config(parse_json_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

JudgmentSet load_judgments(const std::filesystem::path& path) {
  try {
    return parse_judgments(parse_json_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string config_hash(const Config& config) { return sha256_hex(to_json(config).dump()); }

}  // namespace housing
