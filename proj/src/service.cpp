#include "housing/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "housing/errors.hpp"
#include "housing/io.hpp"
#include "housing/pipeline.hpp"

namespace housing::api {

using nlohmann::json;

namespace {

// A request precondition is not met (409).
class Conflict : public Error {
 public:
  using Error::Error;
};

// The request itself is malformed (400).
class BadRequest : public Error {
 public:
  using Error::Error;
};

// A domain rule is violated by a named field (422).
class FieldError : public Error {
 public:
  FieldError(std::string field, const std::string& what) : Error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

Response error(int status, const std::string& message, std::optional<std::string> field = {}) {
  json body = {{"error", message}, {"status", status}};
  if (field) body["field"] = *field;
  return {status, body};
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto slash = path.find('/', start);
    const auto end = slash == std::string_view::npos ? path.size() : slash;
    if (end > start) parts.emplace_back(path.substr(start, end - start));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return parts;
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    auto doc = json::parse(body);
    if (!doc.is_object()) throw BadRequest("request body must be a JSON object");
    return doc;
  } catch (const json::parse_error& e) {
    throw BadRequest(std::string("request body is not valid JSON: ") + e.what());
  }
}

bool truthy(const std::map<std::string, std::string>& query, const std::string& key) {
  auto it = query.find(key);
  return it != query.end() && (it->second == "true" || it->second == "1");
}

}  // namespace

std::string_view to_string(SessionStatus status) {
  switch (status) {
    case SessionStatus::Incomplete: return "INCOMPLETE";
    case SessionStatus::Consistent: return "CONSISTENT";
    case SessionStatus::Inconsistent: return "INCONSISTENT";
  }
  return "?";
}

ElicitationSession::ElicitationSession(std::string id, std::vector<std::string> criteria,
                                       PriorityAlgorithm algorithm)
    : id_(std::move(id)), criteria_(std::move(criteria)), algorithm_(algorithm) {
  if (criteria_.size() < 2) throw DomainError("a judgment session needs at least 2 criteria");
  (void)PairwiseMatrix(criteria_);  // label validation
  (void)random_index(criteria_.size());
  upper_.assign(criteria_.size() * (criteria_.size() - 1) / 2, std::nullopt);
}

std::optional<double> ElicitationSession::entry(std::size_t i, std::size_t j) const {
  const std::size_t n = criteria_.size();
  if (i == j) return 1.0;
  const bool flip = i > j;
  if (flip) std::swap(i, j);
  const std::size_t k = i * n - i * (i + 1) / 2 + (j - i - 1);
  const auto& v = upper_.at(k);
  if (!v) return std::nullopt;
  return flip ? 1.0 / *v : *v;
}

void ElicitationSession::set_judgment(std::string_view row, std::string_view col,
                                      std::optional<double> value) {
  auto index = [&](std::string_view label) {
    auto it = std::find(criteria_.begin(), criteria_.end(), label);
    if (it == criteria_.end()) throw LookupError("unknown criterion '" + std::string(label) + "'");
    return static_cast<std::size_t>(it - criteria_.begin());
  };
  std::size_t i = index(row);
  std::size_t j = index(col);
  if (i == j) throw DomainError("a criterion cannot be compared with itself");
  if (value && !saaty_scale_check(*value)) {
    throw DomainError("judgment must be on the Saaty scale (1..9 or 1/9..1)");
  }
  if (i > j) {
    std::swap(i, j);
    if (value) value = 1.0 / *value;
  }
  const std::size_t n = criteria_.size();
  upper_[i * n - i * (i + 1) / 2 + (j - i - 1)] = value;
  refresh();
}

void ElicitationSession::refresh() {
  matrix_.reset();
  weights_.reset();
  report_.reset();
  status_ = SessionStatus::Incomplete;
  if (std::any_of(upper_.begin(), upper_.end(), [](const auto& v) { return !v.has_value(); })) return;
  std::vector<double> upper;
  for (const auto& v : upper_) upper.push_back(*v);
  matrix_ = PairwiseMatrix::from_upper_triangle(criteria_, upper);
  weights_ = priority_vector(*matrix_, algorithm_);
  report_ = consistency(*matrix_, *weights_);
  status_ = report_->consistent ? SessionStatus::Consistent : SessionStatus::Inconsistent;
}

json ElicitationSession::to_json() const {
  const std::size_t n = criteria_.size();
  json matrix = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = entry(i, j);
      row.push_back(v ? json(*v) : json(nullptr));
    }
    matrix.push_back(std::move(row));
  }
  return {{"id", id_},
          {"criteria", criteria_},
          {"matrix", matrix},
          {"status", api::to_string(status_)},
          {"consistency", report_ ? housing::to_json(*report_) : json(nullptr)},
          {"weights", weights_ ? housing::to_json(*weights_) : json(nullptr)}};
}

Service::Service(Config config, std::optional<std::filesystem::path> store_dir)
    : config_(std::move(config)) {
  if (store_dir) store_.emplace(*store_dir);
}

Response Service::handle(const Request& request) {
  try {
    return dispatch(request, split_path(request.path));
  } catch (const BadRequest& e) {
    return error(400, e.what());
  } catch (const ParseError& e) {
    return error(400, e.what());
  } catch (const NotFound& e) {
    return error(404, e.what());
  } catch (const Conflict& e) {
    return error(409, e.what());
  } catch (const FieldError& e) {
    return error(422, e.what(), e.field());
  } catch (const LookupError& e) {
    return error(422, e.what());
  } catch (const Error& e) {
    return error(422, e.what());
  } catch (const json::exception& e) {
    return error(400, e.what());
  }
}

Response Service::dispatch(const Request& req, const std::vector<std::string>& p) {
  const auto& m = req.method;
  if (p.size() == 1 && p[0] == "cohorts") {
    if (m == "POST") return ingest(parse_body(req.body));
    if (m == "GET") return list_cohorts();
  }
  if (p.size() == 3 && p[0] == "cohorts") {
    if (m == "POST" && p[2] == "screen") return screen(p[1]);
    if (m == "POST" && p[2] == "rank") return rank(p[1], req.query, parse_body(req.body));
    if (m == "GET" && p[2] == "compare") return compare(p[1]);
    if (m == "POST" && p[2] == "allocate") return allocate_units(p[1], parse_body(req.body));
    if (m == "GET" && p[2] == "results") return results(p[1]);
  }
  if (p.size() == 1 && p[0] == "sessions" && m == "POST") return create_session(parse_body(req.body));
  if (p.size() == 2 && p[0] == "sessions" && m == "GET") return get_session(p[1]);
  if (p.size() == 3 && p[0] == "sessions") {
    if (m == "PUT" && p[2] == "judgments") return edit_judgments(p[1], parse_body(req.body));
    if (m == "GET" && p[2] == "weights") return session_weights(p[1]);
  }
  throw NotFound("no route for " + m + " " + req.path);
}

Service::CohortState& Service::cohort_state(const std::string& id) {
  auto it = cohorts_.find(id);
  if (it == cohorts_.end()) throw NotFound("unknown cohort '" + id + "'");
  return it->second;
}

const Service::CohortState& Service::cohort_state(const std::string& id) const {
  auto it = cohorts_.find(id);
  if (it == cohorts_.end()) throw NotFound("unknown cohort '" + id + "'");
  return it->second;
}

Response Service::ingest(const json& body) {
  std::vector<Cohort> loaded;
  if (body.contains("data")) {
    const auto format = body.value("format", std::string("csv"));
    if (format != "csv" && format != "json") throw BadRequest("format must be csv or json");
    if (!body.at("data").is_string()) throw BadRequest("data must be a string");
    loaded = load_applications(body.at("data").get<std::string>(),
                               format == "csv" ? InputFormat::Csv : InputFormat::Json);
  } else if (body.contains("applications")) {
    loaded = load_applications(body.dump(), InputFormat::Json);
  } else {
    throw BadRequest("body needs either data (+format) or applications");
  }

  std::unique_lock lock(mutex_);
  for (const auto& c : loaded) {
    if (cohorts_.contains(c.key().slug())) {
      throw Conflict("cohort " + c.key().to_string() + " already exists");
    }
  }
  json created = json::array();
  for (auto& c : loaded) {
    const auto slug = c.key().slug();
    created.push_back({{"id", slug}, {"key", c.key().to_string()}, {"applications", c.size()}});
    cohorts_.emplace(slug, CohortState{std::move(c), {}, {}, {}, false, {}, {}, {}});
  }
  return {201, {{"cohorts", created}}};
}

Response Service::list_cohorts() const {
  std::shared_lock lock(mutex_);
  json out = json::array();
  for (const auto& [slug, st] : cohorts_) {
    out.push_back({{"id", slug},
                   {"key", st.cohort.key().to_string()},
                   {"applications", st.cohort.size()},
                   {"screened", st.screening.has_value()},
                   {"rankings", st.rankings.size()}});
  }
  return {200, {{"cohorts", out}}};
}

Response Service::screen(const std::string& id) {
  std::unique_lock lock(mutex_);
  auto& st = cohort_state(id);
  st.screening = screen_cohort(st.cohort, config_.eligibility);
  st.weights.reset();
  st.consistency.reset();
  st.forced = false;
  st.rankings.clear();
  st.aggregate.reset();
  st.allocation.reset();
  persist(st);

  json rejected = json::array();
  for (const auto& o : st.screening->rejected) rejected.push_back(housing::to_json(o));
  const auto& c = st.screening->counts;
  return {200,
          {{"cohort", id},
           {"counts", {{"received", c.received}, {"eligible", c.eligible}, {"rejected", c.rejected}}},
           {"eligible", st.screening->eligible},
           {"rejected", rejected}}};
}

Response Service::create_session(const json& body) {
  std::vector<std::string> criteria;
  if (body.contains("criteria")) {
    try {
      criteria = body.at("criteria").get<std::vector<std::string>>();
    } catch (const json::exception&) {
      throw FieldError("criteria", "criteria must be a list of ids");
    }
  } else {
    for (const auto& c : config_.criteria) criteria.push_back(c.id);
  }
  std::unique_lock lock(mutex_);
  const auto id = "s" + std::to_string(next_session_);
  ElicitationSession session(id, criteria, config_.methods.priority_algorithm);
  ++next_session_;
  auto [it, _] = sessions_.emplace(id, std::move(session));
  return {201, it->second.to_json()};
}

Response Service::get_session(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFound("unknown session '" + id + "'");
  return {200, it->second.to_json()};
}

Response Service::edit_judgments(const std::string& id, const json& body) {
  std::vector<json> edits;
  if (body.contains("judgments")) {
    if (!body.at("judgments").is_array()) throw BadRequest("judgments must be a list");
    for (const auto& e : body.at("judgments")) edits.push_back(e);
  } else {
    edits.push_back(body);
  }

  std::unique_lock lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFound("unknown session '" + id + "'");
  // Apply to a copy so a batch is all-or-nothing.
  ElicitationSession updated = it->second;
  for (const auto& e : edits) {
    if (!e.is_object() || !e.contains("row") || !e.contains("col") || !e.contains("value")) {
      throw BadRequest("each judgment needs row, col and value");
    }
    if (!e.at("row").is_string() || !e.at("col").is_string()) {
      throw BadRequest("row and col must be criterion ids");
    }
    std::optional<double> value;
    if (!e.at("value").is_null()) {
      try {
        value = parse_judgment_value(e.at("value"));
      } catch (const DomainError& err) {
        throw FieldError("value", err.what());
      }
    }
    try {
      updated.set_judgment(e.at("row").get<std::string>(), e.at("col").get<std::string>(), value);
    } catch (const LookupError& err) {
      throw FieldError("row", err.what());
    } catch (const DomainError& err) {
      throw FieldError("value", err.what());
    }
  }
  it->second = std::move(updated);
  return {200, it->second.to_json()};
}

Response Service::session_weights(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFound("unknown session '" + id + "'");
  const auto& s = it->second;
  if (!s.complete()) throw Conflict("session " + id + " is incomplete");
  return {200,
          {{"id", id},
           {"status", to_string(s.status())},
           {"weights", housing::to_json(*s.weights())},
           {"consistency", housing::to_json(*s.report())}}};
}

std::vector<RankingResult> Service::ordered_rankings(const CohortState& state) const {
  std::vector<RankingResult> out;
  for (Method m : kRankingMethods) {
    auto it = state.rankings.find(m);
    if (it != state.rankings.end()) out.push_back(it->second);
  }
  return out;
}

Response Service::rank(const std::string& id, const std::map<std::string, std::string>& query,
                       const json& body) {
  std::vector<Method> methods;
  {
    auto it = query.find("method");
    const std::string method = it == query.end() ? "all" : it->second;
    if (method == "all") {
      methods.assign(std::begin(kRankingMethods), std::end(kRankingMethods));
    } else {
      Method parsed;
      try {
        parsed = parse_method(method);
      } catch (const DomainError& e) {
        throw BadRequest(e.what());
      }
      if (parsed == Method::Aggregate) throw BadRequest("method must be ahp, wsm, promethee or all");
      methods.push_back(parsed);
    }
  }
  const bool force = truthy(query, "force") || body.value("force", false);

  std::unique_lock lock(mutex_);
  auto& st = cohort_state(id);
  if (!st.screening) throw Conflict("cohort " + id + " must be screened before ranking");
  if (st.screening->eligible.empty()) throw Conflict("cohort " + id + " has no eligible students");

  std::vector<std::string> criteria;
  for (const auto& c : st.cohort.criteria()) criteria.push_back(c.id);

  WeightVector weights;
  std::optional<ConsistencyReport> report;
  bool forced = false;
  if (body.contains("weights")) {
    const auto& w = body.at("weights");
    if (!w.is_object()) throw FieldError("weights", "weights must map criterion ids to numbers");
    std::vector<double> raw;
    for (const auto& c : criteria) {
      if (!w.contains(c) || !w.at(c).is_number()) throw FieldError("weights." + c, "missing weight for " + c);
      raw.push_back(w.at(c).get<double>());
    }
    if (w.size() != criteria.size()) throw FieldError("weights", "unknown criterion in weights");
    try {
      weights = WeightVector::normalized(criteria, raw);
    } catch (const DomainError& e) {
      throw FieldError("weights", e.what());
    }
  } else if (body.contains("session")) {
    if (!body.at("session").is_string()) throw BadRequest("session must be a session id");
    const auto sid = body.at("session").get<std::string>();
    auto it = sessions_.find(sid);
    if (it == sessions_.end()) throw NotFound("unknown session '" + sid + "'");
    const auto& s = it->second;
    if (!s.complete()) throw Conflict("session " + sid + " is incomplete");
    if (s.status() == SessionStatus::Inconsistent) {
      if (!force) throw Conflict("session " + sid + " is inconsistent (CR > 0.1)");
      forced = true;
    }
    weights = align_weights(*s.weights(), criteria);
    report = s.report();
  } else {
    if (!config_.judgments) throw Conflict("no judgments configured; open a session first");
    auto derived = derive_weights(*config_.judgments, config_.methods.priority_algorithm);
    if (!derived.consistency.consistent) {
      if (!force) throw Conflict("configured judgments are inconsistent (CR > 0.1)");
      forced = true;
    }
    weights = align_weights(derived.weights, criteria);
    report = derived.consistency;
  }

  const auto dm = build_decision_matrix(st.cohort, st.screening->eligible);
  std::map<Method, RankingResult> computed;
  for (Method m : methods) {
    try {
      computed[m] = rank_matrix(m, dm, weights, config_.methods, st.cohort.key());
    } catch (const DomainError& e) {
      throw FieldError("method", e.what());
    }
  }

  // Rankings computed under other weights would no longer be comparable.
  if (!st.weights || !(*st.weights == weights)) st.rankings.clear();
  st.weights = weights;
  st.consistency = report;
  st.forced = forced;
  for (auto& [m, r] : computed) st.rankings[m] = std::move(r);
  const auto ordered = ordered_rankings(st);
  st.aggregate.reset();
  if (ordered.size() >= 2) st.aggregate = aggregate_ranks(ordered);
  st.allocation.reset();
  persist(st);

  json rankings = json::array();
  for (const auto& r : ordered) rankings.push_back(housing::to_json(r));
  return {200,
          {{"cohort", id},
           {"weights", housing::to_json(weights)},
           {"consistency", report ? housing::to_json(*report) : json(nullptr)},
           {"forced", forced},
           {"rankings", rankings},
           {"aggregate", st.aggregate ? housing::to_json(*st.aggregate) : json(nullptr)}}};
}

Response Service::compare(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto& st = cohort_state(id);
  const auto ordered = ordered_rankings(st);
  if (ordered.size() < 2) throw Conflict("comparison needs at least 2 rankings of cohort " + id);
  json pairs = json::array();
  for (const auto& s : similarity_matrix(ordered)) pairs.push_back(housing::to_json(s));
  return {200, {{"cohort", id}, {"similarity", pairs}}};
}

Response Service::allocate_units(const std::string& id, const json& body) {
  std::unique_lock lock(mutex_);
  auto& st = cohort_state(id);
  const auto ordered = ordered_rankings(st);
  if (ordered.empty()) throw Conflict("cohort " + id + " must be ranked before allocation");

  std::size_t capacity = config_.allocation.capacity_for(st.cohort.key());
  if (body.contains("capacity")) {
    if (!body.at("capacity").is_number_unsigned()) {
      throw FieldError("capacity", "capacity must be a non-negative integer");
    }
    capacity = body.at("capacity").get<std::size_t>();
  }
  Method basis = config_.allocation.basis;
  AllocationOptions options = config_.allocation.options;
  try {
    if (body.contains("basis")) basis = parse_method(body.at("basis").get<std::string>());
    if (body.contains("straddle_policy")) {
      options.straddle = parse_straddle_policy(body.at("straddle_policy").get<std::string>());
    }
  } catch (const DomainError& e) {
    throw FieldError("basis", e.what());
  }
  if (body.contains("seed")) {
    if (!body.at("seed").is_number_unsigned()) throw FieldError("seed", "seed must be a non-negative integer");
    options.seed = body.at("seed").get<std::uint64_t>();
  }
  const RankingResult* chosen = nullptr;
  try {
    chosen = &allocation_basis(basis, ordered, st.aggregate);
  } catch (const DomainError& e) {
    throw Conflict(e.what());
  }
  st.allocation = allocate(*chosen, capacity, options);
  persist(st);
  return {200, {{"cohort", id}, {"allocation", housing::to_json(*st.allocation)}}};
}

ResultBundle Service::make_bundle(const CohortState& st) const {
  ResultBundle b;
  b.cohort = st.cohort.key();
  b.config_hash = config_hash(config_);
  b.forced = st.forced;
  if (st.screening) {
    b.counts = st.screening->counts;
    b.screening = st.screening->outcomes;
    if (!st.screening->eligible.empty() && st.weights) {
      b.matrix = build_decision_matrix(st.cohort, st.screening->eligible);
    }
  }
  b.weights = st.weights;
  b.consistency = st.consistency;
  b.rankings = ordered_rankings(st);
  if (b.rankings.size() >= 2) b.similarity = similarity_matrix(b.rankings);
  b.aggregate = st.aggregate;
  b.allocation = st.allocation;
  return b;
}

void Service::persist(const CohortState& state) {
  if (store_) store_->save(make_bundle(state));
}

Response Service::results(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto& st = cohort_state(id);
  if (!st.screening) throw Conflict("cohort " + id + " has not been screened");
  return {200, json::parse(save_results(make_bundle(st)))};
}

void bind_routes(httplib::Server& server, Service& service) {
  auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
    Request r{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) r.query[k] = v;
    const auto out = service.handle(r);
    res.status = out.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(out.body.dump(), "application/json");
  };
  server.Get(".*", handler);
  server.Post(".*", handler);
  server.Put(".*", handler);
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

}  // namespace housing::api
