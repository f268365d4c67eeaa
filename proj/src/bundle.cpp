#include "housing/bundle.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "housing/config.hpp"
#include "housing/errors.hpp"
#include "housing/io.hpp"

namespace housing {

using nlohmann::json;

namespace {

json key_json(const CohortKey& k) {
  return {{"mention", k.mention}, {"level", to_string(k.level)}};
}

CohortKey key_from(const json& j) {
  return {j.at("mention").get<std::string>(), parse_level(j.at("level").get<std::string>())};
}

json weights_json(const WeightVector& w) { return {{"labels", w.labels()}, {"values", w.values()}}; }

WeightVector weights_from(const json& j) {
  return {j.at("labels").get<std::vector<std::string>>(), j.at("values").get<std::vector<double>>()};
}

json outcome_json(const ScreeningOutcome& o) {
  json rules = json::array();
  for (Rule r : o.failed_rules) rules.push_back(rule_id(r));
  return {{"student_id", o.student_id},
          {"verdict", o.verdict == Verdict::Eligible ? "ELIGIBLE" : "REJECTED"},
          {"failed_rules", rules}};
}

ScreeningOutcome outcome_from(const json& j) {
  ScreeningOutcome o;
  o.student_id = j.at("student_id").get<std::string>();
  const auto verdict = j.at("verdict").get<std::string>();
  if (verdict != "ELIGIBLE" && verdict != "REJECTED") throw DomainError("bad verdict " + verdict);
  o.verdict = verdict == "ELIGIBLE" ? Verdict::Eligible : Verdict::Rejected;
  for (const auto& r : j.at("failed_rules")) o.failed_rules.push_back(parse_rule(r.get<std::string>()));
  return o;
}

json matrix_json(const DecisionMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.row_count(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"rows", m.rows()},
          {"cols", m.cols()},
          {"scale", m.scale() == Scale::Raw ? "RAW" : "SCALE10"},
          {"values", rows}};
}

DecisionMatrix matrix_from(const json& j) {
  std::vector<double> values;
  for (const auto& row : j.at("values")) {
    for (const auto& v : row) values.push_back(v.get<double>());
  }
  const auto scale = j.at("scale").get<std::string>();
  return {j.at("rows").get<std::vector<std::string>>(), j.at("cols").get<std::vector<std::string>>(),
          std::move(values), scale == "RAW" ? Scale::Raw : Scale::Scale10};
}

json consistency_json(const ConsistencyReport& c) {
  return {{"lambda_max", c.lambda_max}, {"ci", c.ci}, {"cr", c.cr},
          {"ri", c.ri}, {"n", c.n}, {"consistent", c.consistent}};
}

ConsistencyReport consistency_from(const json& j) {
  return {j.at("lambda_max").get<double>(), j.at("ci").get<double>(), j.at("cr").get<double>(),
          j.at("ri").get<double>(), j.at("n").get<std::size_t>(), j.at("consistent").get<bool>()};
}

json ranking_json(const RankingResult& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"student_id", e.student_id}, {"value", e.value}, {"rank", e.rank}});
  }
  return {{"method", to_string(r.method)},
          {"tie_policy", "COMPETITION"},
          {"cohort", r.cohort ? key_json(*r.cohort) : json(nullptr)},
          {"weights", r.weights ? weights_json(*r.weights) : json(nullptr)},
          {"entries", entries}};
}

RankingResult ranking_from(const json& j) {
  RankingResult r;
  r.method = parse_method(j.at("method").get<std::string>());
  if (j.at("tie_policy").get<std::string>() != "COMPETITION") throw DomainError("unknown tie policy");
  if (!j.at("cohort").is_null()) r.cohort = key_from(j.at("cohort"));
  if (!j.at("weights").is_null()) r.weights = weights_from(j.at("weights"));
  for (const auto& e : j.at("entries")) {
    r.entries.push_back({e.at("student_id").get<std::string>(), e.at("value").get<double>(),
                         e.at("rank").get<int>()});
  }
  return r;
}

json similarity_json(const SimilarityReport& s) {
  return {{"first", to_string(s.first)}, {"second", to_string(s.second)}, {"n", s.n},
          {"matches", s.matches}, {"percent", s.percent}};
}

SimilarityReport similarity_from(const json& j) {
  return {parse_method(j.at("first").get<std::string>()), parse_method(j.at("second").get<std::string>()),
          j.at("n").get<std::size_t>(), j.at("matches").get<std::size_t>(), j.at("percent").get<double>()};
}

json allocation_json(const AllocationResult& a) {
  return {{"capacity", a.capacity},
          {"allocated", a.allocated},
          {"waitlist", a.waitlist},
          {"basis", to_string(a.basis)},
          {"straddle_policy", to_string(a.options.straddle)},
          {"seed", a.options.seed}};
}

AllocationResult allocation_from(const json& j) {
  AllocationResult a;
  a.capacity = j.at("capacity").get<std::size_t>();
  a.allocated = j.at("allocated").get<std::vector<std::string>>();
  a.waitlist = j.at("waitlist").get<std::vector<std::string>>();
  a.basis = parse_method(j.at("basis").get<std::string>());
  a.options.straddle = parse_straddle_policy(j.at("straddle_policy").get<std::string>());
  a.options.seed = j.at("seed").get<std::uint64_t>();
  return a;
}

template <typename T, typename F>
json optional_json(const std::optional<T>& v, F&& f) {
  return v ? f(*v) : json(nullptr);
}

}  // namespace

json to_json(const ScreeningOutcome& o) { return outcome_json(o); }
json to_json(const WeightVector& w) { return weights_json(w); }
json to_json(const ConsistencyReport& c) { return consistency_json(c); }
json to_json(const RankingResult& r) { return ranking_json(r); }
json to_json(const SimilarityReport& s) { return similarity_json(s); }
json to_json(const AllocationResult& a) { return allocation_json(a); }

json to_json(const ResultBundle& b) {
  json screening = json::array();
  for (const auto& o : b.screening) screening.push_back(outcome_json(o));
  json rankings = json::array();
  for (const auto& r : b.rankings) rankings.push_back(ranking_json(r));
  json similarity = json::array();
  for (const auto& s : b.similarity) similarity.push_back(similarity_json(s));

  return {
      {"cohort", key_json(b.cohort)},
      {"config_hash", b.config_hash},
      {"generated_at", b.generated_at ? json(*b.generated_at) : json(nullptr)},
      {"forced", b.forced},
      {"counts", {{"received", b.counts.received}, {"eligible", b.counts.eligible}, {"rejected", b.counts.rejected}}},
      {"screening", screening},
      {"matrix", optional_json(b.matrix, matrix_json)},
      {"weights", optional_json(b.weights, weights_json)},
      {"consistency", optional_json(b.consistency, consistency_json)},
      {"rankings", rankings},
      {"similarity", similarity},
      {"aggregate", optional_json(b.aggregate, ranking_json)},
      {"allocation", optional_json(b.allocation, allocation_json)},
  };
}

ResultBundle bundle_from_json(const json& p) {
  ResultBundle b;
  b.cohort = key_from(p.at("cohort"));
  b.config_hash = p.at("config_hash").get<std::string>();
  if (!p.at("generated_at").is_null()) b.generated_at = p.at("generated_at").get<std::string>();
  b.forced = p.at("forced").get<bool>();
  const auto& c = p.at("counts");
  b.counts = {c.at("received").get<std::size_t>(), c.at("eligible").get<std::size_t>(),
              c.at("rejected").get<std::size_t>()};
  for (const auto& o : p.at("screening")) b.screening.push_back(outcome_from(o));
  if (!p.at("matrix").is_null()) b.matrix = matrix_from(p.at("matrix"));
  if (!p.at("weights").is_null()) b.weights = weights_from(p.at("weights"));
  if (!p.at("consistency").is_null()) b.consistency = consistency_from(p.at("consistency"));
  for (const auto& r : p.at("rankings")) b.rankings.push_back(ranking_from(r));
  for (const auto& s : p.at("similarity")) b.similarity.push_back(similarity_from(s));
  if (!p.at("aggregate").is_null()) b.aggregate = ranking_from(p.at("aggregate"));
  if (!p.at("allocation").is_null()) b.allocation = allocation_from(p.at("allocation"));
  return b;
}

std::string save_results(const ResultBundle& bundle) {
  const json payload = to_json(bundle);
  const json doc = {{"format", kBundleFormat}, {"payload", payload}, {"sha256", sha256_hex(payload.dump())}};
  return doc.dump(2) + "\n";
}

ResultBundle load_results(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw IntegrityError(std::string("result bundle is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("payload") || !doc.contains("sha256") ||
      !doc.at("sha256").is_string()) {
    throw IntegrityError("result bundle is missing its payload or digest");
  }
  if (doc.value("format", "") != kBundleFormat) throw IntegrityError("unknown result bundle format");
  const auto& payload = doc.at("payload");
  if (sha256_hex(payload.dump()) != doc.at("sha256").get<std::string>()) {
    throw IntegrityError("result bundle digest mismatch");
  }
  try {
    return bundle_from_json(payload);
  } catch (const json::exception& e) {
    throw IntegrityError(std::string("result bundle payload is malformed: ") + e.what());
  } catch (const Error& e) {
    throw IntegrityError(std::string("result bundle payload is malformed: ") + e.what());
  }
}

std::string export_report(const ResultBundle& b, ReportFormat format) {
  std::vector<const RankingResult*> rankings;
  for (const auto& r : b.rankings) rankings.push_back(&r);
  if (b.aggregate) rankings.push_back(&*b.aggregate);

  if (format == ReportFormat::Json) {
    json ranks = json::array();
    for (const auto* r : rankings) {
      for (const auto& e : r->entries) {
        ranks.push_back({{"method", to_string(r->method)}, {"student_id", e.student_id},
                         {"score", e.value}, {"rank", e.rank}});
      }
    }
    json sim = json::array();
    for (const auto& s : b.similarity) {
      sim.push_back({{"method_a", to_string(s.first)}, {"method_b", to_string(s.second)},
                     {"n", s.n}, {"matches", s.matches}, {"percent", s.percent}});
    }
    json alloc = json::array();
    if (b.allocation) {
      std::size_t pos = 0;
      for (const auto& id : b.allocation->allocated) {
        alloc.push_back({{"status", "allocated"}, {"position", ++pos}, {"student_id", id}});
      }
      pos = 0;
      for (const auto& id : b.allocation->waitlist) {
        alloc.push_back({{"status", "waitlist"}, {"position", ++pos}, {"student_id", id}});
      }
    }
    return json{{"cohort", b.cohort.to_string()}, {"rankings", ranks}, {"similarity", sim},
                {"allocation", alloc}}
               .dump(2) +
           "\n";
  }

  std::ostringstream os;
  os << "# rankings\nmethod,student_id,score,rank\n";
  for (const auto* r : rankings) {
    for (const auto& e : r->entries) {
      os << to_string(r->method) << ',' << e.student_id << ',' << format_double(e.value) << ','
         << e.rank << '\n';
    }
  }
  os << "\n# similarity\nmethod_a,method_b,n,matches,percent\n";
  for (const auto& s : b.similarity) {
    os << to_string(s.first) << ',' << to_string(s.second) << ',' << s.n << ',' << s.matches << ','
       << format_double(s.percent) << '\n';
  }
  os << "\n# allocation\nstatus,position,student_id\n";
  if (b.allocation) {
    std::size_t pos = 0;
    for (const auto& id : b.allocation->allocated) os << "allocated," << ++pos << ',' << id << '\n';
    pos = 0;
    for (const auto& id : b.allocation->waitlist) os << "waitlist," << ++pos << ',' << id << '\n';
  }
  return os.str();
}

ResultStore::ResultStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path ResultStore::path_for(const CohortKey& key) const {
  return dir_ / (key.slug() + ".bundle.json");
}

std::mutex& ResultStore::lock_for(const std::string& slug) {
  std::lock_guard guard(locks_mutex_);
  auto& slot = locks_[slug];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

void ResultStore::save(const ResultBundle& bundle) {
  static std::atomic<unsigned long> counter{0};
  const auto target = path_for(bundle.cohort);
  const auto text = save_results(bundle);
  std::lock_guard guard(lock_for(bundle.cohort.slug()));
  std::ostringstream tmp_name;
  tmp_name << target.filename().string() << ".tmp-" << std::this_thread::get_id() << '-' << counter++;
  const auto tmp = dir_ / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::optional<ResultBundle> ResultStore::load(const CohortKey& key) const {
  const auto path = path_for(key);
  if (!std::filesystem::exists(path)) return std::nullopt;
  return load_results(read_file(path));
}

}  // namespace housing
