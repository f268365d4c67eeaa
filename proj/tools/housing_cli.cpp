// housing: batch front end and HTTP server for the housing decision pipeline.
//
// Exit codes: 0 success, 1 domain/data error, 2 usage error, 3 inconsistent
// judgments (weights only).

#include <CLI11.hpp>
#include <httplib.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "housing/bundle.hpp"
#include "housing/config.hpp"
#include "housing/errors.hpp"
#include "housing/io.hpp"
#include "housing/pipeline.hpp"
#include "housing/service.hpp"

namespace fs = std::filesystem;
using namespace housing;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconsistent = 3;

struct Common {
  std::string apps;
  std::string config;
  std::string out;
  std::optional<std::string> timestamp;
  bool force = false;
};

Config load_config_or_default(const std::string& path) {
  return path.empty() ? Config{} : load_config(path);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("cannot write " + path.string());
}

void print_consistency(const ConsistencyReport& r) {
  std::printf("lambda_max %.4f  CI %.4f  RI %.2f  CR %.4f  %s\n", r.lambda_max, r.ci, r.ri, r.cr,
              r.consistent ? "consistent" : "INCONSISTENT (CR > 0.1)");
}

void print_weights(const WeightVector& w) {
  for (std::size_t i = 0; i < w.size(); ++i) std::printf("  %-4s %.4f\n", w.labels()[i].c_str(), w[i]);
}

void print_ranking(const RankingResult& r) {
  std::printf("%s\n", std::string(to_string(r.method)).c_str());
  for (const auto& e : r.entries) {
    std::printf("  %3d  %-10s %.6f\n", e.rank, e.student_id.c_str(), e.value);
  }
}

void print_screening(const ResultBundle& b) {
  std::printf("%s: received %zu, eligible %zu, rejected %zu\n", b.cohort.to_string().c_str(),
              b.counts.received, b.counts.eligible, b.counts.rejected);
  for (const auto& o : b.screening) {
    if (o.verdict == Verdict::Eligible) continue;
    std::string rules;
    for (Rule r : o.failed_rules) rules += (rules.empty() ? "" : ",") + std::string(rule_id(r));
    std::printf("  rejected %-10s %s\n", o.student_id.c_str(), rules.c_str());
  }
}

void print_similarity(const ResultBundle& b) {
  std::printf("%s\n", b.cohort.to_string().c_str());
  for (const auto& s : b.similarity) {
    std::printf("  %s-%s  %zu/%zu  %.2f%%\n", std::string(to_string(s.first)).c_str(),
                std::string(to_string(s.second)).c_str(), s.matches, s.n, s.percent);
  }
}

void print_allocation(const ResultBundle& b) {
  const auto& a = *b.allocation;
  std::printf("%s: capacity %zu, allocated %zu, waitlisted %zu (basis %s)\n",
              b.cohort.to_string().c_str(), a.capacity, a.allocated.size(), a.waitlist.size(),
              std::string(to_string(a.basis)).c_str());
  for (const auto& id : a.allocated) std::printf("  unit  %s\n", id.c_str());
  for (const auto& id : a.waitlist) std::printf("  wait  %s\n", id.c_str());
}

// Bundles left in the output directory by earlier subcommands, by file name.
std::vector<fs::path> bundles_in(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("output directory " + dir.string() + " does not exist");
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.size() > 12 && name.ends_with(".bundle.json")) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw Error("no result bundles in " + dir.string() + "; run screen first");
  return out;
}

ResultBundle read_bundle(const fs::path& path) {
  try {
    return load_results(read_file(path));
  } catch (const IntegrityError& e) {
    throw IntegrityError(path.string() + ": " + e.what());
  }
}

void write_bundle(const fs::path& dir, const ResultBundle& b) {
  ResultStore(dir).save(b);
}

std::vector<Method> parse_methods(const std::string& text) {
  if (text == "all") return {std::begin(kRankingMethods), std::end(kRankingMethods)};
  const Method m = parse_method(text);
  if (m == Method::Aggregate) throw DomainError("--method must be ahp, wsm, promethee or all");
  return {m};
}

// "CP=0.45,DD=0.18,..." in any order; renormalized to sum 1.
WeightVector parse_weight_override(const std::string& text, const std::vector<Criterion>& criteria) {
  std::map<std::string, double> given;
  std::size_t start = 0;
  while (start < text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const auto item = text.substr(start, comma - start);
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw DomainError("--weights item '" + item + "' is not ID=value");
    given[item.substr(0, eq)] = parse_decimal(item.substr(eq + 1));
    start = comma + 1;
  }
  std::vector<std::string> labels;
  std::vector<double> raw;
  for (const auto& c : criteria) {
    auto it = given.find(c.id);
    if (it == given.end()) throw DomainError("--weights is missing " + c.id);
    labels.push_back(c.id);
    raw.push_back(it->second);
    given.erase(it);
  }
  if (!given.empty()) throw DomainError("--weights names unknown criterion " + given.begin()->first);
  return WeightVector::normalized(std::move(labels), std::move(raw));
}

int cmd_screen(const Common& c) {
  const auto config = load_config_or_default(c.config);
  for (const auto& cohort : load_applications_file(c.apps)) {
    const auto bundle = screen_stage(cohort, config, c.timestamp);
    print_screening(bundle);
    if (!c.out.empty()) {
      fs::create_directories(c.out);
      write_bundle(c.out, bundle);
    }
  }
  return 0;
}

int cmd_weights(const std::string& judgments_path, const std::string& config_path) {
  JudgmentSet js = default_judgments();
  PriorityAlgorithm algorithm = PriorityAlgorithm::Eigenvector;
  if (!config_path.empty()) {
    const auto config = load_config(config_path);
    if (config.judgments) js = *config.judgments;
    algorithm = config.methods.priority_algorithm;
  }
  if (!judgments_path.empty()) js = load_judgments(judgments_path);
  const auto d = derive_weights(js, algorithm);
  std::printf("weights (%s)\n", std::string(to_string(algorithm)).c_str());
  print_weights(d.weights);
  print_consistency(d.consistency);
  return d.consistency.consistent ? 0 : kExitInconsistent;
}

int cmd_rank(const Common& c, const std::string& method, const std::string& weights) {
  const auto config = load_config_or_default(c.config);
  const auto methods = parse_methods(method);
  for (const auto& cohort : load_applications_file(c.apps)) {
    ResultBundle bundle;
    const fs::path stored = c.out.empty() ? fs::path() : ResultStore(c.out).path_for(cohort.key());
    if (!stored.empty() && fs::exists(stored)) {
      bundle = read_bundle(stored);
      if (bundle.config_hash != config_hash(config)) {
        throw DomainError(stored.string() + " was screened under a different config");
      }
    } else {
      bundle = screen_stage(cohort, config, c.timestamp);
    }
    RankOptions options{c.force, std::nullopt};
    if (!weights.empty()) options.weights = parse_weight_override(weights, cohort.criteria());
    rank_stage(bundle, cohort, config, methods, options);
    if (bundle.forced) std::fprintf(stderr, "warning: ranking forced despite inconsistent judgments\n");
    std::printf("%s\n", bundle.cohort.to_string().c_str());
    for (const auto& r : bundle.rankings) {
      if (std::find(methods.begin(), methods.end(), r.method) != methods.end()) print_ranking(r);
    }
    if (!c.out.empty()) {
      fs::create_directories(c.out);
      write_bundle(c.out, bundle);
    }
  }
  return 0;
}

int cmd_compare(const Common& c) {
  for (const auto& path : bundles_in(c.out)) {
    auto bundle = read_bundle(path);
    compare_stage(bundle);
    print_similarity(bundle);
    write_bundle(c.out, bundle);
  }
  return 0;
}

int cmd_allocate(const Common& c, std::optional<std::size_t> capacity, const std::string& basis,
                 const std::string& straddle, std::optional<std::uint64_t> seed) {
  const auto config = load_config_or_default(c.config);
  AllocateOptions options;
  options.capacity = capacity;
  if (!basis.empty()) options.basis = parse_method(basis);
  if (!straddle.empty() || seed) {
    AllocationOptions a = config.allocation.options;
    if (!straddle.empty()) a.straddle = parse_straddle_policy(straddle);
    if (seed) a.seed = *seed;
    options.allocation = a;
  }
  for (const auto& path : bundles_in(c.out)) {
    auto bundle = read_bundle(path);
    allocate_stage(bundle, config, options);
    print_allocation(bundle);
    write_bundle(c.out, bundle);
  }
  return 0;
}

int cmd_pipeline(const Common& c, std::optional<std::size_t> capacity) {
  const auto config = load_config_or_default(c.config);
  fs::create_directories(c.out);
  for (const auto& cohort : load_applications_file(c.apps)) {
    PipelineOptions options;
    options.force = c.force;
    options.timestamp = c.timestamp;
    options.capacity = capacity;
    const auto bundle = run_pipeline(cohort, config, options);
    write_bundle(c.out, bundle);
    const auto slug = cohort.key().slug();
    write_file(fs::path(c.out) / (slug + ".report.csv"), export_report(bundle, ReportFormat::Csv));
    write_file(fs::path(c.out) / (slug + ".report.json"), export_report(bundle, ReportFormat::Json));
    print_screening(bundle);
    if (bundle.consistency) print_consistency(*bundle.consistency);
    if (!bundle.similarity.empty()) print_similarity(bundle);
    if (bundle.allocation) print_allocation(bundle);
  }
  return 0;
}

int cmd_serve(const std::string& config_path, const std::string& host, int port) {
  std::optional<fs::path> store;
  if (const char* dir = std::getenv("HOUSING_STORE_DIR"); dir && *dir) {
    store = dir;
    fs::create_directories(*store);
  }
  api::Service service(load_config_or_default(config_path), store);
  httplib::Server server;
  api::bind_routes(server, service);
  std::fprintf(stderr, "listening on %s:%d%s\n", host.c_str(), port,
               store ? (" (store " + store->string() + ")").c_str() : "");
  if (!server.listen(host, port)) {
    std::fprintf(stderr, "error: cannot listen on %s:%d\n", host.c_str(), port);
    return kExitDomain;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Student housing eligibility screening, multi-criteria ranking and allocation"};
  app.require_subcommand(1);

  Common c;
  auto add_apps = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--apps", c.apps, "applications file (.csv or .json)")->check(CLI::ExistingFile);
    if (required) opt->required();
  };
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", c.config, "config JSON (defaults apply when omitted)")->check(CLI::ExistingFile);
  };
  auto add_timestamp = [&](CLI::App* sub) {
    sub->add_option("--timestamp", c.timestamp, "value recorded as generated_at in bundles");
  };

  auto* screen = app.add_subcommand("screen", "check the basic criteria of every application");
  add_apps(screen, true);
  add_config(screen);
  add_timestamp(screen);
  screen->add_option("--out", c.out, "directory for result bundles");

  std::string judgments;
  auto* weights = app.add_subcommand("weights", "criteria weights and consistency from pairwise judgments");
  weights->add_option("--judgments", judgments, "judgments JSON")->check(CLI::ExistingFile);
  add_config(weights);

  std::string method = "all";
  std::string weight_override;
  auto* rank = app.add_subcommand("rank", "rank the eligible students of each cohort");
  add_apps(rank, true);
  add_config(rank);
  add_timestamp(rank);
  rank->add_option("--method", method, "ahp, wsm, promethee or all");
  rank->add_option("--out", c.out, "directory holding the screened bundles");
  rank->add_option("--weights", weight_override, "weights instead of judgments, e.g. CP=1,DD=1,EC=1,LTP=1,OP=1");
  rank->add_flag("--force", c.force, "rank even when the judgments are inconsistent");

  auto* compare = app.add_subcommand("compare", "rank similarity between the methods");
  compare->add_option("--out", c.out, "directory holding the ranked bundles")->required();

  std::optional<std::size_t> capacity;
  std::string basis;
  std::string straddle;
  std::optional<std::uint64_t> seed;
  auto* alloc = app.add_subcommand("allocate", "give the housing units to the best ranked students");
  alloc->add_option("--out", c.out, "directory holding the ranked bundles")->required();
  add_config(alloc);
  alloc->add_option("--capacity", capacity, "number of units");
  alloc->add_option("--basis", basis, "ranking to allocate by: aggregate, ahp, wsm or promethee");
  alloc->add_option("--straddle", straddle, "tie at the cutoff: student_id or lottery");
  alloc->add_option("--seed", seed, "lottery seed");

  auto* pipeline = app.add_subcommand("pipeline", "screen, rank, compare and allocate in one run");
  add_apps(pipeline, true);
  add_config(pipeline);
  add_timestamp(pipeline);
  pipeline->add_option("--out", c.out, "output directory")->required();
  pipeline->add_option("--capacity", capacity, "number of units");
  pipeline->add_flag("--force", c.force, "rank even when the judgments are inconsistent");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "HTTP API; bundles go to $HOUSING_STORE_DIR when set");
  add_config(serve);
  serve->add_option("--host", host, "bind address");
  serve->add_option("--port", port, "port")->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*screen) return cmd_screen(c);
    if (*weights) return cmd_weights(judgments, c.config);
    if (*rank) return cmd_rank(c, method, weight_override);
    if (*compare) return cmd_compare(c);
    if (*alloc) return cmd_allocate(c, capacity, basis, straddle, seed);
    if (*pipeline) return cmd_pipeline(c, capacity);
    if (*serve) return cmd_serve(c.config, host, port);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDomain;
  }
  return kExitUsage;
}
