#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "housing/ahp.hpp"
#include "housing/bundle.hpp"
#include "housing/config.hpp"
#include "housing/domain.hpp"
#include "housing/eligibility.hpp"
#include "housing/ranking.hpp"

namespace httplib {
class Server;
}

namespace housing::api {

struct Request {
  std::string method;  // "GET", "POST", "PUT"
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

enum class SessionStatus { Incomplete, Consistent, Inconsistent };

std::string_view to_string(SessionStatus status);

// Interactive entry of the criteria comparison matrix. Every accepted edit
// writes the reciprocal entry and recomputes the consistency report before
// returning, so no stale ratio is ever observable.
class ElicitationSession {
 public:
  ElicitationSession(std::string id, std::vector<std::string> criteria,
                     PriorityAlgorithm algorithm = PriorityAlgorithm::Eigenvector);

  // value = how much more important row is than col; nullopt clears the pair.
  // Throws DomainError off the Saaty scale, LookupError on unknown criteria.
  void set_judgment(std::string_view row, std::string_view col, std::optional<double> value);

  const std::string& id() const noexcept { return id_; }
  const std::vector<std::string>& criteria() const noexcept { return criteria_; }
  SessionStatus status() const noexcept { return status_; }
  bool complete() const noexcept { return matrix_.has_value(); }
  const std::optional<PairwiseMatrix>& matrix() const noexcept { return matrix_; }
  const std::optional<WeightVector>& weights() const noexcept { return weights_; }
  const std::optional<ConsistencyReport>& report() const noexcept { return report_; }
  std::optional<double> entry(std::size_t i, std::size_t j) const;

  nlohmann::json to_json() const;

 private:
  void refresh();

  std::string id_;
  std::vector<std::string> criteria_;
  PriorityAlgorithm algorithm_;
  std::vector<std::optional<double>> upper_;  // strictly-upper entries, row by row
  std::optional<PairwiseMatrix> matrix_;
  std::optional<WeightVector> weights_;
  std::optional<ConsistencyReport> report_;
  SessionStatus status_ = SessionStatus::Incomplete;
};

// In-memory decision service behind the HTTP API. Mutations are serialized;
// reads share a lock and see a consistent snapshot.
//
//   POST /cohorts                        ingest applications (CSV or JSON)
//   GET  /cohorts                        list cohorts
//   POST /cohorts/{id}/screen            basic-criteria screening
//   POST /sessions                       open a judgment session
//   GET  /sessions/{id}                  session state
//   PUT  /sessions/{id}/judgments        edit judgments, returns the live report
//   GET  /sessions/{id}/weights          weights of a complete session
//   POST /cohorts/{id}/rank?method=ahp|wsm|promethee|all
//   GET  /cohorts/{id}/compare           rank similarity of every method pair
//   POST /cohorts/{id}/allocate          {"capacity": n}
//   GET  /cohorts/{id}/results           result bundle document
class Service {
 public:
  explicit Service(Config config = {}, std::optional<std::filesystem::path> store_dir = std::nullopt);

  Response handle(const Request& request);

 private:
  struct CohortState {
    Cohort cohort;
    std::optional<CohortScreening> screening;
    std::optional<WeightVector> weights;
    std::optional<ConsistencyReport> consistency;
    bool forced = false;
    std::map<Method, RankingResult> rankings;
    std::optional<RankingResult> aggregate;
    std::optional<AllocationResult> allocation;
  };

  Response dispatch(const Request& request, const std::vector<std::string>& parts);
  Response ingest(const nlohmann::json& body);
  Response list_cohorts() const;
  Response screen(const std::string& id);
  Response create_session(const nlohmann::json& body);
  Response get_session(const std::string& id) const;
  Response edit_judgments(const std::string& id, const nlohmann::json& body);
  Response session_weights(const std::string& id) const;
  Response rank(const std::string& id, const std::map<std::string, std::string>& query,
                const nlohmann::json& body);
  Response compare(const std::string& id) const;
  Response allocate_units(const std::string& id, const nlohmann::json& body);
  Response results(const std::string& id) const;

  CohortState& cohort_state(const std::string& id);
  const CohortState& cohort_state(const std::string& id) const;
  std::vector<RankingResult> ordered_rankings(const CohortState& state) const;
  ResultBundle make_bundle(const CohortState& state) const;
  void persist(const CohortState& state);

  mutable std::shared_mutex mutex_;
  Config config_;
  std::map<std::string, CohortState> cohorts_;  // by slug
  std::map<std::string, ElicitationSession> sessions_;
  std::size_t next_session_ = 1;
  std::optional<ResultStore> store_;
};

// Routes every GET/POST/PUT request of the server to the service.
void bind_routes(httplib::Server& server, Service& service);

}  // namespace housing::api
