#include <doctest.h>

#include <httplib.h>

#include <thread>

#include "housing/config.hpp"
#include "housing/io.hpp"
#include "housing/service.hpp"
#include "support.hpp"

using namespace housing;
using namespace housing::api;
using nlohmann::json;

namespace {

Response call(Service& s, const std::string& method, const std::string& path, const json& body = json(),
              std::map<std::string, std::string> query = {}) {
  return s.handle({method, path, std::move(query), body.is_null() ? "" : body.dump()});
}

std::string fixture_csv(const char* name) { return read_file(testing::data_dir() / name); }

json ingest_body() { return {{"format", "csv"}, {"data", fixture_csv("cs_l1_applications.csv")}}; }

const char* kCs = "/cohorts/computer-science-l1";

json fill_published(Service& s, const std::string& sid) {
  const auto& c = testing::kCriteria;
  json edits = json::array();
  std::size_t k = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = i + 1; j < 5; ++j) {
      const double v = testing::kCriteriaUpper[k++];
      edits.push_back({{"row", c[i]}, {"col", c[j]}, {"value", v == 0.5 ? json("1/2") : json(v)}});
    }
  }
  return call(s, "PUT", "/sessions/" + sid + "/judgments", {{"judgments", edits}}).body;
}

}  // namespace

TEST_SUITE("service") {
  TEST_CASE("ingest and list") {
    Service s;
    auto r = call(s, "POST", "/cohorts", ingest_body());
    CHECK(r.status == 201);
    CHECK(r.body["cohorts"][0]["id"] == "computer-science-l1");
    CHECK(r.body["cohorts"][0]["applications"] == 35);
    CHECK(call(s, "POST", "/cohorts", ingest_body()).status == 409);
    r = call(s, "GET", "/cohorts");
    CHECK(r.body["cohorts"].size() == 1);
    CHECK(r.body["cohorts"][0]["screened"] == false);
  }

  TEST_CASE("malformed bodies are 400, domain violations 422") {
    Service s;
    CHECK(s.handle({"POST", "/cohorts", {}, "{not json"}).status == 400);
    CHECK(s.handle({"POST", "/cohorts", {}, "[1,2]"}).status == 400);
    CHECK(call(s, "POST", "/cohorts", {{"nothing", 1}}).status == 400);
    const std::string bad = std::string(kApplicationsHeader) +
                            "\nX,Law,L1,20,false,2017,Malagasy,true,true,7,0,0,0,1\n";
    auto r = call(s, "POST", "/cohorts", {{"format", "csv"}, {"data", bad}});
    CHECK(r.status == 422);
    CHECK(r.body["error"].get<std::string>().find("cp") != std::string::npos);
    CHECK(call(s, "GET", "/nowhere").status == 404);
  }

  TEST_CASE("ranking before screening is refused") {
    Service s;
    call(s, "POST", "/cohorts", ingest_body());
    CHECK(call(s, "POST", std::string(kCs) + "/rank", json(), {{"method", "all"}}).status == 409);
    CHECK(call(s, "GET", std::string(kCs) + "/results").status == 409);
    CHECK(call(s, "POST", "/cohorts/law-l1/screen").status == 404);
  }

  TEST_CASE("screening response") {
    Service s;
    call(s, "POST", "/cohorts", ingest_body());
    const auto r = call(s, "POST", std::string(kCs) + "/screen");
    CHECK(r.status == 200);
    CHECK(r.body["counts"]["eligible"] == 26);
    CHECK(r.body["rejected"].size() == 9);
    CHECK(r.body["rejected"][0]["student_id"] == "L1MIA10");
  }

  TEST_CASE("judgment session: reciprocal fill, live report, status") {
    Service s;
    auto r = call(s, "POST", "/sessions", json::object());
    CHECK(r.status == 201);
    const std::string sid = r.body["id"];
    CHECK(r.body["status"] == "INCOMPLETE");

    r = call(s, "PUT", "/sessions/" + sid + "/judgments", {{"row", "CP"}, {"col", "DD"}, {"value", 3}});
    CHECK(r.status == 200);
    CHECK(r.body["status"] == "INCOMPLETE");
    CHECK(r.body["matrix"][0][1] == 3.0);
    CHECK(r.body["matrix"][1][0].get<double>() == doctest::Approx(1.0 / 3));
    CHECK(r.body["consistency"].is_null());
    CHECK(call(s, "GET", "/sessions/" + sid + "/weights").status == 409);

    const auto full = fill_published(s, sid);
    CHECK(full["status"] == "CONSISTENT");
    for (std::size_t i = 0; i < 5; ++i) {
      const double w = full["weights"]["values"][i].get<double>();
      CHECK(std::abs(w - testing::kPublishedWeights[i]) <= 0.005);
    }
    CHECK(full["consistency"]["cr"].get<double>() < 0.1);

    r = call(s, "GET", "/sessions/" + sid + "/weights");
    CHECK(r.status == 200);
    CHECK(r.body["status"] == "CONSISTENT");

    // Reverse CP over DD: the recomputed ratio crosses the threshold.
    r = call(s, "PUT", "/sessions/" + sid + "/judgments", {{"row", "DD"}, {"col", "CP"}, {"value", 9}});
    CHECK(r.body["status"] == "INCONSISTENT");
    CHECK(r.body["consistency"]["cr"].get<double>() > 0.1);
    CHECK(r.body["matrix"][0][1].get<double>() == doctest::Approx(1.0 / 9));

    r = call(s, "PUT", "/sessions/" + sid + "/judgments", {{"row", "CP"}, {"col", "DD"}, {"value", nullptr}});
    CHECK(r.body["status"] == "INCOMPLETE");
    CHECK(r.body["matrix"][1][0].is_null());
  }

  TEST_CASE("judgment validation") {
    Service s;
    const std::string sid = call(s, "POST", "/sessions", json::object()).body["id"];
    const std::string path = "/sessions/" + sid + "/judgments";
    auto r = call(s, "PUT", path, {{"row", "CP"}, {"col", "DD"}, {"value", 11}});
    CHECK(r.status == 422);
    CHECK(r.body["field"] == "value");
    r = call(s, "PUT", path, {{"row", "CP"}, {"col", "XX"}, {"value", 3}});
    CHECK(r.status == 422);
    CHECK(call(s, "PUT", path, {{"row", "CP"}, {"col", "CP"}, {"value", 1}}).status == 422);
    CHECK(call(s, "PUT", path, {{"row", "CP"}}).status == 400);
    CHECK(call(s, "PUT", "/sessions/s999/judgments", {{"row", "CP"}, {"col", "DD"}, {"value", 3}}).status == 404);

    // A failing batch leaves the session untouched.
    json batch = {{"judgments", json::array({{{"row", "CP"}, {"col", "DD"}, {"value", 3}},
                                             {{"row", "CP"}, {"col", "EC"}, {"value", 2.5}}})}};
    CHECK(call(s, "PUT", path, batch).status == 422);
    CHECK(call(s, "GET", "/sessions/" + sid).body["matrix"][0][1].is_null());
  }

  TEST_CASE("rank, compare, allocate, results") {
    Service s;
    call(s, "POST", "/cohorts", ingest_body());
    call(s, "POST", std::string(kCs) + "/screen");
    CHECK(call(s, "GET", std::string(kCs) + "/compare").status == 409);
    CHECK(call(s, "POST", std::string(kCs) + "/allocate", {{"capacity", 5}}).status == 409);

    auto r = call(s, "POST", std::string(kCs) + "/rank", json(), {{"method", "wsm"}});
    CHECK(r.status == 200);
    CHECK(r.body["rankings"].size() == 1);
    CHECK(r.body["aggregate"].is_null());
    r = call(s, "POST", std::string(kCs) + "/rank", json(), {{"method", "all"}});
    CHECK(r.body["rankings"].size() == 3);
    CHECK(r.body["rankings"][0]["entries"].size() == 26);

    r = call(s, "GET", std::string(kCs) + "/compare");
    CHECK(r.status == 200);
    CHECK(r.body["similarity"].size() == 3);

    r = call(s, "POST", std::string(kCs) + "/allocate", {{"capacity", 5}});
    CHECK(r.status == 200);
    CHECK(r.body["allocation"]["allocated"].size() == 5);
    CHECK(call(s, "POST", std::string(kCs) + "/allocate", {{"capacity", -5}}).status == 422);
    CHECK(call(s, "POST", std::string(kCs) + "/allocate", {{"basis", "topsis"}}).status == 422);

    r = call(s, "GET", std::string(kCs) + "/results");
    CHECK(r.status == 200);
    CHECK(r.body["format"] == std::string(kBundleFormat));
    const auto bundle = load_results(r.body.dump());
    CHECK(bundle.rankings.size() == 3);
    CHECK(bundle.allocation->capacity == 5);
    CHECK(call(s, "POST", std::string(kCs) + "/rank", json(), {{"method", "topsis"}}).status == 400);
  }

  TEST_CASE("session-driven ranking respects consistency") {
    Service s;
    call(s, "POST", "/cohorts", ingest_body());
    call(s, "POST", std::string(kCs) + "/screen");
    const std::string sid = call(s, "POST", "/sessions", json::object()).body["id"];
    CHECK(call(s, "POST", std::string(kCs) + "/rank", {{"session", sid}}).status == 409);
    fill_published(s, sid);
    call(s, "PUT", "/sessions/" + sid + "/judgments", {{"row", "CP"}, {"col", "DD"}, {"value", "1/9"}});
    CHECK(call(s, "POST", std::string(kCs) + "/rank", {{"session", sid}}).status == 409);
    auto r = call(s, "POST", std::string(kCs) + "/rank", {{"session", sid}, {"force", true}});
    CHECK(r.status == 200);
    CHECK(r.body["forced"] == true);
    CHECK(call(s, "POST", std::string(kCs) + "/rank", {{"session", "s404"}}).status == 404);
  }

  TEST_CASE("what-if weights") {
    Service s;
    call(s, "POST", "/cohorts", ingest_body());
    call(s, "POST", std::string(kCs) + "/screen");
    const auto base = call(s, "POST", std::string(kCs) + "/rank", json(), {{"method", "all"}}).body;
    auto r = call(s, "POST", std::string(kCs) + "/rank",
                  {{"weights", {{"CP", 1}, {"DD", 1}, {"EC", 1}, {"LTP", 1}, {"OP", 1}}}}, {{"method", "wsm"}});
    CHECK(r.status == 200);
    CHECK(r.body["weights"]["values"][2].get<double>() == doctest::Approx(0.2));
    CHECK(r.body["rankings"].size() == 1);
    r = call(s, "POST", std::string(kCs) + "/rank", {{"weights", {{"CP", 1}}}}, {{"method", "wsm"}});
    CHECK(r.status == 422);
    // Restoring the judgment weights reproduces the original response.
    CHECK(call(s, "POST", std::string(kCs) + "/rank", json(), {{"method", "all"}}).body == base);
  }

  TEST_CASE("replaying the same requests gives identical bundles on disk") {
    auto run = [](const std::filesystem::path& dir) {
      Service s(Config{}, dir);
      call(s, "POST", "/cohorts", ingest_body());
      call(s, "POST", std::string(kCs) + "/screen");
      call(s, "POST", std::string(kCs) + "/rank", json(), {{"method", "all"}});
      call(s, "POST", std::string(kCs) + "/allocate", {{"capacity", 8}});
      return read_file(dir / "computer-science-l1.bundle.json");
    };
    const auto d1 = testing::temp_dir("replay1");
    const auto d2 = testing::temp_dir("replay2");
    const auto a = run(d1);
    CHECK(a == run(d2));
    CHECK(load_results(a).allocation->allocated.size() == 8);
    std::filesystem::remove_all(d1);
    std::filesystem::remove_all(d2);
  }

  TEST_CASE("concurrent requests") {
    Service s;
    call(s, "POST", "/cohorts", ingest_body());
    call(s, "POST", std::string(kCs) + "/screen");
    std::vector<std::thread> threads;
    std::atomic<int> ok{0};
    for (int t = 0; t < 8; ++t) {
      threads.emplace_back([&, t] {
        for (int k = 0; k < 5; ++k) {
          const auto r = t % 2 ? call(s, "POST", std::string(kCs) + "/rank", json(), {{"method", "all"}})
                               : call(s, "GET", "/cohorts");
          if (r.status == 200) ++ok;
        }
      });
    }
    for (auto& th : threads) th.join();
    CHECK(ok == 40);
    CHECK(call(s, "GET", std::string(kCs) + "/compare").body["similarity"].size() == 3);
  }
}

TEST_SUITE("http") {
  TEST_CASE("routes over a real socket") {
    Service service;
    httplib::Server server;
    bind_routes(server, service);
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread listener([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto res = client.Post("/cohorts", ingest_body().dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 201);
    CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
    res = client.Post("/cohorts/computer-science-l1/rank?method=all", "", "application/json");
    REQUIRE(res);
    CHECK(res->status == 409);
    res = client.Post("/cohorts/computer-science-l1/screen", "", "application/json");
    CHECK(res->status == 200);
    res = client.Post("/cohorts/computer-science-l1/rank?method=promethee", "", "application/json");
    CHECK(res->status == 200);
    CHECK(json::parse(res->body)["rankings"][0]["method"] == "PROMETHEE");
    res = client.Put("/sessions/s1/judgments", R"({"row":"CP","col":"DD","value":3})", "application/json");
    CHECK(res->status == 404);
    res = client.Options("/cohorts");
    CHECK(res->status == 204);

    server.stop();
    listener.join();
  }
}
