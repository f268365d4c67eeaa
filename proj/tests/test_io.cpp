#include <doctest.h>

#include <fstream>

#include "housing/bundle.hpp"
#include "housing/config.hpp"
#include "housing/errors.hpp"
#include "housing/io.hpp"
#include "housing/pipeline.hpp"
#include "support.hpp"

using namespace housing;
using nlohmann::json;

namespace {

const std::string kHeader(kApplicationsHeader);

std::string csv(const std::string& rows) { return kHeader + "\n" + rows; }

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("CSV loads and groups by cohort in order of appearance") {
    const auto cohorts = load_applications(
        csv("L1DRO01,Law,L1,20,false,2017,Malagasy,true,true,5,0,0,0,12\n"
            "# a comment\n"
            "\n"
            "L1MIA05,Computer science,L1,20,false,2017,Malagasy,true,true,5,5,0,2,102\n"
            "L1DRO02,Law,L1,18,false,2017,Malagasy,true,true,10,5,5,3,1237.5\n"),
        InputFormat::Csv);
    REQUIRE(cohorts.size() == 2);
    CHECK(cohorts[0].key().to_string() == "Law/L1");
    CHECK(cohorts[0].size() == 2);
    CHECK(cohorts[0].at("L1DRO02").dd == 1237.5);
    CHECK(cohorts[1].at("L1MIA05").op == 5);
  }

  TEST_CASE("decimal comma inside quotes") {
    const auto c = load_applications(
        csv("L1MIA05,\"Computer science\",L1,20,false,2017,Malagasy,true,true,5,5,0,2,\"102,5\"\n"),
        InputFormat::Csv);
    CHECK(c[0].at("L1MIA05").dd == 102.5);
    CHECK(parse_decimal("0,68") == 0.68);
    CHECK_THROWS_AS(parse_decimal("abc"), DomainError);
  }

  TEST_CASE("parse errors carry the line number") {
    try {
      (void)load_applications(csv("L1MIA05,Computer science,L1,twenty,false,2017,Malagasy,true,true,5,5,0,2,102\n"),
                              InputFormat::Csv);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("age") != std::string::npos);
    }
    CHECK_THROWS_AS(load_applications(csv("a,b,c\n"), InputFormat::Csv), ParseError);
    CHECK_THROWS_AS(load_applications("student_id,mention\n", InputFormat::Csv), ParseError);
    CHECK_THROWS_AS(load_applications("", InputFormat::Csv), ParseError);
    CHECK_THROWS_AS(load_applications(csv("L1,\"open,Computer science,L1\n"), InputFormat::Csv), ParseError);
  }

  TEST_CASE("domain violations name the line and field") {
    CHECK_THROWS_WITH_AS(
        load_applications(csv("L1MIA05,Computer science,L1,20,false,2017,Malagasy,true,true,7,5,0,2,102\n"),
                          InputFormat::Csv),
        "line 2: cp must be one of {5,10}", DomainError);
  }

  TEST_CASE("loading is all or nothing on duplicates") {
    CHECK_THROWS_AS(load_applications(csv("A,Law,L1,20,false,2017,Malagasy,true,true,5,0,0,0,12\n"
                                          "A,Law,L1,20,false,2017,Malagasy,true,true,5,0,0,0,12\n"),
                                      InputFormat::Csv),
                    DuplicateError);
  }

  TEST_CASE("JSON input") {
    const auto doc = R"({"applications": [{"student_id": "X1", "mention": "Law", "level": "L1", "age": 20,
      "employed": false, "bacc_year": 2017, "nationality": "Malagasy", "enrolled": true,
      "passed_exam": true, "cp": 5, "op": 0, "ltp": 0, "ec": 1, "dd_km": 50.5}]})";
    const auto c = load_applications(doc, InputFormat::Json);
    CHECK(c[0].at("X1").dd == 50.5);
    auto extra = json::parse(doc);
    extra["applications"][0]["shoe_size"] = 42;
    CHECK_THROWS_WITH_AS(load_applications(extra.dump(), InputFormat::Json), doctest::Contains("shoe_size"),
                         ParseError);
    auto missing = json::parse(doc);
    missing["applications"][0].erase("cp");
    CHECK_THROWS_AS(load_applications(missing.dump(), InputFormat::Json), ParseError);
    CHECK_THROWS_AS(load_applications("{", InputFormat::Json), ParseError);
  }

  TEST_CASE("CSV writer round trip") {
    const auto cohorts = load_applications_file(testing::data_dir() / "law_l1_applications.csv");
    const auto text = write_applications_csv(cohorts);
    const auto again = load_applications(text, InputFormat::Csv);
    CHECK(again == cohorts);
    CHECK(write_applications_csv(again) == text);
  }

  TEST_CASE("file errors name the file") {
    CHECK_THROWS_WITH_AS(load_applications_file("/nonexistent/apps.csv"), doctest::Contains("/nonexistent/apps.csv"),
                         Error);
    const auto dir = testing::temp_dir("io");
    std::ofstream(dir / "bad.csv") << kHeader << "\nA,Law,L1,x,false,2017,Malagasy,true,true,5,0,0,0,12\n";
    try {
      (void)load_applications_file(dir / "bad.csv");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("bad.csv: line 2") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("fixture cohorts") {
    const auto cs = load_applications_file(testing::data_dir() / "cs_l1_applications.csv");
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].size() == 35);
    const auto law = load_applications_file(testing::data_dir() / "law_l1_applications.csv");
    REQUIRE(law.size() == 1);
    CHECK(law[0].size() == 101);
  }
}

TEST_SUITE("config") {
  TEST_CASE("fixture config equals the defaults apart from capacities") {
    auto c = load_config(testing::data_dir() / "config.json");
    Config d;
    CHECK(c.criteria == d.criteria);
    CHECK(c.eligibility == d.eligibility);
    CHECK(c.methods == d.methods);
    CHECK(c.judgments == d.judgments);
    CHECK(c.allocation.capacity_for({"Law", Level::L1}) == 30);
    CHECK(c.allocation.capacity_for({"Physics", Level::L1}) == 10);
  }

  TEST_CASE("config JSON round trip and hash") {
    Config c;
    c.methods.preference["DD"] = PreferenceFunction::linear(1, 3);
    c.allocation.capacity["Law/L1"] = 12;
    const auto back = parse_config(to_json(c));
    CHECK(back == c);
    CHECK(config_hash(back) == config_hash(c));
    Config other = c;
    other.allocation.capacity["Law/L1"] = 13;
    CHECK(config_hash(other) != config_hash(c));
    CHECK(config_hash(c).size() == 64);
  }

  TEST_CASE("sha256 known answer") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("unknown keys and bad values are rejected with their location") {
    CHECK_THROWS_WITH_AS(parse_config(json::parse(R"({"colour": 1})")), doctest::Contains("colour"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(json::parse(R"({"allocation": {"default_capacity": -1}})")),
                         doctest::Contains("default_capacity"), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"allocation": {"capacity": {"Law/L1": 2.5}}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"eligibility": {"age_bounds": {"L1": {"min": 30, "max": 20}}}})")),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"methods": {"default_preference": {"shape": "gaussian"}}})")),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"methods": {"preference_functions": {"XX": {"shape": "usual"}}}})")),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"criteria": {"DD": {"ref_max": 0}}})")), ConfigError);
  }

  TEST_CASE("judgments accept fractions and flat or nested rows") {
    const auto nested = parse_judgments(json::parse(R"({"criteria": ["A","B","C"], "upper": [[3, "1/5"], [2]]})"));
    const auto flat = parse_judgments(json::parse(R"({"criteria": ["A","B","C"], "upper": [3, 0.2, 2]})"));
    CHECK(nested == flat);
    CHECK(nested.to_matrix().at(2, 0) == doctest::Approx(5));
    CHECK(parse_judgment_value(json("1/3")) == doctest::Approx(1.0 / 3));
    CHECK_THROWS_AS(parse_judgment_value(json("1/0")), DomainError);
    CHECK_THROWS_AS(parse_judgments(json::parse(R"({"criteria": ["A","B"], "upper": [0]})")), ConfigError);
    CHECK(load_judgments(testing::data_dir() / "judgments.json") == default_judgments());
  }
}

TEST_SUITE("bundle") {
  TEST_CASE("save and load round trip") {
    const auto cohort = testing::cs_cohort();
    PipelineOptions opts;
    opts.timestamp = "2018-01-15T09:00:00Z";
    const auto b = run_pipeline(cohort, Config{}, opts);
    const auto text = save_results(b);
    CHECK(load_results(text) == b);
    CHECK(save_results(load_results(text)) == text);
  }

  TEST_CASE("tampering is detected") {
    const auto b = run_pipeline(testing::cs_cohort(), Config{});
    auto doc = json::parse(save_results(b));
    doc["payload"]["counts"]["eligible"] = 25;
    CHECK_THROWS_AS(load_results(doc.dump()), IntegrityError);
    CHECK_THROWS_AS(load_results("not json"), IntegrityError);
    auto fmt = json::parse(save_results(b));
    fmt["format"] = "other/9";
    CHECK_THROWS_AS(load_results(fmt.dump()), IntegrityError);
  }

  TEST_CASE("report export") {
    const auto b = run_pipeline(testing::cs_cohort(), Config{});
    const auto csv = export_report(b, ReportFormat::Csv);
    CHECK(csv.find("# rankings\n") != std::string::npos);
    CHECK(csv.find("# similarity\n") != std::string::npos);
    CHECK(csv.find("# allocation\n") != std::string::npos);
    CHECK(csv.find("AHP,WSM,26,") != std::string::npos);
    const auto j = json::parse(export_report(b, ReportFormat::Json));
    CHECK(j.at("rankings").size() == 4 * 26);
    CHECK(j.at("similarity").size() == 3);
  }

  TEST_CASE("store writes atomically named files") {
    const auto dir = testing::temp_dir("store");
    ResultStore store(dir);
    const auto b = run_pipeline(testing::cs_cohort(), Config{});
    store.save(b);
    CHECK(store.path_for(b.cohort).filename() == "computer-science-l1.bundle.json");
    CHECK(store.load(b.cohort) == b);
    CHECK_FALSE(store.load({"Law", Level::L1}).has_value());
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
    CHECK(files == 1);
    std::filesystem::remove_all(dir);
  }
}
