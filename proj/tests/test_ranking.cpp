#include <doctest.h>

#include <set>

#include "housing/errors.hpp"
#include "housing/ranking.hpp"
#include "support.hpp"

using namespace housing;

namespace {

RankingResult ranked(Method m, std::vector<std::string> ids, std::vector<double> scores) {
  return assign_ranks(ScoreVector{m, std::move(ids), std::move(scores)});
}

std::vector<int> ranks(const RankingResult& r) {
  std::vector<int> out;
  for (const auto& e : r.entries) out.push_back(e.rank);
  return out;
}

}  // namespace

TEST_SUITE("ranking") {
  TEST_CASE("competition ranking with ties listed by id") {
    const auto r = ranked(Method::Wsm, {"d", "b", "c", "a"}, {1, 3, 2, 3});
    CHECK(ranks(r) == std::vector<int>{1, 1, 3, 4});
    CHECK(r.order() == std::vector<std::string>{"a", "b", "c", "d"});
    CHECK(r.rank_of("c") == 3);
    CHECK_THROWS_AS(r.rank_of("zz"), LookupError);
  }

  TEST_CASE("1,2,2,4 pattern") {
    const auto r = ranked(Method::Wsm, {"a", "b", "c", "d"}, {4, 3, 3, 1});
    CHECK(ranks(r) == std::vector<int>{1, 2, 2, 4});
  }

  TEST_CASE("scores within the tie tolerance share a rank") {
    const auto r = ranked(Method::Ahp, {"a", "b", "c"}, {0.3, 0.3 + 1e-15, 0.3 - 1e-6});
    CHECK(ranks(r) == std::vector<int>{1, 1, 3});
  }

  TEST_CASE("bad input") {
    CHECK_THROWS_AS(ranked(Method::Wsm, {}, {}), DomainError);
    CHECK_THROWS_AS(ranked(Method::Wsm, {"a"}, {std::nan("")}), DomainError);
    CHECK_THROWS_AS(ranked(Method::Wsm, {"a", "b"}, {1}), DomainError);
  }

  TEST_CASE("similarity counts exact rank matches") {
    const auto a = ranked(Method::Ahp, {"a", "b", "c", "d"}, {4, 3, 2, 1});
    const auto b = ranked(Method::Wsm, {"a", "b", "c", "d"}, {4, 2, 3, 1});
    const auto s = rank_similarity(a, b);
    CHECK(s.n == 4);
    CHECK(s.matches == 2);
    CHECK(s.percent == 50.0);
    CHECK(s.first == Method::Ahp);
    CHECK(s.second == Method::Wsm);
    CHECK(rank_similarity(a, a).percent == 100.0);
  }

  TEST_CASE("similarity percentages of 26 students") {
    // The similarity definition turns 8, 13 and 4 matches out of 26 into these values.
    auto pct = [](std::size_t matches) {
      std::vector<std::string> ids;
      std::vector<double> s1, s2;
      for (int i = 0; i < 26; ++i) {
        ids.push_back("s" + std::to_string(100 + i));
        s1.push_back(100 - i);
        // past the matches, the first student drops to last and the rest move up one
        s2.push_back(static_cast<std::size_t>(i) == matches ? -1 : 100 - i);
      }
      return rank_similarity(ranked(Method::Ahp, ids, s1), ranked(Method::Wsm, ids, s2)).percent;
    };
    CHECK(pct(8) == doctest::Approx(30.77).epsilon(5e-4));
    CHECK(pct(13) == doctest::Approx(50.0));
    CHECK(pct(4) == doctest::Approx(15.38).epsilon(5e-4));
  }

  TEST_CASE("similarity needs the same students") {
    const auto a = ranked(Method::Ahp, {"a", "b"}, {1, 2});
    const auto b = ranked(Method::Wsm, {"a", "c"}, {1, 2});
    CHECK_THROWS_AS(rank_similarity(a, b), DomainError);
  }

  TEST_CASE("similarity matrix covers each unordered pair once") {
    const std::vector<RankingResult> rs = {ranked(Method::Ahp, {"a", "b"}, {1, 2}),
                                           ranked(Method::Wsm, {"a", "b"}, {2, 1}),
                                           ranked(Method::Promethee, {"a", "b"}, {1, 2})};
    const auto m = similarity_matrix(rs);
    REQUIRE(m.size() == 3);
    CHECK(m[0].first == Method::Ahp);
    CHECK(m[0].second == Method::Wsm);
    CHECK(m[1].second == Method::Promethee);
    CHECK(m[2].first == Method::Wsm);
    CHECK(m[1].percent == 100.0);
  }

  TEST_CASE("aggregate by mean rank") {
    const std::vector<RankingResult> rs = {ranked(Method::Ahp, {"a", "b", "c"}, {2, 3, 1}),
                                           ranked(Method::Wsm, {"a", "b", "c"}, {3, 2, 1}),
                                           ranked(Method::Promethee, {"a", "b", "c"}, {2, 3, 1})};
    const auto agg = aggregate_ranks(rs);
    CHECK(agg.method == Method::Aggregate);
    // means: a 5/3, b 4/3, c 3
    CHECK(agg.order() == std::vector<std::string>{"b", "a", "c"});
    CHECK(agg.entries[0].value == doctest::Approx(4.0 / 3));
    CHECK(ranks(agg) == std::vector<int>{1, 2, 3});
    CHECK_THROWS_AS(aggregate_ranks(std::span(rs.data(), 1)), DomainError);
  }

  TEST_CASE("allocation takes the top of the ranking") {
    const auto r = ranked(Method::Wsm, {"a", "b", "c", "d"}, {4, 3, 2, 1});
    const auto a = allocate(r, 2);
    CHECK(a.allocated == std::vector<std::string>{"a", "b"});
    CHECK(a.waitlist == std::vector<std::string>{"c", "d"});
    CHECK(a.basis == Method::Wsm);
    CHECK(allocate(r, 0).allocated.empty());
    CHECK(allocate(r, 10).waitlist.empty());
  }

  TEST_CASE("tie class straddling the cutoff") {
    const auto r = ranked(Method::Wsm, {"a", "b", "c", "d", "e"}, {9, 5, 5, 5, 1});
    const auto by_id = allocate(r, 2);
    CHECK(by_id.allocated == std::vector<std::string>{"a", "b"});

    AllocationOptions lottery{StraddlePolicy::Lottery, 7};
    const auto l1 = allocate(r, 2, lottery);
    const auto l2 = allocate(r, 2, lottery);
    CHECK(l1 == l2);
    CHECK(l1.allocated[0] == "a");
    CHECK(std::set<std::string>{"b", "c", "d"}.count(l1.allocated[1]) == 1);
    CHECK(l1.waitlist.back() == "e");

    // Some seed must pick someone other than the lowest id.
    bool moved = false;
    for (std::uint64_t seed = 0; seed < 50 && !moved; ++seed) {
      moved = allocate(r, 2, {StraddlePolicy::Lottery, seed}).allocated[1] != "b";
    }
    CHECK(moved);
  }

  TEST_CASE("straddle policy names") {
    CHECK(parse_straddle_policy("lottery") == StraddlePolicy::Lottery);
    CHECK(to_string(StraddlePolicy::StudentId) == "student_id");
    CHECK_THROWS_AS(parse_straddle_policy("coin"), DomainError);
  }

  TEST_CASE("method names") {
    CHECK(parse_method("promethee") == Method::Promethee);
    CHECK(parse_method("AHP") == Method::Ahp);
    CHECK(to_string(Method::Aggregate) == "AGGREGATE");
    CHECK_THROWS_AS(parse_method("topsis"), DomainError);
  }
}
