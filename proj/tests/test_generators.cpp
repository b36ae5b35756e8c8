#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "topk/generators.hpp"
#include "topk/json_io.hpp"
#include "topk/oracle.hpp"

using namespace topk;

namespace {

void check_valid(const Database& db, bool distinct = false) {
  auto problems = validate_database(db.to_draft(), distinct);
  CAPTURE(problems);
  CHECK(problems.empty());
}

std::string top1(const Database& db, const std::string& agg) {
  auto t = builtin_aggregation(agg, db.num_lists());
  return brute_force_topk(db, t, 1).at(0).id;
}

double top1_grade(const Database& db, const std::string& agg) {
  auto t = builtin_aggregation(agg, db.num_lists());
  return *brute_force_topk(db, t, 1).at(0).grade;
}

std::size_t position_of(const Database& db, int list, const std::string& id) {
  auto obj = db.find(id);
  REQUIRE(obj.has_value());
  for (std::size_t p = 0; p < db.size(); ++p)
    if (db.at(list, p) == *obj) return p + 1;
  FAIL("object not in list");
  return 0;
}

}  // namespace

TEST_CASE("anti-correlated family") {
  for (std::size_t n : {1, 3, 10}) {
    auto db = gen_example_6_3(n);
    CHECK(db.size() == 2 * n + 1);
    CHECK(db.num_lists() == 2);
    check_valid(db);
    const std::string winner = std::to_string(n + 1);
    CHECK(top1(db, "min") == winner);
    CHECK(top1_grade(db, "min") == 1.0);
    // the winner sits just below the grade-1 prefix of both lists
    CHECK(position_of(db, 0, winner) == n + 1);
    CHECK(position_of(db, 1, winner) == n + 1);
    // every other object misses one list entirely
    auto t = builtin_aggregation("min", 2);
    for (std::uint32_t o = 0; o < db.size(); ++o) {
      if (db.object(o).id == winner) continue;
      CHECK(std::min(db.grade(o, 0), db.grade(o, 1)) == 0.0);
    }
    CHECK_THROWS_AS(gen_example_6_3(0), PreconditionError);
  }
}

TEST_CASE("approximation-hard family") {
  for (double theta : {1.5, 2.0, 4.0}) {
    for (std::size_t n : {1, 2, 6}) {
      auto db = gen_example_6_8(n, theta);
      CHECK(db.size() == 2 * n + 1);
      check_valid(db, /*distinct=*/true);
      const std::string winner = std::to_string(n + 1);
      CHECK(top1(db, "min") == winner);
      CHECK(top1_grade(db, "min") == 1.0 / theta);
      CHECK(position_of(db, 0, winner) == n + 1);
      CHECK(position_of(db, 1, winner) == n + 1);
      // runner-up value is low enough that a theta-approximation may miss it
      auto two = brute_force_topk(db, builtin_aggregation("min", 2), 2);
      CHECK(*two.at(1).grade <= 1.0 / (2.0 * theta * theta));
    }
  }
  CHECK_THROWS_AS(gen_example_6_8(0, 2.0), PreconditionError);
  CHECK_THROWS_AS(gen_example_6_8(3, 1.0), PreconditionError);
}

TEST_CASE("gated-min family") {
  for (std::size_t N : {2, 5, 20, 101}) {
    auto db = gen_example_7_3(N);
    CHECK(db.size() == N);
    CHECK(db.num_lists() == 3);
    check_valid(db, /*distinct=*/true);
    CHECK(top1(db, "example-7-3") == "R");
    CHECK(top1_grade(db, "example-7-3") == 0.6);
    auto r = db.find("R");
    REQUIRE(r.has_value());
    CHECK(db.grade(*r, 0) == 1.0);
    CHECK(db.grade(*r, 1) == 0.6);
    CHECK(db.grade(*r, 2) == 1.0);
    // every decoy fails the gate in list 3, halving its score below 0.45
    auto t = builtin_aggregation("example-7-3", 3);
    for (std::uint32_t o = 0; o < db.size(); ++o) {
      if (db.object(o).id == "R") continue;
      std::vector<double> g = {db.grade(o, 0), db.grade(o, 1), db.grade(o, 2)};
      CHECK(db.grade(o, 2) < 0.9);
      CHECK(t(g) < 0.45);
    }
  }
  CHECK_THROWS_AS(gen_example_7_3(1), PreconditionError);
}

TEST_CASE("sorted-only depth family") {
  auto db = gen_example_8_3(4, false);
  CHECK(db.size() == 5);
  check_valid(db);
  CHECK(top1(db, "avg") == "R");
  CHECK(top1_grade(db, "avg") == 0.5);

  auto tw = gen_example_8_3(4, true);
  CHECK(tw.size() == 6);
  check_valid(tw);
  CHECK(top1(tw, "avg") == "Rp");
  CHECK(top1_grade(tw, "avg") == 0.625);
  auto two = brute_force_topk(tw, builtin_aggregation("avg", 2), 2);
  CHECK(two.at(1).id == "R");

  CHECK_THROWS_AS(gen_example_8_3(0, false), PreconditionError);
}

TEST_CASE("batched-random-access family") {
  for (std::size_t h : {3, 4, 8}) {
    auto db = gen_figure_5(h);
    CHECK(db.size() == h * h + 2 * h - 2);
    CHECK(db.num_lists() == 3);
    check_valid(db);
    CHECK(top1(db, "sum") == "R");
    CHECK(top1_grade(db, "sum") == 1.5);
    CHECK(position_of(db, 0, "R") == h - 1);
    CHECK(position_of(db, 1, "R") == h - 1);
    CHECK(position_of(db, 2, "R") == h * h);
  }
  CHECK_THROWS_AS(gen_figure_5(2), PreconditionError);
}

TEST_CASE("sorted-depth lower-bound family") {
  auto db = gen_theorem_9_1(2, 2, 4, 10, 64);
  CHECK(db.size() == 64);
  check_valid(db);
  CHECK(top1(db, "min") == "T");
  CHECK(position_of(db, 0, "T") == 2);

  auto wide = gen_theorem_9_1(3, 3, 5, 17, 200);
  check_valid(wide);
  CHECK(top1(wide, "min") == "T");
  CHECK(position_of(wide, 0, "T") == 3);

  CHECK_THROWS_AS(gen_theorem_9_1(0, 2, 4, 10, 64), PreconditionError);
  CHECK_THROWS_AS(gen_theorem_9_1(4, 2, 4, 10, 64), PreconditionError);   // d < k1
  CHECK_THROWS_AS(gen_theorem_9_1(2, 2, 4, 9, 64), PreconditionError);    // k2 >= m*k1+2
  CHECK_THROWS_AS(gen_theorem_9_1(2, 2, 4, 10, 10), PreconditionError);   // N too small
}

TEST_CASE("strict-aggregation lower-bound family") {
  // built for the two-plus-rest-min aggregation: every candidate's first two
  // coordinates sum to one half and only T keeps all later lists at 1/2 or more
  auto db = gen_theorem_9_2(3, 3, 16);
  CHECK(db.size() == 16);
  check_valid(db, /*distinct=*/true);
  CHECK(top1(db, "eq5") == "T");
  CHECK(top1_grade(db, "eq5") == 0.5);
  CHECK(position_of(db, 2, "T") > 4);  // buried below the first N/4 positions

  auto big = gen_theorem_9_2(5, 4, 32);
  check_valid(big, /*distinct=*/true);
  CHECK(top1(big, "eq5") == "T");
  CHECK(top1_grade(big, "eq5") == 0.5);

  CHECK_THROWS_AS(gen_theorem_9_2(3, 2, 16), PreconditionError);  // m >= 3
  CHECK_THROWS_AS(gen_theorem_9_2(3, 3, 15), PreconditionError);  // N % 4
  CHECK_THROWS_AS(gen_theorem_9_2(3, 3, 12), PreconditionError);  // N >= 4d+4
}

TEST_CASE("random-access lower-bound family") {
  auto db = gen_theorem_9_3(2, 3);
  CHECK(db.size() == 1 + 3 * (2 * 3 - 1));
  check_valid(db);
  CHECK(top1(db, "min") == "T");
  CHECK(position_of(db, 0, "T") == 2);
  for (int l = 1; l < 3; ++l) CHECK(position_of(db, l, "T") == 2 * 3);

  CHECK_THROWS_AS(gen_theorem_9_3(0, 3), PreconditionError);
  CHECK_THROWS_AS(gen_theorem_9_3(2, 1), PreconditionError);
}

TEST_CASE("no-random-access lower-bound family") {
  auto db = gen_theorem_9_5(5, 3);
  check_valid(db);
  CHECK(top1(db, "min") == "T1");
  CHECK(top1_grade(db, "min") == 1.0);
  CHECK(position_of(db, 0, "T1") == 5);

  CHECK_THROWS_AS(gen_theorem_9_5(4, 3), PreconditionError);  // d >= 2m-1
  CHECK_NOTHROW(gen_theorem_9_5(5, 3));
  CHECK_THROWS_AS(gen_theorem_9_5(5, 1), PreconditionError);
}

TEST_CASE("random family draws from a fixed lattice") {
  auto db = gen_random(100, 3, 42, false);
  CHECK(db.size() == 100);
  CHECK(db.num_lists() == 3);
  check_valid(db);
  for (std::uint32_t o = 0; o < db.size(); ++o)
    for (int l = 0; l < 3; ++l) {
      double g = db.grade(o, l);
      CHECK(g >= 0.0);
      CHECK(g <= 1.0);
      CHECK(g * 16.0 == std::floor(g * 16.0));
    }
  CHECK_THROWS_AS(gen_random(0, 2, 1, false), PreconditionError);
  CHECK_THROWS_AS(gen_random(5, 0, 1, false), PreconditionError);
}

TEST_CASE("random family with distinct grades per list") {
  auto db = gen_random(64, 3, 9, true);
  check_valid(db, /*distinct=*/true);
  // sorted order is strict, no plateaus
  for (int l = 0; l < 3; ++l)
    for (std::size_t p = 0; p + 1 < db.size(); ++p)
      CHECK(db.grade(db.at(l, p), l) > db.grade(db.at(l, p + 1), l));
}

TEST_CASE("generation is deterministic per spec") {
  GeneratorSpec spec{"random", {{"N", 40}, {"m", 3}, {"seed", 7}}};
  auto a = generate(spec);
  auto b = generate(spec);
  CHECK(a == b);
  CHECK(database_digest(a) == database_digest(b));

  GeneratorSpec other{"random", {{"N", 40}, {"m", 3}, {"seed", 8}}};
  CHECK_FALSE(database_digest(a) == database_digest(generate(other)));

  GeneratorSpec fam{"example-6-3", {{"n", 3}}};
  CHECK(generate(fam) == gen_example_6_3(3));
}

TEST_CASE("spec strings are canonical") {
  GeneratorSpec spec{"example-6-8", {{"theta", 2.0}, {"n", 3}}};
  // map ordering makes the rendering independent of insertion order
  CHECK(spec.to_string() == "family=example-6-8;n=3;theta=2");
  GeneratorSpec spec2{"example-6-8", {{"n", 3}, {"theta", 2.0}}};
  CHECK(spec.to_string() == spec2.to_string());
}

TEST_CASE("dispatcher checks family and required parameters") {
  CHECK_THROWS_AS(generate({"no-such-family", {}}), PreconditionError);
  CHECK_THROWS_AS(generate({"example-6-3", {}}), PreconditionError);
  CHECK_THROWS_AS(generate({"thm-9-1", {{"d", 2}, {"m", 2}}}), PreconditionError);
  CHECK_NOTHROW(generate({"random", {{"N", 5}, {"m", 2}}}));  // seed defaults to 0
  CHECK(generator_families().size() == 10);
}

TEST_CASE("every family round-trips through json") {
  std::vector<GeneratorSpec> specs = {
      {"example-6-3", {{"n", 2}}},
      {"example-6-8", {{"n", 2}, {"theta", 2.0}}},
      {"example-7-3", {{"N", 6}}},
      {"example-8-3", {{"n", 3}}},
      {"figure-5", {{"h", 4}}},
      {"thm-9-1", {{"d", 2}, {"m", 2}, {"k1", 4}, {"k2", 10}, {"N", 64}}},
      {"thm-9-2", {{"d", 3}, {"m", 3}, {"N", 16}}},
      {"thm-9-3", {{"d", 2}, {"m", 3}}},
      {"thm-9-5", {{"d", 5}, {"m", 3}}},
      {"random", {{"N", 20}, {"m", 2}, {"seed", 5}}},
  };
  for (const auto& spec : specs) {
    CAPTURE(spec.family);
    auto db = generate(spec);
    auto back = load_database_string(database_to_json(db).dump());
    CHECK(back == db);
    CHECK(database_digest(back) == database_digest(db));
  }
}
