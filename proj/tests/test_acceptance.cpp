#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "topk/algorithms.hpp"
#include "topk/generators.hpp"
#include "topk/oracle.hpp"

using namespace topk;

// Each criterion prints exactly one PASS/FAIL line so a log skim tells the
// whole story; the assertion after the print keeps ctest honest.

namespace {

const CostModel kUnit{1.0, 1.0};

void report(int idx, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s (%s)\n", idx, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  REQUIRE(ok);
}

double true_grade(const Database& db, const AggregationFunction& t, const ObjectId& id) {
  return t(db.object(db.index_of(id)).grades);
}

std::vector<double> result_grades(const Database& db, const AggregationFunction& t,
                                  const RunReport& r) {
  std::vector<double> out;
  for (const auto& e : r.result) out.push_back(true_grade(db, t, e.id));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> ids(const RunReport& r) {
  std::vector<std::string> out;
  for (const auto& e : r.result) out.push_back(e.id);
  return out;
}

// Shared sweep over the seeded random suite; several criteria read from it.
struct SuiteOutcome {
  std::size_t combos = 0;
  std::size_t grade_mismatches = 0;
  std::size_t depth_violations = 0;   // ta deeper than fa
  std::size_t ca_nra_mismatches = 0;  // transcripts differ at c_R/c_S = N
  double elapsed_seconds = 0.0;
};

const SuiteOutcome& random_suite() {
  static const SuiteOutcome outcome = [] {
    SuiteOutcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::string> agg_names = {"min", "max", "avg", "median", "product"};
    const int k_choices[3] = {1, 3, 10};
    std::mt19937_64 size_rng(20240817);
    for (int c = 0; c < 1000; ++c) {
      const std::size_t N = 1 + size_rng() % 200;
      const int m = 2 + c % 3;
      const int k = std::min<int>(k_choices[c % 3], static_cast<int>(N));
      const Database db = gen_random(N, m, 5000 + static_cast<std::uint64_t>(c), false);
      AlgorithmOptions quiet;
      quiet.record_transcript = false;
      AlgorithmOptions quiet_z = quiet;
      for (int i = 0; i < m; ++i) quiet_z.z_lists.push_back(i);
      for (const auto& agg_name : agg_names) {
        const auto t = builtin_aggregation(agg_name, m);
        auto want = brute_force_topk(db, t, static_cast<std::size_t>(k));
        std::vector<double> want_grades;
        for (const auto& e : want) want_grades.push_back(*e.grade);
        std::sort(want_grades.begin(), want_grades.end());

        const RunReport runs[] = {
            run_naive(db, t, k, kUnit, quiet),
            run_fa(db, t, k, kUnit, quiet),
            run_ta(db, t, k, kUnit, quiet),
            run_ta_theta(db, t, k, kUnit, 1.0, quiet),
            run_ta_z(db, t, k, kUnit, quiet_z.z_lists, quiet),
            run_nra(db, t, k, kUnit, quiet),
            run_ca(db, t, k, kUnit, quiet),
            run_intermittent(db, t, k, kUnit, quiet),
        };
        for (const auto& r : runs)
          if (result_grades(db, t, r) != want_grades) ++o.grade_mismatches;
        if (runs[2].rounds > runs[1].rounds) ++o.depth_violations;

        const CostModel flat{1.0, static_cast<double>(N)};
        auto ca = run_ca(db, t, k, flat);
        auto nra = run_nra(db, t, k, flat);
        if (ca.transcript != nra.transcript || ids(ca) != ids(nra)) ++o.ca_nra_mismatches;
        ++o.combos;
      }
    }
    o.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count();
    return o;
  }();
  return outcome;
}

char buf_storage[256];

std::string fmt(const char* pattern, ...) {
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf_storage, sizeof(buf_storage), pattern, args);
  va_end(args);
  return buf_storage;
}

}  // namespace

TEST_CASE("criterion 1: all runners match the brute-force oracle") {
  const auto& s = random_suite();
  report(1, s.combos == 5000 && s.grade_mismatches == 0 && s.elapsed_seconds < 120.0,
         fmt("%zu database/aggregation combos, %zu grade mismatches, %.1f s",
             s.combos, s.grade_mismatches, s.elapsed_seconds));
}

TEST_CASE("criterion 2: ta never halts deeper than fa") {
  const auto& s = random_suite();
  std::size_t family_violations = 0;
  struct FamilyCase {
    Database db;
    std::string agg;
  };
  const FamilyCase cases[] = {
      {gen_example_6_3(3), "min"},
      {gen_example_6_8(2, 2.0), "min"},
      {gen_example_7_3(5), "example-7-3"},
      {gen_example_8_3(4, false), "avg"},
      {gen_example_8_3(4, true), "avg"},
      {gen_figure_5(4), "sum"},
      {gen_theorem_9_1(2, 2, 4, 10, 64), "min"},
      {gen_theorem_9_2(3, 3, 16), "eq5"},
      {gen_theorem_9_3(2, 3), "min"},
      {gen_theorem_9_5(5, 3), "min"},
  };
  for (const auto& fc : cases) {
    auto t = builtin_aggregation(fc.agg, fc.db.num_lists());
    if (run_ta(fc.db, t, 1, kUnit).rounds > run_fa(fc.db, t, 1, kUnit).rounds)
      ++family_violations;
  }
  report(2, s.depth_violations == 0 && family_violations == 0,
         fmt("%zu suite combos and 10 generator families, %zu violations",
             s.combos, s.depth_violations + family_violations));
}

TEST_CASE("criterion 3: ta buffers stay bounded at scale") {
  const auto db = gen_random(100000, 3, 31337, false);
  std::size_t worst = 0;
  bool ok = true;
  for (int k : {1, 10, 25}) {
    for (const char* agg : {"min", "avg"}) {
      TaProbe probe;
      AlgorithmOptions opt;
      opt.record_transcript = false;
      opt.probe = &probe;
      auto r = run_ta(db, builtin_aggregation(agg, 3), k, kUnit, opt);
      (void)r;
      worst = std::max(worst, probe.max_buffer);
      // buffer plus bottoms plus one round of sightings, with constant 8
      ok = ok && probe.max_buffer + 2 * 3 <= static_cast<std::size_t>(k) + 2 * 3 + 8;
    }
  }
  report(3, ok, fmt("N=100000 m=3, largest buffer %zu slots, bound k+2m+8 holds", worst));
}

TEST_CASE("criterion 4: anti-correlated family scales the optimality ratio") {
  bool depths_ok = true;
  bool certs_ok = true;
  double sum_n = 0, sum_r = 0, sum_nn = 0, sum_nr = 0;
  const int count = 50;
  CertificateSearchOptions wild;
  wild.policy = CertificatePolicy::kWildGuess;
  for (int n = 1; n <= count; ++n) {
    auto db = gen_example_6_3(static_cast<std::size_t>(n));
    auto t = builtin_aggregation("min", 2);
    auto ta = run_ta(db, t, 1, kUnit);
    auto fa = run_fa(db, t, 1, kUnit);
    depths_ok = depths_ok && ta.rounds == static_cast<std::size_t>(n) + 1 &&
                fa.rounds == static_cast<std::size_t>(n) + 1;
    auto cert = min_certificate_cost(db, t, 1, kUnit, wild);
    certs_ok = certs_ok && cert.certificate && cert.certificate->cost == 2.0;
    const double ratio = optimality_ratio(ta.cost(), cert.certificate->cost);
    sum_n += n;
    sum_r += ratio;
    sum_nn += static_cast<double>(n) * n;
    sum_nr += n * ratio;
  }
  const double slope =
      (count * sum_nr - sum_n * sum_r) / (count * sum_nn - sum_n * sum_n);
  report(4, depths_ok && certs_ok && slope > 0.5,
         fmt("n=1..50 all at depth n+1, wild certificates cost 2, ratio slope %.2f", slope));
}

TEST_CASE("criterion 5: approximate ta finds the planted winner") {
  bool ok = true;
  std::size_t verified = 0;
  for (int n = 1; n <= 20 && ok; ++n) {
    for (double theta : {1.5, 2.0, 4.0}) {
      auto db = gen_example_6_8(static_cast<std::size_t>(n), theta);
      auto t = builtin_aggregation("min", 2);
      const std::string winner = std::to_string(n + 1);
      auto r = run_ta_theta(db, t, 1, kUnit, theta);
      ok = ok && ids(r) == std::vector<std::string>{winner} &&
           r.rounds == static_cast<std::size_t>(n) + 1;
      ok = ok && verify_theta_approx(db, t, 1, {winner}, theta).ok;
      for (std::uint32_t obj = 0; obj < db.size(); ++obj) {
        const auto id = db.object(obj).id;
        if (id == winner) continue;
        ok = ok && !verify_theta_approx(db, t, 1, {id}, theta).ok;
        ++verified;
      }
    }
  }
  report(5, ok, fmt("60 (n,theta) pairs, %zu rejected impostor singletons", verified));
}

TEST_CASE("criterion 6: restricted sorted access ends by exhaustion yet a 3-access proof exists") {
  bool ok = true;
  for (std::size_t N : {5, 20, 100}) {
    auto db = gen_example_7_3(N);
    auto t = builtin_aggregation("example-7-3", 3);
    auto r = run_ta_z(db, t, 1, kUnit, {0});
    ok = ok && r.halted_by_exhaustion && ids(r) == std::vector<std::string>{"R"} &&
         r.result[0].grade.has_value() && *r.result[0].grade == 0.6;

    CostedAccessor acc(db, kUnit);
    auto e = acc.sorted_access(0);
    ok = ok && db.object(e->object).id == "R";
    acc.random_access(e->object, 1);
    acc.random_access(e->object, 2);
    ok = ok && acc.cost() == kUnit.sorted_cost + 2.0 * kUnit.random_cost;
    auto forced = determined(db, t, 1, acc.transcript(), DeterminedOptions{true});
    ok = ok && forced.has_value() && *forced == std::vector<std::string>{"R"};
  }
  report(6, ok, "N in {5,20,100}: exhaustion runs return (R, 0.6); cS+2cR transcript proves it");
}

TEST_CASE("criterion 7: sorted-only runs show the k-dependent depth reversal") {
  bool ok = true;
  auto base = gen_example_8_3(4, false);
  auto t = builtin_aggregation("avg", 2);
  auto r = run_nra(base, t, 1, kUnit);
  ok = ok && r.rounds == 2 && r.stats.sorted_count == 4 && r.stats.random_count == 0 &&
       ids(r) == std::vector<std::string>{"R"};
  std::size_t d2 = 0, d1 = 0;
  for (std::size_t n : {4, 10}) {
    auto tw = gen_example_8_3(n, true);
    d2 = run_nra(tw, t, 2, kUnit).rounds;
    d1 = run_nra(tw, t, 1, kUnit).rounds;
    ok = ok && d2 < d1;
  }
  report(7, ok, fmt("base run: depth 2, no random access; two-winner depth %zu < %zu", d2, d1));
}

TEST_CASE("criterion 8: one planned random access beats batched fetching") {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  double worst_ratio_margin = 1e9;
  for (std::size_t h : {4, 8, 16, 32}) {
    auto db = gen_figure_5(h);
    auto t = builtin_aggregation("sum", 3);
    CostModel model{1.0, static_cast<double>(h)};
    auto ca = run_ca(db, t, 1, model);
    auto inter = run_intermittent(db, t, 1, model);
    ok = ok && ca.rounds == h && ca.stats.random_count == 1;
    ok = ok && inter.stats.random_count >= 6 * (h - 2);
    const double ratio = inter.cost() / ca.cost();
    const double bound = 1.4 * static_cast<double>(h - 2);
    worst_ratio_margin = std::min(worst_ratio_margin, ratio - bound);
    ok = ok && ratio >= bound;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                          .count();
  ok = ok && secs < 10.0;
  report(8, ok, fmt("h in {4,8,16,32}: single random access, ratio clears 1.4(h-2) by %.2f, %.2f s",
                    worst_ratio_margin, secs));
}

TEST_CASE("criterion 9: measured ratios respect the instance-optimality constants") {
  bool ok = true;
  std::size_t instances = 0, checks = 0;
  std::mt19937_64 rng(424242);
  auto lattice_db = [&](int m, std::size_t N) {
    DatabaseDraft d;
    d.m = m;
    for (std::size_t i = 0; i < N; ++i) {
      DbObject o;
      o.id = "o" + std::to_string(i);
      for (int l = 0; l < m; ++l)
        o.grades.push_back(static_cast<double>(rng() % 5) / 4.0);
      d.objects.push_back(std::move(o));
    }
    return Database::from_draft(std::move(d));
  };
  CertificateSearchOptions no_wild;
  CertificateSearchOptions sorted_only;
  sorted_only.policy = CertificatePolicy::kSortedOnly;
  for (int i = 0; i < 220 && ok; ++i) {
    const int m = i < 120 ? 2 : 3;
    const std::size_t N = m == 2 ? 4 + i % 3 : 4 + i % 2;
    auto db = lattice_db(m, N);
    auto t = builtin_aggregation("min", m);
    ++instances;
    for (int k = 1; k <= 2; ++k) {
      auto ta = run_ta(db, t, k, kUnit);
      auto nw = min_certificate_cost(db, t, static_cast<std::size_t>(k), kUnit, no_wild);
      ok = ok && nw.certificate.has_value();
      if (!ok) break;
      const double cert = nw.certificate->cost;
      const double ta_bound = m + m * (m - 1) * 1.0 + k * m * (1.0 + (m - 1) * 1.0) / cert;
      ok = ok && optimality_ratio(ta.cost(), cert) <= ta_bound;

      auto nra = run_nra(db, t, k, kUnit);
      auto so = min_certificate_cost(db, t, static_cast<std::size_t>(k), kUnit, sorted_only);
      ok = ok && so.certificate.has_value();
      if (!ok) break;
      const double so_cost = so.certificate->cost;
      const double nra_bound = m + k * m * m * 1.0 / so_cost;
      ok = ok && optimality_ratio(nra.cost(), so_cost) <= nra_bound;
      checks += 2;
    }
  }
  report(9, ok, fmt("%zu lattice databases, %zu ratio checks within bounds", instances, checks));
}

TEST_CASE("criterion 10: expensive random access reduces ca to nra") {
  const auto& s = random_suite();
  report(10, s.ca_nra_mismatches == 0,
         fmt("%zu combos at c_R/c_S = N, %zu transcript mismatches", s.combos,
             s.ca_nra_mismatches));
}

TEST_CASE("descriptive: fa cost growth on independent random databases") {
  // documentation only, no bound asserted
  std::string curve;
  for (std::size_t N : {64, 128, 256, 512, 1024}) {
    auto db = gen_random(N, 3, 9000 + N, true);
    AlgorithmOptions quiet;
    quiet.record_transcript = false;
    auto r = run_fa(db, builtin_aggregation("min", 3), 1, kUnit, quiet);
    curve += fmt(" N=%zu:%.0f", N, r.cost());
    CHECK(r.cost() > 0.0);
  }
  std::printf("descriptive : fa cost curve%s\n", curve.c_str());
  std::fflush(stdout);
}
