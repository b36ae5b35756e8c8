#pragma once

// Deterministic database constructions: the worked adversarial families plus
// a seeded random generator. Every generator returns a fully valid database
// with explicit list orders; unconstrained filler grades are strictly
// decreasing sequences inside whatever interval the construction leaves free.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "topk/core.hpp"

namespace topk {

namespace detail {

inline std::string pad_number(std::size_t value, std::size_t width) {
  std::string s = std::to_string(value);
  while (s.size() < width) s.insert(s.begin(), '0');
  return s;
}

inline std::size_t digits(std::size_t v) { return std::to_string(v).size(); }

}  // namespace detail

// Two anti-correlated 0/1 lists: objects "1".."2n+1", list 1 in id order,
// list 2 reversed. Object n+1 is the only one graded 1 in both lists; it
// surfaces exactly at depth n+1 of either list.
inline Database gen_example_6_3(std::size_t n) {
  if (n < 1) throw PreconditionError("example-6-3 requires n >= 1");
  const std::size_t N = 2 * n + 1;
  DatabaseDraft d;
  d.m = 2;
  for (std::size_t i = 1; i <= N; ++i) {
    DbObject o;
    o.id = std::to_string(i);
    o.grades = {i <= n + 1 ? 1.0 : 0.0, i >= n + 1 ? 1.0 : 0.0};
    d.objects.push_back(std::move(o));
  }
  std::vector<ObjectId> l1, l2;
  for (std::size_t i = 1; i <= N; ++i) l1.push_back(std::to_string(i));
  for (std::size_t i = N; i >= 1; --i) l2.push_back(std::to_string(i));
  d.list_orders = {{l1, l2}};
  return Database::from_draft(std::move(d));
}

// Distinct-grade variant with a unique winner graded 1/theta in both lists at
// depth n+1; every other object's overall min is at most 1/(2 theta^2).
inline Database gen_example_6_8(std::size_t n, double theta) {
  if (n < 1) throw PreconditionError("example-6-8 requires n >= 1");
  if (!(theta > 1.0)) throw PreconditionError("example-6-8 requires theta > 1");
  const std::size_t N = 2 * n + 1;
  const double inv = 1.0 / theta;
  const double alpha = 1.0 / (2.0 * theta * theta);
  // Grade at 1-based position p, identical profile in both lists.
  auto grade_at = [&](std::size_t p) {
    if (p <= n)
      return inv + (1.0 - inv) * static_cast<double>(n + 1 - p) / static_cast<double>(n + 1);
    if (p == n + 1) return inv;
    if (p == n + 2) return alpha;
    return alpha * static_cast<double>(2 * n + 2 - p) / static_cast<double>(n);
  };
  DatabaseDraft d;
  d.m = 2;
  d.objects.resize(N);
  for (std::size_t i = 1; i <= N; ++i) {
    d.objects[i - 1].id = std::to_string(i);
    d.objects[i - 1].grades = {0.0, 0.0};
  }
  std::vector<ObjectId> l1, l2;
  for (std::size_t p = 1; p <= N; ++p) {
    std::size_t obj1 = p;               // list 1 in id order
    std::size_t obj2 = 2 * n + 2 - p;   // list 2 reversed
    d.objects[obj1 - 1].grades[0] = grade_at(p);
    d.objects[obj2 - 1].grades[1] = grade_at(p);
    l1.push_back(std::to_string(obj1));
    l2.push_back(std::to_string(obj2));
  }
  d.list_orders = {{l1, l2}};
  return Database::from_draft(std::move(d));
}

// Three lists with the distinctness property. "R" tops lists 1 and 3 with
// grade 1, carries 0.6 in list 2, and every list-1 grade stays >= 0.7, so a
// gated-min run restricted to list 1 can never meet its own threshold.
inline Database gen_example_7_3(std::size_t N) {
  if (N < 2) throw PreconditionError("example-7-3 requires N >= 2");
  DatabaseDraft d;
  d.m = 3;
  const std::size_t width = detail::digits(N);
  std::vector<ObjectId> others;
  d.objects.push_back({"R", {1.0, 0.6, 1.0}});
  for (std::size_t i = 2; i <= N; ++i) {
    others.push_back("o" + detail::pad_number(i, width));
    d.objects.push_back({others.back(), {0.0, 0.0, 0.0}});
  }
  const std::size_t above = (N - 1 + 1) / 2;  // objects placed above R in list 2
  std::vector<ObjectId> l1{"R"}, l2, l3{"R"};
  for (std::size_t j = 0; j < others.size(); ++j) {
    auto& grades = d.objects[j + 1].grades;
    // list 1: strictly decreasing from just under 1.0 down to exactly 0.7
    grades[0] = 0.7 + 0.3 * static_cast<double>(N - (j + 2)) / static_cast<double>(N - 1);
    l1.push_back(others[j]);
    // list 3: strictly decreasing below 1.0
    grades[2] = 0.9 * static_cast<double>(N - (j + 2) + 1) / static_cast<double>(N);
    l3.push_back(others[j]);
  }
  for (std::size_t j = 0; j < above; ++j) {
    d.objects[j + 1].grades[1] =
        0.6 + 0.35 * static_cast<double>(above - j) / static_cast<double>(above + 1);
    l2.push_back(others[j]);
  }
  l2.push_back("R");
  const std::size_t below = others.size() - above;
  for (std::size_t j = 0; j < below; ++j) {
    d.objects[above + j + 1].grades[1] =
        0.6 * static_cast<double>(below - j) / static_cast<double>(below + 1);
    l2.push_back(others[above + j]);
  }
  d.list_orders = {{l1, l2, l3}};
  return Database::from_draft(std::move(d));
}

// Averaging example: "R" = (1, 0) against n copies of (1/3, 1/3). The
// two-winners variant adds "Rp" = (1, 1/4), making the top-2 query easier
// than the top-1 query for a sorted-only run.
inline Database gen_example_8_3(std::size_t n, bool two_winners) {
  if (n < 1) throw PreconditionError("example-8-3 requires n >= 1");
  DatabaseDraft d;
  d.m = 2;
  const std::size_t width = detail::digits(n);
  d.objects.push_back({"R", {1.0, 0.0}});
  if (two_winners) d.objects.push_back({"Rp", {1.0, 0.25}});
  std::vector<ObjectId> fillers;
  for (std::size_t i = 1; i <= n; ++i) {
    fillers.push_back("a" + detail::pad_number(i, width));
    d.objects.push_back({fillers.back(), {1.0 / 3.0, 1.0 / 3.0}});
  }
  std::vector<ObjectId> l1{"R"}, l2;
  if (two_winners) l1.push_back("Rp");
  for (const auto& id : fillers) l1.push_back(id);
  for (const auto& id : fillers) l2.push_back(id);
  if (two_winners) l2.push_back("Rp");
  l2.push_back("R");
  d.list_orders = {{l1, l2}};
  return Database::from_draft(std::move(d));
}

// Summation instance contrasting batched against eager random access. "R"
// sits at position h-1 of lists 1 and 2 and position h^2 of list 3, all with
// grade 1/2; its total 1.5 beats every decoy (at most 1.375).
inline Database gen_figure_5(std::size_t h) {
  if (h < 3) throw PreconditionError("figure-5 requires h >= 3");
  DatabaseDraft d;
  d.m = 3;
  const std::size_t n_top = h - 2;           // unmatched toppers of lists 1 and 2
  const std::size_t n_l3 = h * h - 1;        // toppers of list 3
  const std::size_t N = 1 + 2 * n_top + n_l3 + 2;
  const std::size_t w_top = detail::digits(n_top);
  const std::size_t w_l3 = detail::digits(n_l3);

  std::vector<ObjectId> a_ids, b_ids, c_ids;
  d.objects.push_back({"R", {0.5, 0.5, 0.5}});
  for (std::size_t i = 1; i <= n_top; ++i) {
    a_ids.push_back("a" + detail::pad_number(i, w_top));
    d.objects.push_back({a_ids.back(), {0.0, 0.0, 0.0}});
  }
  for (std::size_t i = 1; i <= n_top; ++i) {
    b_ids.push_back("b" + detail::pad_number(i, w_top));
    d.objects.push_back({b_ids.back(), {0.0, 0.0, 0.0}});
  }
  for (std::size_t j = 1; j <= n_l3; ++j) {
    c_ids.push_back("c" + detail::pad_number(j, w_l3));
    d.objects.push_back({c_ids.back(), {0.0, 0.0, 0.0}});
  }
  d.objects.push_back({"f1", {0.125, 0.0, 0.0}});
  d.objects.push_back({"f2", {0.0, 0.125, 0.0}});

  auto find_obj = [&](const ObjectId& id) -> DbObject& {
    for (auto& o : d.objects)
      if (o.id == id) return o;
    throw PreconditionError("internal generator error");
  };
  const double hh = static_cast<double>(h);
  for (std::size_t i = 1; i <= n_top; ++i) {
    double g = 0.5 + static_cast<double>(h - 1 - i) / (8.0 * hh);
    find_obj(a_ids[i - 1]).grades[0] = g;
    find_obj(b_ids[i - 1]).grades[1] = g;
  }
  for (std::size_t j = 1; j <= n_l3; ++j)
    find_obj(c_ids[j - 1]).grades[2] =
        0.5 + static_cast<double>(h * h - j) / (8.0 * hh * hh);

  // Anchored prefixes, then every remaining object in id order with strictly
  // decreasing grades below the list's smallest anchor.
  auto build_list = [&](int list, std::vector<ObjectId> prefix, double ceiling) {
    std::set<ObjectId> used(prefix.begin(), prefix.end());
    std::vector<ObjectId> rest;
    for (const auto& o : d.objects)
      if (!used.count(o.id)) rest.push_back(o.id);
    const double K = static_cast<double>(rest.size());
    for (std::size_t j = 0; j < rest.size(); ++j) {
      find_obj(rest[j]).grades[static_cast<std::size_t>(list)] =
          ceiling * (K - static_cast<double>(j)) / (K + 1.0);
      prefix.push_back(rest[j]);
    }
    return prefix;
  };
  std::vector<ObjectId> l1_prefix = a_ids;
  l1_prefix.push_back("R");
  l1_prefix.push_back("f1");
  std::vector<ObjectId> l2_prefix = b_ids;
  l2_prefix.push_back("R");
  l2_prefix.push_back("f2");
  std::vector<ObjectId> l3_prefix = c_ids;
  l3_prefix.push_back("R");
  auto l1 = build_list(0, std::move(l1_prefix), 0.125);
  auto l2 = build_list(1, std::move(l2_prefix), 0.125);
  auto l3 = build_list(2, std::move(l3_prefix), 0.5);
  if (l1.size() != N) throw PreconditionError("internal generator error");
  d.list_orders = {{l1, l2, l3}};
  return Database::from_draft(std::move(d));
}

// 0/1 family: every list's top k2 grades are 1, the unique all-ones object
// "T" hides at position d of list 1, and every other top-k1 object is zeroed
// in exactly one other list. Requires room in the (k1, k2] band to host every
// displaced object.
inline Database gen_theorem_9_1(std::size_t d, int m, std::size_t k1, std::size_t k2,
                                std::size_t N) {
  if (m < 2) throw PreconditionError("thm-9-1 requires m >= 2");
  if (!(d >= 1 && d < k1 && k1 < k2))
    throw PreconditionError("thm-9-1 requires 1 <= d < k1 < k2");
  if (k2 < static_cast<std::size_t>(m) * k1 + 2)
    throw PreconditionError("thm-9-1 requires k2 >= m*k1 + 2");
  const std::size_t mm = static_cast<std::size_t>(m);
  const std::size_t wk = detail::digits(k1);

  struct Placement {
    ObjectId id;
    int top_list = -1;       // list whose top k1 contains it, -1 = none
    std::size_t top_pos = 0; // 1-based
    int zero_list = -1;      // the single list graded 0, -1 = none (T)
  };
  std::vector<Placement> named;
  named.push_back({"T", 0, d, -1});
  for (int i = 0; i < m; ++i) {
    for (std::size_t p = 1; p <= k1; ++p) {
      if (i == 0 && p == d) continue;
      named.push_back({"h" + std::to_string(i + 1) + "_" + detail::pad_number(p, wk), i, p,
                       (i + 1) % m});
    }
  }
  // Band occupants per list: objects graded 1 there but topping another list.
  std::vector<std::vector<ObjectId>> band(mm);
  for (const auto& pl : named)
    for (int l = 0; l < m; ++l)
      if (l != pl.top_list && l != pl.zero_list) band[static_cast<std::size_t>(l)].push_back(pl.id);
  std::size_t extra = 0;
  std::vector<std::vector<ObjectId>> band_fill(mm);
  for (int l = 0; l < m; ++l) {
    auto& bl = band[static_cast<std::size_t>(l)];
    if (bl.size() > k2 - k1)
      throw PreconditionError("thm-9-1 band overflow; raise k2");
    while (bl.size() < k2 - k1) {
      ObjectId id = "g" + std::to_string(l + 1) + "_" + detail::pad_number(++extra, 6);
      bl.push_back(id);
      band_fill[static_cast<std::size_t>(l)].push_back(id);
    }
  }
  std::size_t total = named.size();
  for (const auto& bf : band_fill) total += bf.size();
  if (N < total)
    throw PreconditionError("thm-9-1 requires N >= " + std::to_string(total) +
                            " for these parameters");

  DatabaseDraft draft;
  draft.m = m;
  auto zero_grades = std::vector<double>(mm, 0.0);
  for (const auto& pl : named) {
    std::vector<double> g(mm, 1.0);
    if (pl.zero_list >= 0) g[static_cast<std::size_t>(pl.zero_list)] = 0.0;
    draft.objects.push_back({pl.id, g});
  }
  for (int l = 0; l < m; ++l)
    for (const auto& id : band_fill[static_cast<std::size_t>(l)]) {
      std::vector<double> g = zero_grades;
      g[static_cast<std::size_t>(l)] = 1.0;
      draft.objects.push_back({id, g});
    }
  for (std::size_t z = total; z < N; ++z)
    draft.objects.push_back({"z" + detail::pad_number(z - total + 1, 6), zero_grades});

  std::vector<std::vector<ObjectId>> orders(mm);
  for (int l = 0; l < m; ++l) {
    auto& ord = orders[static_cast<std::size_t>(l)];
    std::vector<ObjectId> tops(k1);
    for (const auto& pl : named)
      if (pl.top_list == l) tops[pl.top_pos - 1] = pl.id;
    for (const auto& id : tops) ord.push_back(id);
    for (const auto& id : band[static_cast<std::size_t>(l)]) ord.push_back(id);
    std::set<ObjectId> placed(ord.begin(), ord.end());
    std::vector<ObjectId> rest;
    for (const auto& o : draft.objects)
      if (!placed.count(o.id)) rest.push_back(o.id);
    std::sort(rest.begin(), rest.end());
    for (const auto& id : rest) ord.push_back(id);
  }
  draft.list_orders = std::move(orders);
  return Database::from_draft(std::move(draft));
}

// Distinct-grade family for min(x1+x2, x3..xm): d paired candidates whose
// first two grades sum to 1/2, with the winner "T" graded exactly 1/2 in
// every later list and each decoy dropped below 1/2 in one of them.
inline Database gen_theorem_9_2(std::size_t d, int m, std::size_t N) {
  if (m < 3) throw PreconditionError("thm-9-2 requires m >= 3");
  if (d < 1) throw PreconditionError("thm-9-2 requires d >= 1");
  if (N % 4 != 0 || N < 4 * d + 4)
    throw PreconditionError("thm-9-2 requires N to be a multiple of 4 with N >= 4d + 4");
  const std::size_t mm = static_cast<std::size_t>(m);
  DatabaseDraft draft;
  draft.m = m;
  const std::size_t wd = detail::digits(d);
  const std::size_t wN = detail::digits(N);
  std::vector<ObjectId> cand;  // cand[p-1] sits at position p of list 1; T = cand[0]
  for (std::size_t p = 1; p <= d; ++p)
    cand.push_back(p == 1 ? ObjectId("T") : "p" + detail::pad_number(p, wd));
  std::vector<ObjectId> rest;
  for (std::size_t j = 1; j <= N - d; ++j) rest.push_back("o" + detail::pad_number(j, wN));

  const double denom = static_cast<double>(2 * d + 2);
  for (std::size_t p = 1; p <= d; ++p) {
    std::vector<double> g(mm, 0.0);
    g[0] = static_cast<double>(d + 1 - p) / denom;
    g[1] = static_cast<double>(p) / denom;
    draft.objects.push_back({cand[p - 1], g});
  }
  const double fill_ceiling = 1.0 / denom;
  const double K = static_cast<double>(N - d);
  for (std::size_t j = 0; j < rest.size(); ++j) {
    std::vector<double> g(mm, 0.0);
    double v = fill_ceiling * (K - static_cast<double>(j)) / (K + 1.0);
    g[0] = v;
    g[1] = v * 0.5;  // distinct within the list; exact values are free here
    draft.objects.push_back({rest[j], g});
  }

  // Lists 3..m carry the value set {i/N}: T gets exactly 1/2, decoy p drops
  // below 1/2 in its cyclically assigned list, everyone else fills in.
  for (int l = 2; l < m; ++l) {
    std::vector<int> assigned(draft.objects.size(), 0);  // i value per object
    std::size_t next_high = N / 2;      // counts upward, stays below 3N/4
    std::size_t next_low = N / 2 - 1;   // counts downward
    auto low_list_of = [&](std::size_t p) { return 2 + static_cast<int>((p - 2) % (mm - 2)); };
    assigned[0] = static_cast<int>(N / 2);
    ++next_high;
    for (std::size_t p = 2; p <= d; ++p) {
      if (low_list_of(p) == l)
        assigned[p - 1] = static_cast<int>(next_low--);
      else
        assigned[p - 1] = static_cast<int>(next_high++);
    }
    if (next_high > 3 * N / 4)
      throw PreconditionError("thm-9-2 requires N >= 4d + 4");
    std::set<int> used;
    for (std::size_t p = 0; p < d; ++p) used.insert(assigned[p]);
    int next_free = static_cast<int>(N);
    for (std::size_t j = d; j < draft.objects.size(); ++j) {
      while (used.count(next_free)) --next_free;
      assigned[j] = next_free--;
    }
    for (std::size_t j = 0; j < draft.objects.size(); ++j)
      draft.objects[j].grades[static_cast<std::size_t>(l)] =
          static_cast<double>(assigned[j]) / static_cast<double>(N);
  }
  return Database::from_draft(std::move(draft));  // orders synthesized
}

// 0/1 family with dm ones atop every list; the all-ones object "T" sits at
// position d of list 1 and position dm of every other list.
inline Database gen_theorem_9_3(std::size_t d, int m) {
  if (m < 2 || d < 1) throw PreconditionError("thm-9-3 requires m >= 2 and d >= 1");
  const std::size_t mm = static_cast<std::size_t>(m);
  const std::size_t dm = d * mm;
  const std::size_t w = detail::digits(dm);
  DatabaseDraft draft;
  draft.m = m;
  draft.objects.push_back({"T", std::vector<double>(mm, 1.0)});
  std::vector<std::vector<ObjectId>> orders(mm);
  for (int l = 0; l < m; ++l) {
    const std::size_t t_pos = (l == 0) ? d : dm;
    for (std::size_t p = 1; p <= dm; ++p) {
      if (p == t_pos) {
        orders[static_cast<std::size_t>(l)].push_back("T");
        continue;
      }
      ObjectId id = "h" + std::to_string(l + 1) + "_" + detail::pad_number(p, w);
      std::vector<double> g(mm, 0.0);
      g[static_cast<std::size_t>(l)] = 1.0;
      draft.objects.push_back({id, g});
      orders[static_cast<std::size_t>(l)].push_back(id);
    }
  }
  for (int l = 0; l < m; ++l) {
    std::set<ObjectId> placed(orders[static_cast<std::size_t>(l)].begin(),
                              orders[static_cast<std::size_t>(l)].end());
    std::vector<ObjectId> rest;
    for (const auto& o : draft.objects)
      if (!placed.count(o.id)) rest.push_back(o.id);
    std::sort(rest.begin(), rest.end());
    for (const auto& id : rest) orders[static_cast<std::size_t>(l)].push_back(id);
  }
  draft.list_orders = std::move(orders);
  return Database::from_draft(std::move(draft));
}

// Sorted-only challenge family: 2m special objects, each zeroed exactly in
// its own challenge list (except the all-ones "T1"), every list's top 2m-2
// holding the other specials and ones padding down to depth d.
inline Database gen_theorem_9_5(std::size_t d, int m) {
  if (m < 2) throw PreconditionError("thm-9-5 requires m >= 2");
  if (d < 2 * static_cast<std::size_t>(m) - 1)
    throw PreconditionError("thm-9-5 requires d >= 2m - 1");
  const std::size_t mm = static_cast<std::size_t>(m);
  DatabaseDraft draft;
  draft.m = m;
  std::vector<ObjectId> specials;  // "T<i>" and "U<i>"; challenge list i
  for (int i = 0; i < m; ++i) {
    specials.push_back("T" + std::to_string(i + 1));
    specials.push_back("U" + std::to_string(i + 1));
  }
  auto challenge_of = [&](std::size_t s) { return static_cast<int>(s / 2); };
  for (std::size_t s = 0; s < specials.size(); ++s) {
    std::vector<double> g(mm, 1.0);
    if (specials[s] != "T1") g[static_cast<std::size_t>(challenge_of(s))] = 0.0;
    draft.objects.push_back({specials[s], g});
  }
  const std::size_t w = detail::digits(d);
  std::vector<std::vector<ObjectId>> orders(mm);
  for (int l = 0; l < m; ++l) {
    auto& ord = orders[static_cast<std::size_t>(l)];
    for (std::size_t s = 0; s < specials.size(); ++s)
      if (challenge_of(s) != l) ord.push_back(specials[s]);
    for (std::size_t p = ord.size() + 1; p <= d; ++p) {
      if (l == 0 && p == d) {
        ord.push_back("T1");
        continue;
      }
      ObjectId id = "g" + std::to_string(l + 1) + "_" + detail::pad_number(p, w);
      std::vector<double> g(mm, 0.0);
      g[static_cast<std::size_t>(l)] = 1.0;
      draft.objects.push_back({id, g});
      ord.push_back(id);
    }
  }
  for (int l = 0; l < m; ++l) {
    std::set<ObjectId> placed(orders[static_cast<std::size_t>(l)].begin(),
                              orders[static_cast<std::size_t>(l)].end());
    std::vector<ObjectId> rest;
    for (const auto& o : draft.objects)
      if (!placed.count(o.id)) rest.push_back(o.id);
    std::sort(rest.begin(), rest.end());
    for (const auto& id : rest) orders[static_cast<std::size_t>(l)].push_back(id);
  }
  draft.list_orders = std::move(orders);
  return Database::from_draft(std::move(draft));
}

// Seeded random database. Non-distinct grades come from the lattice j/16 to
// exercise tie handling; distinct mode samples without replacement from
// j/2^20. List orders are synthesized (grade descending, id ascending).
inline Database gen_random(std::size_t N, int m, std::uint64_t seed, bool distinct) {
  if (N < 1 || m < 1) throw PreconditionError("random requires N >= 1 and m >= 1");
  std::mt19937_64 rng(seed);
  DatabaseDraft d;
  d.m = m;
  const std::size_t w = detail::digits(N);
  for (std::size_t i = 1; i <= N; ++i)
    d.objects.push_back({"o" + detail::pad_number(i, w),
                         std::vector<double>(static_cast<std::size_t>(m), 0.0)});
  if (distinct) {
    std::uniform_int_distribution<std::uint32_t> dist(0, 1u << 20);
    for (int l = 0; l < m; ++l) {
      std::set<std::uint32_t> used;
      for (std::size_t i = 0; i < N; ++i) {
        std::uint32_t v;
        do {
          v = dist(rng);
        } while (!used.insert(v).second);
        d.objects[i].grades[static_cast<std::size_t>(l)] =
            static_cast<double>(v) / static_cast<double>(1u << 20);
      }
    }
  } else {
    std::uniform_int_distribution<int> dist(0, 16);
    for (std::size_t i = 0; i < N; ++i)
      for (int l = 0; l < m; ++l)
        d.objects[i].grades[static_cast<std::size_t>(l)] = static_cast<double>(dist(rng)) / 16.0;
  }
  return Database::from_draft(std::move(d));
}

// Declarative form used by the CLI and determinism tests.
struct GeneratorSpec {
  std::string family;
  std::map<std::string, double> params;  // ordered, for a canonical digest

  std::string to_string() const {
    std::string s = "family=" + family;
    for (const auto& [key, value] : params) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", value);
      s += ";" + key + "=" + buf;
    }
    return s;
  }
};

inline const std::vector<std::string>& generator_families() {
  static const std::vector<std::string> families = {
      "example-6-3", "example-6-8", "example-7-3", "example-8-3", "figure-5",
      "thm-9-1",     "thm-9-2",     "thm-9-3",     "thm-9-5",     "random"};
  return families;
}

inline Database generate(const GeneratorSpec& spec) {
  auto need = [&](const std::string& key) {
    auto it = spec.params.find(key);
    if (it == spec.params.end())
      throw PreconditionError("family '" + spec.family + "' requires parameter '" + key + "'");
    return it->second;
  };
  auto get_or = [&](const std::string& key, double fallback) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
  };
  auto as_size = [](double v) { return static_cast<std::size_t>(v); };
  if (spec.family == "example-6-3") return gen_example_6_3(as_size(need("n")));
  if (spec.family == "example-6-8") return gen_example_6_8(as_size(need("n")), need("theta"));
  if (spec.family == "example-7-3") return gen_example_7_3(as_size(need("N")));
  if (spec.family == "example-8-3")
    return gen_example_8_3(as_size(need("n")), get_or("two_winners", 0.0) != 0.0);
  if (spec.family == "figure-5") return gen_figure_5(as_size(need("h")));
  if (spec.family == "thm-9-1")
    return gen_theorem_9_1(as_size(need("d")), static_cast<int>(need("m")),
                           as_size(need("k1")), as_size(need("k2")), as_size(need("N")));
  if (spec.family == "thm-9-2")
    return gen_theorem_9_2(as_size(need("d")), static_cast<int>(need("m")), as_size(need("N")));
  if (spec.family == "thm-9-3")
    return gen_theorem_9_3(as_size(need("d")), static_cast<int>(need("m")));
  if (spec.family == "thm-9-5")
    return gen_theorem_9_5(as_size(need("d")), static_cast<int>(need("m")));
  if (spec.family == "random")
    return gen_random(as_size(need("N")), static_cast<int>(need("m")),
                      static_cast<std::uint64_t>(get_or("seed", 0.0)),
                      get_or("distinct", 0.0) != 0.0);
  throw PreconditionError("unknown generator family '" + spec.family + "'");
}

}  // namespace topk
