#pragma once

// Ground truth and proof search: exhaustive top-k, approximation checking,
// transcript determination, and a cheapest-determining-transcript search.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "topk/aggregate.hpp"
#include "topk/core.hpp"
#include "topk/report.hpp"

namespace topk {

inline std::vector<TopKEntry> brute_force_topk(const Database& db, const AggregationFunction& t,
                                               std::size_t k) {
  if (k < 1 || k > db.size()) throw PreconditionError("k must satisfy 1 <= k <= N");
  const int m = db.num_lists();
  if (t.arity() != m) throw PreconditionError("aggregation arity does not match database");
  struct Scored {
    std::uint32_t idx;
    double grade;
  };
  std::vector<Scored> scored;
  scored.reserve(db.size());
  for (std::uint32_t i = 0; i < db.size(); ++i) scored.push_back({i, t(db.object(i).grades)});
  std::sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
    if (a.grade != b.grade) return a.grade > b.grade;
    return db.object(a.idx).id < db.object(b.idx).id;
  });
  std::vector<TopKEntry> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back({db.object(scored[i].idx).id, scored[i].grade});
  return out;
}

// Failure witness: an unchosen object whose overall grade exceeds theta times
// a chosen object's overall grade.
struct ThetaWitness {
  ObjectId unchosen;
  ObjectId chosen;
  double unchosen_grade = 0.0;
  double chosen_grade = 0.0;
};

struct ThetaCheck {
  bool ok = false;
  std::optional<ThetaWitness> witness;  // set on failure
};

inline ThetaCheck verify_theta_approx(const Database& db, const AggregationFunction& t,
                                      std::size_t k, const std::vector<ObjectId>& candidate,
                                      double theta) {
  if (!(theta >= 1.0)) throw PreconditionError("theta must be >= 1");
  if (candidate.size() != k) throw PreconditionError("candidate size does not match k");
  if (k < 1 || k > db.size()) throw PreconditionError("k must satisfy 1 <= k <= N");
  std::set<std::uint32_t> inside;
  for (const auto& id : candidate)
    if (!inside.insert(db.index_of(id)).second)
      throw PreconditionError("candidate contains duplicate id '" + id + "'");
  // The check reduces to the extremes: theta * (worst chosen) vs best unchosen.
  std::optional<std::uint32_t> min_in, max_out;
  double min_in_grade = 0.0, max_out_grade = 0.0;
  for (std::uint32_t i = 0; i < db.size(); ++i) {
    double g = t(db.object(i).grades);
    if (inside.count(i)) {
      if (!min_in || g < min_in_grade ||
          (g == min_in_grade && db.object(i).id < db.object(*min_in).id)) {
        min_in = i;
        min_in_grade = g;
      }
    } else {
      if (!max_out || g > max_out_grade ||
          (g == max_out_grade && db.object(i).id < db.object(*max_out).id)) {
        max_out = i;
        max_out_grade = g;
      }
    }
  }
  ThetaCheck out;
  if (!max_out || theta * min_in_grade >= max_out_grade) {
    out.ok = true;
    return out;
  }
  out.ok = false;
  out.witness = ThetaWitness{db.object(*max_out).id, db.object(*min_in).id, max_out_grade,
                             min_in_grade};
  return out;
}

struct DeterminedOptions {
  // Treat per-list grades as pairwise distinct: an unknown grade then lies
  // strictly below the current bottom of any advanced cursor and cannot equal
  // an already revealed grade. Bounds evaluate just inside the open interval.
  bool assume_distinct = false;
};

namespace detail {

// Cursor depths plus the set of randomly revealed (object, list) pairs; the
// complete information content of a transcript.
struct TranscriptView {
  std::vector<std::size_t> depths;
  std::set<std::uint64_t> revealed;  // object_index * m + list
};

inline TranscriptView view_from_events(const Database& db,
                                       const std::vector<AccessEvent>& events) {
  TranscriptView v;
  v.depths.assign(static_cast<std::size_t>(db.num_lists()), 0);
  const std::uint64_t m = static_cast<std::uint64_t>(db.num_lists());
  for (const auto& e : events) {
    if (e.kind == AccessKind::kSorted)
      v.depths[static_cast<std::size_t>(e.list)] =
          std::max<std::size_t>(v.depths[static_cast<std::size_t>(e.list)], e.position);
    else
      v.revealed.insert(static_cast<std::uint64_t>(e.object) * m +
                        static_cast<std::uint64_t>(e.list));
  }
  return v;
}

// Decides whether a view forces a unique-enough top-k answer: a k-set of seen
// objects whose worst bounds dominate every other object's best bound (other
// seen objects, and a virtual unseen object when one may exist).
class DeterminationOracle {
 public:
  DeterminationOracle(const Database& db, const AggregationFunction& t, std::size_t k,
                      DeterminedOptions opt = {})
      : db_(db), t_(t), k_(k), opt_(opt) {
    if (k < 1 || k > db.size()) throw PreconditionError("k must satisfy 1 <= k <= N");
    if (t.arity() != db.num_lists())
      throw PreconditionError("aggregation arity does not match database");
    const int m = db.num_lists();
    pos_.assign(static_cast<std::size_t>(m), std::vector<std::uint32_t>(db.size(), 0));
    for (int l = 0; l < m; ++l)
      for (std::uint32_t p = 0; p < db.size(); ++p)
        pos_[static_cast<std::size_t>(l)][db.at(l, p)] = p;
  }

  std::optional<std::vector<ObjectId>> forced_topk(const TranscriptView& view) const {
    const std::size_t m = static_cast<std::size_t>(db_.num_lists());
    std::set<std::uint32_t> seen;
    for (std::size_t l = 0; l < m; ++l)
      for (std::size_t p = 0; p < view.depths[l]; ++p) seen.insert(db_.at(static_cast<int>(l), p));
    for (auto key : view.revealed) seen.insert(static_cast<std::uint32_t>(key / m));
    if (seen.size() < k_) return std::nullopt;

    // Per-list upper bound for an unknown grade, shared by all objects.
    std::vector<double> ub(m);
    for (std::size_t l = 0; l < m; ++l) {
      double b = view.depths[l] == 0
                     ? 1.0
                     : db_.grade(db_.at(static_cast<int>(l), view.depths[l] - 1),
                                 static_cast<int>(l));
      bool open = false;
      if (opt_.assume_distinct) {
        open = view.depths[l] > 0;
        if (!open)
          for (auto key : view.revealed)
            if (key % m == l &&
                db_.grade(static_cast<std::uint32_t>(key / m), static_cast<int>(l)) == b) {
              open = true;
              break;
            }
      }
      ub[l] = open ? std::nextafter(b, -1.0) : b;
    }

    struct Row {
      std::uint32_t idx;
      double worst, best;
    };
    std::vector<Row> rows;
    rows.reserve(seen.size());
    std::vector<double> lo(m), hi(m);
    for (auto idx : seen) {
      for (std::size_t l = 0; l < m; ++l) {
        bool known = pos_[l][idx] < view.depths[l] ||
                     view.revealed.count(static_cast<std::uint64_t>(idx) * m + l) != 0;
        if (known)
          lo[l] = hi[l] = db_.grade(idx, static_cast<int>(l));
        else {
          lo[l] = 0.0;
          hi[l] = ub[l];
        }
      }
      rows.push_back({idx, t_(lo), t_(hi)});
    }
    std::sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
      if (a.worst != b.worst) return a.worst > b.worst;
      if (a.best != b.best) return a.best > b.best;
      return db_.object(a.idx).id < db_.object(b.idx).id;
    });
    const double floor = rows[k_ - 1].worst;
    for (std::size_t i = k_; i < rows.size(); ++i)
      if (rows[i].best > floor) return std::nullopt;
    if (seen.size() < db_.size() && t_(ub) > floor) return std::nullopt;
    std::vector<ObjectId> answer;
    for (std::size_t i = 0; i < k_; ++i) answer.push_back(db_.object(rows[i].idx).id);
    return answer;
  }

 private:
  const Database& db_;
  const AggregationFunction& t_;
  std::size_t k_;
  DeterminedOptions opt_;
  std::vector<std::vector<std::uint32_t>> pos_;  // pos_[list][object] in that list's order
};

}  // namespace detail

inline std::optional<std::vector<ObjectId>> determined(const Database& db,
                                                       const AggregationFunction& t,
                                                       std::size_t k,
                                                       const std::vector<AccessEvent>& transcript,
                                                       DeterminedOptions opt = {}) {
  replay_transcript(db, transcript);
  detail::DeterminationOracle oracle(db, t, k, opt);
  return oracle.forced_topk(detail::view_from_events(db, transcript));
}

enum class CertificatePolicy {
  kNoWildGuess,  // random access only to objects named by a prior sorted access
  kWildGuess,    // random access to any object
  kSortedOnly,   // no random access at all
};

struct CertificateSearchOptions {
  CertificatePolicy policy = CertificatePolicy::kNoWildGuess;
  bool assume_distinct = false;
  std::uint64_t max_expansions = 10'000'000;
};

struct Certificate {
  std::vector<AccessEvent> transcript;
  double cost = 0.0;
  std::size_t sorted_count = 0;
  std::size_t random_count = 0;
  std::vector<ObjectId> proven;  // the k-set the transcript determines
};

struct CertificateSearch {
  std::optional<Certificate> certificate;
  bool budget_exceeded = false;
  std::uint64_t expanded = 0;
};

// Uniform-cost search over access transcripts, cheapest first, returning the
// first one after which the top-k answer is forced. Ties in cost break by
// discovery order, so results are deterministic.
inline CertificateSearch min_certificate_cost(const Database& db, const AggregationFunction& t,
                                              std::size_t k, const CostModel& model,
                                              CertificateSearchOptions opt = {}) {
  model.require_valid();
  detail::DeterminationOracle oracle(db, t, k, {opt.assume_distinct});
  const std::size_t m = static_cast<std::size_t>(db.num_lists());
  const std::size_t N = db.size();

  struct Action {
    AccessKind kind;
    int list;
    std::uint32_t object;  // random accesses only
  };
  struct Node {
    std::int64_t parent;
    Action action;
  };
  std::vector<Node> arena;
  struct QueueItem {
    double g;
    std::uint64_t order;
    std::int64_t node;
    bool operator>(const QueueItem& other) const {
      if (g != other.g) return g > other.g;
      return order > other.order;
    }
  };
  std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<QueueItem>> frontier;

  // State key: cursor depths then the sorted revealed set.
  auto encode = [m](const detail::TranscriptView& v) {
    std::vector<std::uint64_t> key;
    key.reserve(m + v.revealed.size());
    for (auto d : v.depths) key.push_back(d);
    for (auto r : v.revealed) key.push_back(r + m);  // offset to keep segments distinct
    return key;
  };
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint64_t>& key) const {
      std::uint64_t h = 1469598103934665603ull;
      for (auto v : key)
        for (int b = 0; b < 8; ++b) {
          h ^= (v >> (8 * b)) & 0xff;
          h *= 1099511628211ull;
        }
      return static_cast<std::size_t>(h);
    }
  };
  std::unordered_map<std::vector<std::uint64_t>, double, KeyHash> best;

  auto view_of = [&](std::int64_t node) {
    detail::TranscriptView v;
    v.depths.assign(m, 0);
    for (std::int64_t cur = node; cur >= 0; cur = arena[static_cast<std::size_t>(cur)].parent) {
      const Action& a = arena[static_cast<std::size_t>(cur)].action;
      if (a.kind == AccessKind::kSorted)
        ++v.depths[static_cast<std::size_t>(a.list)];
      else
        v.revealed.insert(static_cast<std::uint64_t>(a.object) * m +
                          static_cast<std::uint64_t>(a.list));
    }
    return v;
  };

  std::uint64_t ticket = 0;
  frontier.push({0.0, ticket++, -1});
  best[encode(detail::TranscriptView{std::vector<std::size_t>(m, 0), {}})] = 0.0;

  CertificateSearch out;
  while (!frontier.empty()) {
    QueueItem item = frontier.top();
    frontier.pop();
    detail::TranscriptView view = view_of(item.node);
    auto key = encode(view);
    auto it = best.find(key);
    if (it != best.end() && item.g > it->second) continue;  // stale queue entry
    if (out.expanded++ >= opt.max_expansions) {
      out.budget_exceeded = true;
      return out;
    }

    if (auto proven = oracle.forced_topk(view)) {
      // Reconstruct and replay the access sequence to produce a full
      // transcript with grades and positions.
      std::vector<Action> actions;
      for (std::int64_t cur = item.node; cur >= 0;
           cur = arena[static_cast<std::size_t>(cur)].parent)
        actions.push_back(arena[static_cast<std::size_t>(cur)].action);
      std::reverse(actions.begin(), actions.end());
      CostedAccessor acc(db, model);
      for (const auto& a : actions) {
        if (a.kind == AccessKind::kSorted)
          acc.sorted_access(a.list);
        else
          acc.random_access(a.object, a.list);
      }
      Certificate cert;
      cert.transcript = acc.take_transcript();
      cert.cost = acc.cost();
      cert.sorted_count = acc.stats().sorted_count;
      cert.random_count = acc.stats().random_count;
      cert.proven = std::move(*proven);
      out.certificate = std::move(cert);
      return out;
    }

    auto offer = [&](Action a, double step) {
      double g2 = item.g + step;
      detail::TranscriptView v2 = view;
      if (a.kind == AccessKind::kSorted)
        ++v2.depths[static_cast<std::size_t>(a.list)];
      else
        v2.revealed.insert(static_cast<std::uint64_t>(a.object) * m +
                           static_cast<std::uint64_t>(a.list));
      auto k2 = encode(v2);
      auto found = best.find(k2);
      if (found != best.end() && found->second <= g2) return;
      best[std::move(k2)] = g2;
      arena.push_back({item.node, a});
      frontier.push({g2, ticket++, static_cast<std::int64_t>(arena.size()) - 1});
    };

    for (std::size_t l = 0; l < m; ++l)
      if (view.depths[l] < N)
        offer({AccessKind::kSorted, static_cast<int>(l), 0}, model.sorted_cost);
    if (opt.policy != CertificatePolicy::kSortedOnly) {
      std::vector<bool> eligible(N, opt.policy == CertificatePolicy::kWildGuess);
      if (opt.policy == CertificatePolicy::kNoWildGuess)
        for (std::size_t l = 0; l < m; ++l)
          for (std::size_t p = 0; p < view.depths[l]; ++p)
            eligible[db.at(static_cast<int>(l), p)] = true;
      for (std::uint32_t obj = 0; obj < N; ++obj) {
        if (!eligible[obj]) continue;
        for (std::size_t l = 0; l < m; ++l) {
          bool in_prefix = false;
          for (std::size_t p = 0; p < view.depths[l] && !in_prefix; ++p)
            in_prefix = db.at(static_cast<int>(l), p) == obj;
          if (in_prefix ||
              view.revealed.count(static_cast<std::uint64_t>(obj) * m + l) != 0)
            continue;  // grade already known; a repeat can never help a proof
          offer({AccessKind::kRandom, static_cast<int>(l), obj}, model.random_cost);
        }
      }
    }
  }
  return out;  // exhausted the whole space without a determining transcript
}

inline double optimality_ratio(double run_cost, double certificate_cost) {
  if (certificate_cost <= 0.0) return std::numeric_limits<double>::infinity();
  return run_cost / certificate_cost;
}

}  // namespace topk
