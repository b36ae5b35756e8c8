#pragma once

// The top-k algorithm family. All runners share the same lockstep round
// structure: one round performs a sorted access on every readable list
// (ascending list order), then processes what it saw. Halt tests that are
// allowed to fire mid-round do so only after an object's random accesses
// completed, so a round's sorted batch is never cut short.
//
// Tie-breaking is deterministic everywhere and ends with ObjectId ascending.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "topk/aggregate.hpp"
#include "topk/core.hpp"
#include "topk/report.hpp"

namespace topk {

// Optional instrumentation for the bounded-buffer claim: records the largest
// top-k buffer the threshold runner ever held.
struct TaProbe {
  std::size_t max_buffer = 0;
  std::size_t steps = 0;
};

struct AlgorithmOptions {
  double theta = 1.0;             // ta-theta
  std::vector<int> z_lists;       // ta-z, 0-based list indices
  std::size_t budget = 0;         // ta with early stop; 0 = no budget
  bool memoize = false;           // ta: cache grades per object within the run
  bool record_transcript = true;  // disable for very large runs
  TaProbe* probe = nullptr;
};

namespace detail {

inline void require_query(const Database& db, const AggregationFunction& t, int k) {
  if (t.arity() != db.num_lists())
    throw PreconditionError("aggregation arity " + std::to_string(t.arity()) +
                            " does not match database with m = " +
                            std::to_string(db.num_lists()));
  if (k < 1 || static_cast<std::size_t>(k) > db.size())
    throw PreconditionError("k must satisfy 1 <= k <= N (k = " + std::to_string(k) +
                            ", N = " + std::to_string(db.size()) + ")");
}

// Keeps the k best (grade desc, ObjectId asc) graded objects.
class TopBuffer {
 public:
  struct Entry {
    std::uint32_t object;
    double grade;
  };

  TopBuffer(const Database& db, std::size_t k) : db_(&db), k_(k) {}

  void offer(std::uint32_t object, double grade) {
    for (const auto& e : entries_)
      if (e.object == object) return;  // same object, same grade
    Entry cand{object, grade};
    if (entries_.size() < k_) {
      insert_sorted(cand);
      return;
    }
    if (better(cand, entries_.back())) {
      entries_.pop_back();
      insert_sorted(cand);
    }
  }

  std::size_t size() const { return entries_.size(); }
  bool full() const { return entries_.size() == k_; }
  double kth_grade() const { return entries_.back().grade; }
  const std::vector<Entry>& entries() const { return entries_; }

  std::vector<TopKEntry> to_result() const {
    std::vector<TopKEntry> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back({db_->object(e.object).id, e.grade});
    return out;
  }

 private:
  bool better(const Entry& a, const Entry& b) const {
    if (a.grade != b.grade) return a.grade > b.grade;
    return db_->object(a.object).id < db_->object(b.object).id;
  }
  void insert_sorted(const Entry& e) {
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const Entry& x) { return better(e, x); });
    entries_.insert(it, e);
  }

  const Database* db_;
  std::size_t k_;
  std::vector<Entry> entries_;
};

}  // namespace detail

// Reads every entry of every list, then selects the exact top k.
inline RunReport run_naive(const Database& db, const AggregationFunction& t, int k,
                           const CostModel& model, const AlgorithmOptions& opt = {}) {
  detail::require_query(db, t, k);
  CostedAccessor acc(db, model, opt.record_transcript);
  const int m = db.num_lists();
  std::vector<std::vector<double>> grades(db.size(), std::vector<double>());
  for (auto& g : grades) g.assign(static_cast<std::size_t>(m), 0.0);
  std::size_t depth = 0;
  for (std::size_t d = 0; d < db.size(); ++d) {
    for (int i = 0; i < m; ++i) {
      auto e = acc.sorted_access(i);
      grades[e->object][static_cast<std::size_t>(i)] = e->grade;
    }
    depth = d + 1;
  }
  detail::TopBuffer buf(db, static_cast<std::size_t>(k));
  for (std::uint32_t obj = 0; obj < db.size(); ++obj) buf.offer(obj, t(grades[obj]));
  RunReport r;
  r.algorithm = "naive";
  r.aggregation = t.name();
  r.k = k;
  r.cost_model = model;
  r.result = buf.to_result();
  r.stats = acc.stats();
  r.rounds = depth;
  r.transcript = acc.take_transcript();
  return r;
}

// Lockstep sorted access until at least k objects were seen in every list,
// then random access to every seen object's missing fields.
inline RunReport run_fa(const Database& db, const AggregationFunction& t, int k,
                        const CostModel& model, const AlgorithmOptions& opt = {}) {
  detail::require_query(db, t, k);
  CostedAccessor acc(db, model, opt.record_transcript);
  const int m = db.num_lists();
  std::vector<FieldKnowledge> knowledge;
  std::vector<std::int32_t> slot(db.size(), -1);
  std::vector<std::uint32_t> encounter;  // first-sighting order
  std::size_t matched = 0;               // objects seen in all m lists
  std::size_t depth = 0;
  auto ensure_slot = [&](std::uint32_t obj) {
    if (slot[obj] < 0) {
      slot[obj] = static_cast<std::int32_t>(knowledge.size());
      knowledge.emplace_back(m);
      encounter.push_back(obj);
    }
    return static_cast<std::size_t>(slot[obj]);
  };
  while (matched < static_cast<std::size_t>(k)) {
    for (int i = 0; i < m; ++i) {
      auto e = acc.sorted_access(i);
      if (!e) continue;  // all lists exhaust at the same depth
      auto s = ensure_slot(e->object);
      knowledge[s].set(i, e->grade);
      if (knowledge[s].complete()) ++matched;
    }
    ++depth;
    if (depth >= db.size()) break;  // every object seen everywhere
  }
  for (auto obj : encounter) {
    auto& kn = knowledge[static_cast<std::size_t>(slot[obj])];
    for (int i = 0; i < m; ++i)
      if (!kn.known[static_cast<std::size_t>(i)]) kn.set(i, acc.random_access(obj, i));
  }
  detail::TopBuffer buf(db, static_cast<std::size_t>(k));
  for (auto obj : encounter) buf.offer(obj, t(knowledge[static_cast<std::size_t>(slot[obj])].value));
  RunReport r;
  r.algorithm = "fa";
  r.aggregation = t.name();
  r.k = k;
  r.cost_model = model;
  r.result = buf.to_result();
  r.stats = acc.stats();
  r.rounds = depth;
  r.transcript = acc.take_transcript();
  return r;
}

namespace detail {

// Shared engine behind ta, ta-theta, ta-z and budgeted ta. Rounds walk the
// readable lists; each sighting costs m-1 random accesses (re-fetched per
// sighting unless memoizing); the halt test compares the k-th buffered grade
// against threshold/theta after each object's accesses complete.
inline RunReport run_ta_engine(const Database& db, const AggregationFunction& t, int k,
                               const CostModel& model, std::vector<int> z_lists, double theta,
                               std::size_t budget, const AlgorithmOptions& opt,
                               std::string algorithm_name, bool report_theta) {
  require_query(db, t, k);
  const int m = db.num_lists();
  if (z_lists.empty()) throw PreconditionError("ta-z requires a nonempty set of lists");
  std::sort(z_lists.begin(), z_lists.end());
  z_lists.erase(std::unique(z_lists.begin(), z_lists.end()), z_lists.end());
  if (z_lists.front() < 0 || z_lists.back() >= m)
    throw PreconditionError("Z must be a subset of lists 1.." + std::to_string(m));
  if (!(theta >= 1.0)) throw PreconditionError("theta must be >= 1");

  CostedAccessor acc(db, model, opt.record_transcript);
  BottomValues bottoms = initial_bottoms(m);  // stays 1 for lists outside Z
  TopBuffer buffer(db, static_cast<std::size_t>(k));
  std::unordered_map<std::uint32_t, FieldKnowledge> memo;

  bool halted = false;
  bool exhausted_all = false;
  std::size_t depth = 0;
  FieldKnowledge scratch(m);

  struct Sighting {
    std::uint32_t object;
    int list;
    double grade;
  };
  std::vector<Sighting> sightings;

  while (!halted) {
    if (acc.exhausted(z_lists.front())) {  // lists share one length
      exhausted_all = true;
      break;
    }
    sightings.clear();
    for (int i : z_lists) {
      auto e = acc.sorted_access(i);
      bottoms[static_cast<std::size_t>(i)] = e->grade;
      sightings.push_back({e->object, i, e->grade});
    }
    ++depth;
    const double tau = threshold_value(t, bottoms);
    for (std::size_t p = 0; p < sightings.size() && !halted; ++p) {
      if (std::any_of(sightings.begin(), sightings.begin() + static_cast<std::ptrdiff_t>(p),
                      [&](const Sighting& s) { return s.object == sightings[p].object; }))
        continue;  // already processed in this round
      const std::uint32_t obj = sightings[p].object;
      double grade;
      if (opt.memoize) {
        FieldKnowledge& kn = memo.try_emplace(obj, m).first->second;
        for (const auto& s : sightings)
          if (s.object == obj) kn.set(s.list, s.grade);
        for (int j = 0; j < m; ++j)
          if (!kn.known[static_cast<std::size_t>(j)]) kn.set(j, acc.random_access(obj, j));
        grade = t(kn.value);
      } else {
        scratch = FieldKnowledge(m);
        for (const auto& s : sightings)
          if (s.object == obj) scratch.set(s.list, s.grade);
        for (const auto& s : sightings) {
          if (s.object != obj) continue;
          for (int j = 0; j < m; ++j)
            if (j != s.list) scratch.set(j, acc.random_access(obj, j));
        }
        grade = t(scratch.value);
      }
      buffer.offer(obj, grade);
      if (opt.probe) {
        opt.probe->max_buffer = std::max(opt.probe->max_buffer, buffer.size());
        ++opt.probe->steps;
      }
      if (buffer.full() && buffer.kth_grade() >= tau / theta) halted = true;
    }
    if (!halted && budget > 0 && depth >= budget) break;
  }

  RunReport r;
  r.algorithm = std::move(algorithm_name);
  r.aggregation = t.name();
  r.k = k;
  r.cost_model = model;
  r.result = buffer.to_result();
  r.stats = acc.stats();
  r.rounds = depth;
  r.halted_by_exhaustion = exhausted_all && !halted;
  if (report_theta) {
    r.theta_guarantee = theta;
  } else if (budget > 0) {
    // Guarantee delivered by an early stop: threshold over the k-th grade.
    if (!buffer.full() || buffer.kth_grade() <= 0.0) {
      r.theta_guarantee = std::numeric_limits<double>::infinity();
    } else {
      r.theta_guarantee = std::max(1.0, threshold_value(t, bottoms) / buffer.kth_grade());
    }
  }
  r.transcript = acc.take_transcript();
  return r;
}

inline std::vector<int> all_lists(const Database& db) {
  std::vector<int> z(static_cast<std::size_t>(db.num_lists()));
  for (int i = 0; i < db.num_lists(); ++i) z[static_cast<std::size_t>(i)] = i;
  return z;
}

}  // namespace detail

inline RunReport run_ta(const Database& db, const AggregationFunction& t, int k,
                        const CostModel& model, const AlgorithmOptions& opt = {}) {
  return detail::run_ta_engine(db, t, k, model, detail::all_lists(db), 1.0, 0, opt, "ta",
                               /*report_theta=*/false);
}

inline RunReport run_ta_theta(const Database& db, const AggregationFunction& t, int k,
                              const CostModel& model, double theta,
                              const AlgorithmOptions& opt = {}) {
  return detail::run_ta_engine(db, t, k, model, detail::all_lists(db), theta, 0, opt, "ta-theta",
                               /*report_theta=*/true);
}

inline RunReport run_ta_early_stop(const Database& db, const AggregationFunction& t, int k,
                                   const CostModel& model, std::size_t budget,
                                   const AlgorithmOptions& opt = {}) {
  if (budget < 1) throw PreconditionError("budget must be at least 1 round");
  return detail::run_ta_engine(db, t, k, model, detail::all_lists(db), 1.0, budget, opt, "ta",
                               /*report_theta=*/false);
}

// Sorted access restricted to the lists in Z; bottoms elsewhere stay 1, so
// the run may only end by exhausting Z (reported via halted_by_exhaustion).
inline RunReport run_ta_z(const Database& db, const AggregationFunction& t, int k,
                          const CostModel& model, const std::vector<int>& z_lists,
                          const AlgorithmOptions& opt = {}) {
  return detail::run_ta_engine(db, t, k, model, z_lists, 1.0, 0, opt, "ta-z",
                               /*report_theta=*/false);
}

namespace detail {

// Bookkeeping shared by the sorted-only runners: worst/best bounds, the
// current top-k by (W desc, B desc, id asc) and the viability test.
class BoundTable {
 public:
  BoundTable(const Database& db, const AggregationFunction& t, int k)
      : db_(&db), t_(&t), k_(static_cast<std::size_t>(k)),
        bottoms_(initial_bottoms(db.num_lists())),
        slot_(db.size(), -1) {}

  void see_sorted(std::uint32_t obj, int list, double grade) {
    bottoms_[static_cast<std::size_t>(list)] = grade;
    knowledge_[ensure(obj)].set(list, grade);
  }
  void see_random(std::uint32_t obj, int list, double grade) {
    if (slot_[obj] < 0) throw PreconditionError("random access to an object never seen");
    knowledge_[static_cast<std::size_t>(slot_[obj])].set(list, grade);
  }

  void recompute() {
    const std::size_t n = objects_.size();
    worst_.resize(n);
    best_.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
      worst_[s] = worst_bound(*t_, knowledge_[s]);
      best_[s] = best_bound(*t_, knowledge_[s], bottoms_);
    }
    order_.resize(n);
    for (std::size_t s = 0; s < n; ++s) order_[s] = s;
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      if (worst_[a] != worst_[b]) return worst_[a] > worst_[b];
      if (best_[a] != best_[b]) return best_[a] > best_[b];
      return db_->object(objects_[a]).id < db_->object(objects_[b]).id;
    });
  }

  std::size_t seen() const { return objects_.size(); }
  double min_topk_worst() const { return worst_[order_[k_ - 1]]; }
  double threshold() const { return threshold_value(*t_, bottoms_); }

  // True when k objects are seen and nothing outside the current top k
  // (including the virtual unseen object) can still beat into it.
  bool halt_ready() const {
    if (objects_.size() < k_) return false;
    const double mk = min_topk_worst();
    for (std::size_t p = k_; p < order_.size(); ++p)
      if (best_[order_[p]] > mk) return false;
    if (objects_.size() < db_->size() && threshold() > mk) return false;
    return true;
  }

  // Max-B viable seen object that still has missing fields; ties by id.
  std::optional<std::uint32_t> pick_random_target() const {
    const double mk = objects_.size() >= k_ ? min_topk_worst()
                                            : -std::numeric_limits<double>::infinity();
    std::optional<std::size_t> bestslot;
    for (std::size_t s = 0; s < objects_.size(); ++s) {
      if (knowledge_[s].complete()) continue;
      if (!(best_[s] > mk)) continue;
      if (!bestslot || best_[s] > best_[*bestslot] ||
          (best_[s] == best_[*bestslot] &&
           db_->object(objects_[s]).id < db_->object(objects_[*bestslot]).id))
        bestslot = s;
    }
    if (!bestslot) return std::nullopt;
    return objects_[*bestslot];
  }

  const FieldKnowledge& knowledge_of(std::uint32_t obj) const {
    return knowledge_[static_cast<std::size_t>(slot_[obj])];
  }

  std::vector<TopKEntry> topk_result() const {
    std::vector<TopKEntry> out;
    for (std::size_t p = 0; p < k_ && p < order_.size(); ++p)
      out.push_back({db_->object(objects_[order_[p]]).id, std::nullopt});
    return out;
  }

 private:
  std::size_t ensure(std::uint32_t obj) {
    if (slot_[obj] < 0) {
      slot_[obj] = static_cast<std::int32_t>(objects_.size());
      objects_.push_back(obj);
      knowledge_.emplace_back(db_->num_lists());
    }
    return static_cast<std::size_t>(slot_[obj]);
  }

  const Database* db_;
  const AggregationFunction* t_;
  std::size_t k_;
  BottomValues bottoms_;
  std::vector<std::int32_t> slot_;
  std::vector<std::uint32_t> objects_;
  std::vector<FieldKnowledge> knowledge_;
  std::vector<double> worst_, best_;
  std::vector<std::size_t> order_;
};

enum class SortedOnlyMode { kNra, kCa, kIntermittent };

inline RunReport run_sorted_driven(const Database& db, const AggregationFunction& t, int k,
                                   const CostModel& model, SortedOnlyMode mode,
                                   const AlgorithmOptions& opt) {
  require_query(db, t, k);
  const int m = db.num_lists();
  std::size_t h = 0;
  if (mode != SortedOnlyMode::kNra) {
    if (model.random_cost < model.sorted_cost)
      throw PreconditionError(std::string(mode == SortedOnlyMode::kCa ? "ca" : "intermittent") +
                              " requires c_R >= c_S");
    h = static_cast<std::size_t>(std::floor(model.random_cost / model.sorted_cost));
  }
  CostedAccessor acc(db, model, opt.record_transcript);
  BoundTable table(db, t, k);

  // Pending random accesses in sighting order, grouped per (round, object).
  struct PendingGroup {
    std::uint32_t object;
    std::vector<int> sighted_lists;
  };
  std::deque<PendingGroup> pending;

  bool halted = false;
  std::size_t depth = 0;
  while (!halted && depth < db.size()) {
    std::vector<std::pair<std::uint32_t, int>> round_sightings;
    for (int i = 0; i < m; ++i) {
      auto e = acc.sorted_access(i);
      table.see_sorted(e->object, i, e->grade);
      round_sightings.emplace_back(e->object, i);
    }
    ++depth;
    if (mode == SortedOnlyMode::kIntermittent) {
      std::vector<PendingGroup> round_groups;
      for (auto [obj, list] : round_sightings) {
        bool merged = false;
        for (auto& g : round_groups) {
          if (g.object == obj) {
            g.sighted_lists.push_back(list);
            merged = true;
            break;
          }
        }
        if (!merged) round_groups.push_back({obj, {list}});
      }
      for (auto& g : round_groups) pending.push_back(std::move(g));
    }
    table.recompute();
    if (table.halt_ready()) {
      halted = true;
      break;
    }
    if (mode == SortedOnlyMode::kCa && h > 0 && depth % h == 0) {
      if (auto target = table.pick_random_target()) {
        const auto& kn = table.knowledge_of(*target);
        for (int j = 0; j < m; ++j)
          if (!kn.known[static_cast<std::size_t>(j)])
            table.see_random(*target, j, acc.random_access(*target, j));
        table.recompute();
        if (table.halt_ready()) halted = true;
      }
    } else if (mode == SortedOnlyMode::kIntermittent && h > 0 && depth % h == 0) {
      while (!pending.empty() && !halted) {
        PendingGroup g = std::move(pending.front());
        pending.pop_front();
        for (int sighted : g.sighted_lists)
          for (int j = 0; j < m; ++j)
            if (j != sighted) table.see_random(g.object, j, acc.random_access(g.object, j));
        table.recompute();
        if (table.halt_ready()) halted = true;
      }
    }
  }

  RunReport r;
  r.algorithm = mode == SortedOnlyMode::kNra ? "nra"
              : mode == SortedOnlyMode::kCa  ? "ca"
                                             : "intermittent";
  r.aggregation = t.name();
  r.k = k;
  r.cost_model = model;
  r.result = table.topk_result();
  r.stats = acc.stats();
  r.rounds = depth;
  r.halted_by_exhaustion = !halted;  // full exhaustion always satisfies the bound test
  r.transcript = acc.take_transcript();
  return r;
}

}  // namespace detail

inline RunReport run_nra(const Database& db, const AggregationFunction& t, int k,
                         const CostModel& model, const AlgorithmOptions& opt = {}) {
  return detail::run_sorted_driven(db, t, k, model, detail::SortedOnlyMode::kNra, opt);
}

// NRA plus, every floor(c_R/c_S) rounds, random access to all missing fields
// of the most promising viable object (skipped when no such object exists).
inline RunReport run_ca(const Database& db, const AggregationFunction& t, int k,
                        const CostModel& model, const AlgorithmOptions& opt = {}) {
  return detail::run_sorted_driven(db, t, k, model, detail::SortedOnlyMode::kCa, opt);
}

// Runs the threshold algorithm's random accesses in their original order but
// batched every floor(c_R/c_S) rounds, halting on the same bound test as NRA.
inline RunReport run_intermittent(const Database& db, const AggregationFunction& t, int k,
                                  const CostModel& model, const AlgorithmOptions& opt = {}) {
  return detail::run_sorted_driven(db, t, k, model, detail::SortedOnlyMode::kIntermittent, opt);
}

inline const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = {"naive", "fa",  "ta", "ta-theta",
                                                 "ta-z",  "nra", "ca", "intermittent"};
  return names;
}

// Name-based dispatch used by the CLI and comparison driver.
inline RunReport run_algorithm(const std::string& name, const Database& db,
                               const AggregationFunction& t, int k, const CostModel& model,
                               const AlgorithmOptions& opt = {}) {
  if (name == "naive") return run_naive(db, t, k, model, opt);
  if (name == "fa") return run_fa(db, t, k, model, opt);
  if (name == "ta")
    return opt.budget > 0 ? run_ta_early_stop(db, t, k, model, opt.budget, opt)
                          : run_ta(db, t, k, model, opt);
  if (name == "ta-theta") return run_ta_theta(db, t, k, model, opt.theta, opt);
  if (name == "ta-z") return run_ta_z(db, t, k, model, opt.z_lists, opt);
  if (name == "nra") return run_nra(db, t, k, model, opt);
  if (name == "ca") return run_ca(db, t, k, model, opt);
  if (name == "intermittent") return run_intermittent(db, t, k, model, opt);
  throw PreconditionError("unknown algorithm '" + name + "'");
}

}  // namespace topk
