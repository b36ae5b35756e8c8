#pragma once

// Access model for middleware-style top-k aggregation: m sorted lists over a
// common object set, each list readable top-down (sorted access) or by object
// name (random access), with per-access charging.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace topk {

using ObjectId = std::string;

// Raised when an input database (file or in-memory draft) breaks an invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an operation's precondition does not hold (bad k, bad cost
// model, unusable parameter combination). CLI maps these to exit code 3.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CostModel {
  double sorted_cost = 1.0;  // c_S, charged per sorted access
  double random_cost = 1.0;  // c_R, charged per random access

  void require_valid() const {
    if (!(sorted_cost > 0.0) || !(random_cost > 0.0))
      throw PreconditionError("cost model requires c_S > 0 and c_R > 0");
  }
};

struct DbObject {
  ObjectId id;
  std::vector<double> grades;  // one grade per list, grades[i] in [0,1]

  bool operator==(const DbObject&) const = default;
};

// Parsed but not yet validated database contents.
struct DatabaseDraft {
  int m = 0;
  std::vector<DbObject> objects;
  // Optional explicit orders, one per list, each a permutation of object ids
  // sorted by nonincreasing grade in that list.
  std::optional<std::vector<std::vector<ObjectId>>> list_orders;
};

// Appends human-readable invariant violations to `out`. With
// `require_distinctness`, duplicated grades within a list are violations too.
inline std::vector<std::string> validate_database(const DatabaseDraft& d,
                                                  bool require_distinctness = false);

// Immutable, always-valid database. List indices are 0-based in this API and
// 1-based in serialized transcripts, CLI flags and messages.
class Database {
 public:
  static Database from_draft(DatabaseDraft draft) {
    auto violations = validate_database(draft);
    if (!violations.empty()) {
      std::string msg = "invalid database:";
      for (const auto& v : violations) msg += "\n  " + v;
      throw ValidationError(msg);
    }
    Database db;
    db.m_ = draft.m;
    db.objects_ = std::move(draft.objects);
    db.index_.reserve(db.objects_.size());
    for (std::uint32_t i = 0; i < db.objects_.size(); ++i)
      db.index_.emplace(db.objects_[i].id, i);
    if (draft.list_orders) {
      db.orders_.resize(db.m_);
      for (int l = 0; l < db.m_; ++l) {
        db.orders_[l].reserve(db.objects_.size());
        for (const auto& id : (*draft.list_orders)[l])
          db.orders_[l].push_back(db.index_.at(id));
      }
    } else {
      db.orders_ = synthesize_orders(db.m_, db.objects_);
    }
    return db;
  }

  int num_lists() const { return m_; }
  std::size_t size() const { return objects_.size(); }

  const DbObject& object(std::size_t index) const { return objects_.at(index); }
  const std::vector<DbObject>& objects() const { return objects_; }

  double grade(std::size_t object_index, int list) const {
    return objects_[object_index].grades[static_cast<std::size_t>(list)];
  }

  // Object index at 0-based position `pos` of list `list`.
  std::uint32_t at(int list, std::size_t pos) const { return orders_[static_cast<std::size_t>(list)][pos]; }
  const std::vector<std::uint32_t>& order(int list) const { return orders_[static_cast<std::size_t>(list)]; }

  std::optional<std::uint32_t> find(const ObjectId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::uint32_t index_of(const ObjectId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw PreconditionError("unknown object id '" + id + "'");
    return it->second;
  }

  DatabaseDraft to_draft() const {
    DatabaseDraft d;
    d.m = m_;
    d.objects = objects_;
    std::vector<std::vector<ObjectId>> orders(static_cast<std::size_t>(m_));
    for (int l = 0; l < m_; ++l) {
      orders[static_cast<std::size_t>(l)].reserve(objects_.size());
      for (auto idx : orders_[static_cast<std::size_t>(l)])
        orders[static_cast<std::size_t>(l)].push_back(objects_[idx].id);
    }
    d.list_orders = std::move(orders);
    return d;
  }

  bool operator==(const Database& other) const {
    return m_ == other.m_ && objects_ == other.objects_ && orders_ == other.orders_;
  }

  // Descending grade, ties by ObjectId ascending (lexicographic).
  static std::vector<std::vector<std::uint32_t>> synthesize_orders(
      int m, const std::vector<DbObject>& objects) {
    std::vector<std::vector<std::uint32_t>> orders(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l) {
      auto& ord = orders[static_cast<std::size_t>(l)];
      ord.resize(objects.size());
      for (std::uint32_t i = 0; i < objects.size(); ++i) ord[i] = i;
      std::stable_sort(ord.begin(), ord.end(), [&](std::uint32_t a, std::uint32_t b) {
        double ga = objects[a].grades[static_cast<std::size_t>(l)];
        double gb = objects[b].grades[static_cast<std::size_t>(l)];
        if (ga != gb) return ga > gb;
        return objects[a].id < objects[b].id;
      });
    }
    return orders;
  }

 private:
  Database() = default;
  int m_ = 0;
  std::vector<DbObject> objects_;
  std::vector<std::vector<std::uint32_t>> orders_;
  std::unordered_map<ObjectId, std::uint32_t> index_;
};

inline std::vector<std::string> validate_database(const DatabaseDraft& d,
                                                  bool require_distinctness) {
  std::vector<std::string> out;
  if (d.m < 1) out.push_back("m >= 1 violated: m = " + std::to_string(d.m));
  if (d.objects.empty()) out.push_back("N >= 1 violated: database has no objects");
  std::unordered_map<ObjectId, std::size_t> seen_ids;
  for (std::size_t i = 0; i < d.objects.size(); ++i) {
    const auto& o = d.objects[i];
    if (o.id.empty()) out.push_back("object #" + std::to_string(i) + " has an empty id");
    if (!seen_ids.emplace(o.id, i).second)
      out.push_back("duplicate object id '" + o.id + "'");
    if (d.m >= 1 && o.grades.size() != static_cast<std::size_t>(d.m))
      out.push_back("object '" + o.id + "' has " + std::to_string(o.grades.size()) +
                    " grades, expected " + std::to_string(d.m));
    for (std::size_t l = 0; l < o.grades.size(); ++l) {
      double g = o.grades[l];
      if (!(g >= 0.0 && g <= 1.0))  // also rejects NaN
        out.push_back("object '" + o.id + "' grade out of [0,1] in list " +
                      std::to_string(l + 1));
    }
  }
  if (!out.empty()) return out;  // structural problems make the rest unreliable

  if (d.list_orders) {
    if (d.list_orders->size() != static_cast<std::size_t>(d.m)) {
      out.push_back("list_orders has " + std::to_string(d.list_orders->size()) +
                    " lists, expected " + std::to_string(d.m));
      return out;
    }
    for (int l = 0; l < d.m; ++l) {
      const auto& ord = (*d.list_orders)[static_cast<std::size_t>(l)];
      if (ord.size() != d.objects.size()) {
        out.push_back("list " + std::to_string(l + 1) + " order is not a permutation: has " +
                      std::to_string(ord.size()) + " entries, expected " +
                      std::to_string(d.objects.size()));
        continue;
      }
      std::unordered_map<ObjectId, int> counts;
      bool perm_ok = true;
      for (const auto& id : ord) {
        if (!seen_ids.count(id)) {
          out.push_back("list " + std::to_string(l + 1) + " order names unknown object '" + id + "'");
          perm_ok = false;
          break;
        }
        if (++counts[id] > 1) {
          out.push_back("list " + std::to_string(l + 1) + " order repeats object '" + id + "'");
          perm_ok = false;
          break;
        }
      }
      if (!perm_ok) continue;
      double prev = 2.0;
      for (std::size_t p = 0; p < ord.size(); ++p) {
        double g = d.objects[seen_ids.at(ord[p])].grades[static_cast<std::size_t>(l)];
        if (g > prev) {
          out.push_back("list " + std::to_string(l + 1) + " grades increase at position " +
                        std::to_string(p + 1));
          break;
        }
        prev = g;
      }
    }
  }

  if (require_distinctness) {
    for (int l = 0; l < d.m; ++l) {
      std::unordered_map<double, ObjectId> by_grade;
      for (const auto& o : d.objects) {
        double g = o.grades[static_cast<std::size_t>(l)];
        auto it = by_grade.find(g);
        if (it != by_grade.end()) {
          out.push_back("list " + std::to_string(l + 1) + " contains duplicate grade (objects '" +
                        it->second + "', '" + o.id + "')");
        } else {
          by_grade.emplace(g, o.id);
        }
      }
    }
  }
  return out;
}

enum class AccessKind : std::uint8_t { kSorted, kRandom };

struct AccessEvent {
  AccessKind kind = AccessKind::kSorted;
  int list = 0;                // 0-based
  std::uint32_t object = 0;    // index into Database::objects()
  double grade = 0.0;
  std::uint32_t position = 0;  // 1-based list position; 0 for random accesses

  bool operator==(const AccessEvent&) const = default;
};

struct AccessStats {
  std::size_t sorted_count = 0;
  std::size_t random_count = 0;
  std::vector<std::size_t> depth_per_list;  // cursor depth reached in each list

  double middleware_cost(const CostModel& c) const {
    return static_cast<double>(sorted_count) * c.sorted_cost +
           static_cast<double>(random_count) * c.random_cost;
  }
};

struct SortedEntry {
  std::uint32_t object;
  double grade;
  std::uint32_t position;  // 1-based
};

// Charges and records every access. Sorted cursors only move forward; random
// accesses never move them and repeated accesses are re-charged.
class CostedAccessor {
 public:
  CostedAccessor(const Database& db, CostModel model, bool record_transcript = true)
      : db_(&db), model_(model), record_(record_transcript) {
    model_.require_valid();
    cursors_.assign(static_cast<std::size_t>(db.num_lists()), 0);
    stats_.depth_per_list.assign(static_cast<std::size_t>(db.num_lists()), 0);
  }

  // Next (object, grade) from the top of `list`; nullopt once exhausted.
  // Exhaustion probes are not charged.
  std::optional<SortedEntry> sorted_access(int list) {
    check_list(list);
    auto& cur = cursors_[static_cast<std::size_t>(list)];
    if (cur >= db_->size()) return std::nullopt;
    std::uint32_t obj = db_->at(list, cur);
    ++cur;
    ++stats_.sorted_count;
    stats_.depth_per_list[static_cast<std::size_t>(list)] = cur;
    SortedEntry e{obj, db_->grade(obj, list), static_cast<std::uint32_t>(cur)};
    if (record_)
      transcript_.push_back({AccessKind::kSorted, list, e.object, e.grade, e.position});
    return e;
  }

  double random_access(std::uint32_t object_index, int list) {
    check_list(list);
    if (object_index >= db_->size())
      throw PreconditionError("random access to unknown object index");
    ++stats_.random_count;
    double g = db_->grade(object_index, list);
    if (record_) transcript_.push_back({AccessKind::kRandom, list, object_index, g, 0});
    return g;
  }

  double random_access(const ObjectId& id, int list) {
    return random_access(db_->index_of(id), list);
  }

  bool exhausted(int list) const {
    return cursors_[static_cast<std::size_t>(list)] >= db_->size();
  }
  std::size_t depth(int list) const { return cursors_[static_cast<std::size_t>(list)]; }
  const AccessStats& stats() const { return stats_; }
  double cost() const { return stats_.middleware_cost(model_); }
  const CostModel& model() const { return model_; }
  const std::vector<AccessEvent>& transcript() const { return transcript_; }
  std::vector<AccessEvent> take_transcript() { return std::move(transcript_); }

 private:
  void check_list(int list) const {
    if (list < 0 || list >= db_->num_lists())
      throw PreconditionError("list index out of range: " + std::to_string(list + 1));
  }

  const Database* db_;
  CostModel model_;
  bool record_;
  std::vector<std::size_t> cursors_;
  AccessStats stats_;
  std::vector<AccessEvent> transcript_;
};

// Replays `events` against `db`, checking positions, objects and grades.
// Throws PreconditionError on the first mismatch.
inline void replay_transcript(const Database& db, const std::vector<AccessEvent>& events) {
  std::vector<std::size_t> cursors(static_cast<std::size_t>(db.num_lists()), 0);
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    auto fail = [&](const std::string& why) {
      throw PreconditionError("transcript not replayable at event " + std::to_string(i + 1) +
                              ": " + why);
    };
    if (e.list < 0 || e.list >= db.num_lists()) fail("list index out of range");
    if (e.object >= db.size()) fail("unknown object");
    if (e.kind == AccessKind::kSorted) {
      auto& cur = cursors[static_cast<std::size_t>(e.list)];
      if (cur >= db.size()) fail("sorted access past the end of the list");
      if (e.position != cur + 1) fail("sorted access skips positions");
      if (db.at(e.list, cur) != e.object) fail("object does not match list order");
      ++cur;
    }
    if (db.grade(e.object, e.list) != e.grade) fail("grade does not match the database");
  }
}

}  // namespace topk
