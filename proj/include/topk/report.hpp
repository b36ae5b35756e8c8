#pragma once

// Run results and their serialized forms.

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "topk/core.hpp"

namespace topk {

struct TopKEntry {
  ObjectId id;
  std::optional<double> grade;  // absent when the algorithm never learns exact grades

  bool operator==(const TopKEntry&) const = default;
};

struct RunReport {
  std::string algorithm;
  std::string aggregation;
  int k = 0;
  CostModel cost_model;
  std::vector<TopKEntry> result;  // exactly k entries
  AccessStats stats;
  std::size_t rounds = 0;  // lockstep depth at halt
  std::optional<double> theta_guarantee;  // +inf encodes "unbounded"
  bool halted_by_exhaustion = false;
  std::vector<AccessEvent> transcript;  // in-memory only, not serialized

  double cost() const { return stats.middleware_cost(cost_model); }
};

// %.17g: enough digits to round-trip any finite double.
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline nlohmann::json run_report_to_json(const RunReport& r) {
  nlohmann::json j;
  j["schema"] = "topk-run-report/1";
  j["algorithm"] = r.algorithm;
  j["aggregation"] = r.aggregation;
  j["k"] = r.k;
  j["cost_model"] = {{"cs", r.cost_model.sorted_cost}, {"cr", r.cost_model.random_cost}};
  auto& res = j["result"] = nlohmann::json::array();
  for (const auto& e : r.result) {
    nlohmann::json je;
    je["id"] = e.id;
    if (e.grade)
      je["grade"] = *e.grade;
    else
      je["grade"] = nullptr;
    res.push_back(std::move(je));
  }
  j["stats"] = {{"sorted", r.stats.sorted_count},
                {"random", r.stats.random_count},
                {"depth_per_list", r.stats.depth_per_list},
                {"cost", r.cost()}};
  j["rounds"] = r.rounds;
  j["halted_by_exhaustion"] = r.halted_by_exhaustion;
  if (r.theta_guarantee) {
    if (std::isinf(*r.theta_guarantee))
      j["theta_guarantee"] = "unbounded";
    else
      j["theta_guarantee"] = *r.theta_guarantee;
  } else {
    j["theta_guarantee"] = nullptr;
  }
  return j;
}

inline nlohmann::json transcript_to_json(const Database& db,
                                         const std::vector<AccessEvent>& events) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : events) {
    nlohmann::json je;
    je["kind"] = e.kind == AccessKind::kSorted ? "sorted" : "random";
    je["list"] = e.list + 1;
    je["object"] = db.object(e.object).id;
    je["grade"] = e.grade;
    if (e.kind == AccessKind::kSorted) je["position"] = e.position;
    arr.push_back(std::move(je));
  }
  return arr;
}

inline std::string theta_to_string(const std::optional<double>& theta) {
  if (!theta) return "";
  if (std::isinf(*theta)) return "unbounded";
  return format_real(*theta);
}

// Fixed column order: algorithm,s,r,cost,depth,result,theta
inline std::string run_report_csv_header() { return "algorithm,s,r,cost,depth,result,theta"; }

inline std::string run_report_to_csv_row(const RunReport& r) {
  std::string ids;
  for (const auto& e : r.result) {
    if (!ids.empty()) ids += ';';
    ids += e.id;
  }
  return r.algorithm + "," + std::to_string(r.stats.sorted_count) + "," +
         std::to_string(r.stats.random_count) + "," + format_real(r.cost()) + "," +
         std::to_string(r.rounds) + "," + ids + "," + theta_to_string(r.theta_guarantee);
}

}  // namespace topk
