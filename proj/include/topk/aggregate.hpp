#pragma once

// Monotone aggregation functions and the worst/best bound calculus used by
// the no-random-access and combined algorithms.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "topk/core.hpp"

namespace topk {

// Capability flags are declared, not inferred; algorithms never branch on
// them, they exist for validation and analysis.
//   strict: t(x) = 1 exactly when every x_i = 1.
//   strictly_monotone: x_i < y_i for all i implies t(x) < t(y).
//   strictly_monotone_each_arg: raising any single argument (others fixed)
//   strictly raises t.
class AggregationFunction {
 public:
  AggregationFunction() = default;
  AggregationFunction(std::string name, int arity, bool strict, bool strictly_monotone,
                      bool strictly_monotone_each_arg,
                      std::function<double(std::span<const double>)> fn)
      : name_(std::move(name)),
        arity_(arity),
        strict_(strict),
        strictly_monotone_(strictly_monotone),
        strictly_monotone_each_arg_(strictly_monotone_each_arg),
        fn_(std::move(fn)) {}

  const std::string& name() const { return name_; }
  int arity() const { return arity_; }
  bool strict() const { return strict_; }
  bool strictly_monotone() const { return strictly_monotone_; }
  bool strictly_monotone_each_arg() const { return strictly_monotone_each_arg_; }

  double operator()(std::span<const double> args) const {
    if (static_cast<int>(args.size()) != arity_)
      throw PreconditionError("aggregation '" + name_ + "' expects " + std::to_string(arity_) +
                              " arguments, got " + std::to_string(args.size()));
    return fn_(args);
  }
  double operator()(const std::vector<double>& args) const {
    return (*this)(std::span<const double>(args.data(), args.size()));
  }

 private:
  std::string name_;
  int arity_ = 0;
  bool strict_ = false;
  bool strictly_monotone_ = false;
  bool strictly_monotone_each_arg_ = false;
  std::function<double(std::span<const double>)> fn_;
};

namespace detail {

inline double agg_min(std::span<const double> x) {
  double v = x[0];
  for (double g : x) v = std::min(v, g);
  return v;
}
inline double agg_max(std::span<const double> x) {
  double v = x[0];
  for (double g : x) v = std::max(v, g);
  return v;
}
inline double agg_sum(std::span<const double> x) {
  double v = 0.0;
  for (double g : x) v += g;  // fixed left-to-right order keeps results bit-stable
  return v;
}
inline double agg_avg(std::span<const double> x) {
  return agg_sum(x) / static_cast<double>(x.size());
}
inline double agg_product(std::span<const double> x) {
  double v = 1.0;
  for (double g : x) v *= g;
  return v;
}
// Lower median: the element of rank ceil(m/2) counted from the bottom.
inline double agg_median(std::span<const double> x) {
  std::vector<double> tmp(x.begin(), x.end());
  std::sort(tmp.begin(), tmp.end());
  return tmp[(tmp.size() - 1) / 2];
}
inline double agg_two_plus_rest_min(std::span<const double> x) {
  double v = x[0] + x[1];
  for (std::size_t i = 2; i < x.size(); ++i) v = std::min(v, x[i]);
  return v;
}
// min(x, y) when the last argument is exactly 1, else min(x, y, z) / 2.
// Monotone but discontinuous in the last argument.
inline double agg_gated_min(std::span<const double> x) {
  if (x[2] == 1.0) return std::min(x[0], x[1]);
  return std::min(std::min(x[0], x[1]), x[2]) / 2.0;
}

}  // namespace detail

// Builtins: min, max, avg, sum, median, product, eq5 (min(x1+x2, x3..xm),
// m >= 3), example-7-3 (gated min, m = 3 only).
inline AggregationFunction builtin_aggregation(const std::string& name, int m) {
  if (m < 1) throw PreconditionError("aggregation arity must be at least 1");
  if (name == "min")
    return {name, m, /*strict=*/true, /*sm=*/true, /*sm_each=*/false, detail::agg_min};
  if (name == "max")
    return {name, m, /*strict=*/false, /*sm=*/true, /*sm_each=*/false, detail::agg_max};
  if (name == "avg")
    return {name, m, /*strict=*/false, /*sm=*/true, /*sm_each=*/true, detail::agg_avg};
  if (name == "sum")
    return {name, m, /*strict=*/false, /*sm=*/true, /*sm_each=*/true, detail::agg_sum};
  if (name == "median")
    return {name, m, /*strict=*/false, /*sm=*/false, /*sm_each=*/false, detail::agg_median};
  if (name == "product")
    return {name, m, /*strict=*/true, /*sm=*/false, /*sm_each=*/false, detail::agg_product};
  if (name == "eq5") {
    if (m < 3) throw PreconditionError("aggregation 'eq5' requires m >= 3");
    return {name, m, /*strict=*/false, /*sm=*/true, /*sm_each=*/false,
            detail::agg_two_plus_rest_min};
  }
  if (name == "example-7-3") {
    if (m != 3) throw PreconditionError("aggregation 'example-7-3' requires m = 3");
    return {name, m, /*strict=*/true, /*sm=*/true, /*sm_each=*/false, detail::agg_gated_min};
  }
  throw PreconditionError("unknown aggregation '" + name + "'");
}

inline const std::vector<std::string>& builtin_aggregation_names() {
  static const std::vector<std::string> names = {"min",    "max",     "avg", "sum",
                                                 "median", "product", "eq5", "example-7-3"};
  return names;
}

// Which fields of one object are known, and their values. Unknown slots hold 0.
struct FieldKnowledge {
  std::vector<double> value;
  std::vector<bool> known;

  explicit FieldKnowledge(int m = 0)
      : value(static_cast<std::size_t>(m), 0.0), known(static_cast<std::size_t>(m), false) {}

  void set(int list, double grade) {
    value[static_cast<std::size_t>(list)] = grade;
    known[static_cast<std::size_t>(list)] = true;
  }
  bool complete() const {
    for (bool b : known)
      if (!b) return false;
    return true;
  }
  int known_count() const {
    int n = 0;
    for (bool b : known) n += b ? 1 : 0;
    return n;
  }
};

// Last grade seen under sorted access per list; 1 for lists never accessed.
using BottomValues = std::vector<double>;

inline BottomValues initial_bottoms(int m) {
  return BottomValues(static_cast<std::size_t>(m), 1.0);
}

// Lower bound on the object's grade: unknown fields pinned to 0.
inline double worst_bound(const AggregationFunction& t, const FieldKnowledge& k) {
  std::vector<double> args(k.value.size());
  for (std::size_t i = 0; i < args.size(); ++i) args[i] = k.known[i] ? k.value[i] : 0.0;
  return t(args);
}

// Upper bound: unknown fields pinned to the list's bottom value.
inline double best_bound(const AggregationFunction& t, const FieldKnowledge& k,
                         const BottomValues& bottoms) {
  std::vector<double> args(k.value.size());
  for (std::size_t i = 0; i < args.size(); ++i) args[i] = k.known[i] ? k.value[i] : bottoms[i];
  return t(args);
}

// Upper bound on every unseen object's grade.
inline double threshold_value(const AggregationFunction& t, const BottomValues& bottoms) {
  return t(bottoms);
}

}  // namespace topk
