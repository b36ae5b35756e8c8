#pragma once

// JSON (de)serialization for databases.
//
// {"m": 2,
//  "objects": [{"id": "1", "grades": [1.0, 0.0]}, ...],
//  "list_orders": [["1", "2"], ["2", "1"]]}   // optional
//
// Missing list_orders are synthesized by descending grade, ties by id.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "topk/core.hpp"

namespace topk {

inline DatabaseDraft draft_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("database file: top level must be an object");
  if (j.contains("schema") &&
      (!j["schema"].is_string() || j["schema"].get<std::string>() != "topk-database/1"))
    throw ValidationError("database file: unsupported schema tag");
  DatabaseDraft d;
  if (!j.contains("m") || !j["m"].is_number_integer())
    throw ValidationError("database file: missing integer field 'm'");
  d.m = j["m"].get<int>();
  if (!j.contains("objects") || !j["objects"].is_array())
    throw ValidationError("database file: missing array field 'objects'");
  for (const auto& jo : j["objects"]) {
    if (!jo.is_object() || !jo.contains("id") || !jo["id"].is_string() ||
        !jo.contains("grades") || !jo["grades"].is_array())
      throw ValidationError("database file: each object needs a string 'id' and array 'grades'");
    DbObject o;
    o.id = jo["id"].get<std::string>();
    for (const auto& g : jo["grades"]) {
      if (!g.is_number()) throw ValidationError("database file: grades must be numbers");
      o.grades.push_back(g.get<double>());
    }
    d.objects.push_back(std::move(o));
  }
  if (j.contains("list_orders")) {
    if (!j["list_orders"].is_array())
      throw ValidationError("database file: 'list_orders' must be an array of arrays");
    std::vector<std::vector<ObjectId>> orders;
    for (const auto& jl : j["list_orders"]) {
      if (!jl.is_array())
        throw ValidationError("database file: 'list_orders' must be an array of arrays");
      std::vector<ObjectId> ord;
      for (const auto& id : jl) {
        if (!id.is_string())
          throw ValidationError("database file: list orders must contain object ids");
        ord.push_back(id.get<std::string>());
      }
      orders.push_back(std::move(ord));
    }
    d.list_orders = std::move(orders);
  }
  return d;
}

inline Database load_database_json(const nlohmann::json& j) {
  return Database::from_draft(draft_from_json(j));
}

inline Database load_database_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("database file: JSON parse error: ") + e.what());
  }
  return load_database_json(j);
}

inline Database load_database_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open database file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_database_string(buf.str());
}

inline nlohmann::json database_to_json(const Database& db) {
  nlohmann::json j;
  j["schema"] = "topk-database/1";
  j["m"] = db.num_lists();
  auto& objs = j["objects"] = nlohmann::json::array();
  for (const auto& o : db.objects()) {
    nlohmann::json jo;
    jo["id"] = o.id;
    jo["grades"] = o.grades;
    objs.push_back(std::move(jo));
  }
  auto& orders = j["list_orders"] = nlohmann::json::array();
  for (int l = 0; l < db.num_lists(); ++l) {
    nlohmann::json jl = nlohmann::json::array();
    for (auto idx : db.order(l)) jl.push_back(db.object(idx).id);
    orders.push_back(std::move(jl));
  }
  return j;
}

inline std::string save_database(const Database& db) { return database_to_json(db).dump(2) + "\n"; }

inline void save_database_file(const Database& db, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write database file '" + path + "'");
  out << save_database(db);
}

// FNV-1a, used to fingerprint database bytes and generator specs.
inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

// Fingerprint of the canonical serialized form; stable across load/save.
inline std::string database_digest(const Database& db) {
  return hex64(fnv1a(database_to_json(db).dump()));
}

}  // namespace topk
