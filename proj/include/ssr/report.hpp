#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssr/errors.hpp"

namespace ssr {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr const char* kEngineVersion = "0.3.0";

/** One disagreement between a computed and a claimed value. */
struct Mismatch {
  std::string where;
  std::string expected;
  std::string got;
  std::string witness;
};

struct Check {
  std::string name;
  bool pass = true;
  std::string detail;
  std::vector<Mismatch> mismatches;
  std::size_t mismatch_count = 0;  // may exceed mismatches.size() after capping
  json data = json::object();

  static constexpr std::size_t kMaxRows = 40;

  void fail(Mismatch m) {
    pass = false;
    ++mismatch_count;
    if (mismatches.size() < kMaxRows) mismatches.push_back(std::move(m));
  }
  void fail(const std::string& where, const std::string& expected, const std::string& got,
            const std::string& witness = "") {
    fail(Mismatch{where, expected, got, witness});
  }
};

/** Outcome of one scenario: a list of checks plus a verdict. */
struct CheckReport {
  std::string scenario;
  bool conditional = false;  // hypothesis-dependent; never counts as a failure
  std::string note;
  std::vector<Check> checks;
  json data = json::object();
  double seconds = 0;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
  std::string verdict() const {
    if (!pass()) return "fail";
    return conditional ? "conditional" : "pass";
  }
  Check& add(Check c) {
    checks.push_back(std::move(c));
    return checks.back();
  }
  void merge(const CheckReport& o, const std::string& prefix = "") {
    for (auto c : o.checks) {
      if (!prefix.empty()) c.name = prefix + "/" + c.name;
      checks.push_back(std::move(c));
    }
  }
};

inline json to_json(const Mismatch& m) {
  json j = {{"where", m.where}, {"expected", m.expected}, {"got", m.got}};
  if (!m.witness.empty()) j["witness"] = m.witness;
  return j;
}

inline json to_json(const Check& c) {
  json j = {{"name", c.name}, {"pass", c.pass}};
  if (!c.detail.empty()) j["detail"] = c.detail;
  if (c.mismatch_count) {
    j["mismatch_count"] = c.mismatch_count;
    json rows = json::array();
    for (const auto& m : c.mismatches) rows.push_back(to_json(m));
    j["mismatches"] = rows;
  }
  if (!c.data.empty()) j["data"] = c.data;
  return j;
}

inline json to_json(const CheckReport& r, bool timings) {
  json j = {{"scenario", r.scenario}, {"verdict", r.verdict()}};
  if (!r.note.empty()) j["note"] = r.note;
  json cs = json::array();
  for (const auto& c : r.checks) cs.push_back(to_json(c));
  j["checks"] = cs;
  if (!r.data.empty()) j["data"] = r.data;
  if (timings) j["seconds"] = r.seconds;
  return j;
}

/** Full run report. */
struct Report {
  json config = json::object();
  std::vector<CheckReport> scenarios;
  bool timings = false;

  bool pass() const {
    return std::all_of(scenarios.begin(), scenarios.end(), [](const CheckReport& r) { return r.pass(); });
  }

  json to_json() const {
    json j = {{"schema_version", kSchemaVersion}, {"engine_version", kEngineVersion}, {"config", config}};
    json arr = json::array();
    for (const auto& s : scenarios) arr.push_back(ssr::to_json(s, timings));
    j["scenarios"] = arr;
    j["verdict"] = pass() ? "pass" : "fail";
    return j;
  }
};

/** Writes through a temporary file and renames, so readers never see a partial report. */
inline void write_atomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << text;
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

namespace detail {

inline void flatten(const json& j, const std::string& path, std::map<std::string, std::string>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path + "/" + it.key(), out);
  } else if (j.is_array()) {
    // checks and scenarios are keyed by name so reordering is not a diff
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto& e = j[i];
      std::string key = std::to_string(i);
      if (e.is_object()) {
        if (e.contains("scenario")) key = e["scenario"].get<std::string>();
        else if (e.contains("name")) key = e["name"].get<std::string>();
        else if (e.contains("where")) key = e["where"].get<std::string>();
      }
      flatten(e, path + "/" + key, out);
    }
  } else {
    out[path] = j.dump();
  }
}

}  // namespace detail

/**
 * Line diff of two reports, keyed by stable paths. Timing fields are
 * ignored. Empty output means the reports agree.
 */
inline std::string diff_reports(const json& a, const json& b) {
  auto version = [](const json& j) {
    if (!j.is_object() || !j.contains("schema_version")) throw SchemaMismatch("report without schema_version");
    return j["schema_version"].get<std::string>();
  };
  if (version(a) != version(b))
    throw SchemaMismatch("schema_version " + version(a) + " vs " + version(b));
  std::map<std::string, std::string> fa, fb;
  detail::flatten(a, "", fa);
  detail::flatten(b, "", fb);
  auto skip = [](const std::string& k) {
    return k.size() >= 8 && k.compare(k.size() - 8, 8, "/seconds") == 0;
  };
  std::ostringstream out;
  auto ia = fa.begin();
  auto ib = fb.begin();
  while (ia != fa.end() || ib != fb.end()) {
    if (ib == fb.end() || (ia != fa.end() && ia->first < ib->first)) {
      if (!skip(ia->first)) out << "- " << ia->first << " = " << ia->second << "\n";
      ++ia;
    } else if (ia == fa.end() || ib->first < ia->first) {
      if (!skip(ib->first)) out << "+ " << ib->first << " = " << ib->second << "\n";
      ++ib;
    } else {
      if (ia->second != ib->second && !skip(ia->first))
        out << "~ " << ia->first << ": " << ia->second << " -> " << ib->second << "\n";
      ++ia;
      ++ib;
    }
  }
  return out.str();
}

}  // namespace ssr
