#pragma once

#include <chrono>
#include <fstream>
#include <functional>
#include <future>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ssr/scenarios/gamma.hpp"
#include "ssr/scenarios/kthy.hpp"
#include "ssr/scenarios/kz.hpp"
#include "ssr/scenarios/tc.hpp"
#include "ssr/scenarios/thh.hpp"
#include "ssr/scenarios/towers.hpp"

namespace ssr::scen {

struct RunConfig {
  u32 p = 5;
  std::optional<std::pair<i64, i64>> window;      // total degree; scenario default otherwise
  std::optional<std::pair<i64, i64>> filtration;  // towers only
  std::optional<std::uint64_t> seed;
  bool p3_deep_pages = false;
  i64 cutoff = 200;  // TC and K
  int s1_triples = 1;
  std::string presentation;  // path of a ring config for the "presentation" scenario

  void validate() const {
    if (p < 3 || !is_prime(p)) throw ConfigError("prime must be an odd prime, got " + std::to_string(p));
    if (window && window->first > window->second) throw ConfigError("empty degree window");
    if (filtration && filtration->first > filtration->second) throw ConfigError("empty filtration window");
    if (cutoff < 2 * i64(p)) throw ConfigError("cutoff below 2p");
    if (s1_triples < 1) throw ConfigError("circle replay needs at least one triple");
  }

  json to_json() const {
    json j = {{"prime", p}, {"cutoff", cutoff}, {"s1_triples", s1_triples}, {"p3_deep_pages", p3_deep_pages}};
    if (window) j["window"] = {window->first, window->second};
    if (filtration) j["filtration"] = {filtration->first, filtration->second};
    if (seed) j["scalar_seed"] = *seed;
    if (!presentation.empty()) j["presentation"] = presentation;
    return j;
  }
};

/** A scenario's report plus the replayed tower, kept for charts. */
struct ScenarioOutput {
  CheckReport report;
  std::shared_ptr<const Tower> tower;
  Window window;
};

struct ScenarioInfo {
  std::string name;
  std::string summary;
  std::function<ScenarioOutput(const RunConfig&)> run;
  std::function<bool(const RunConfig&)> in_default = [](const RunConfig&) { return true; };
};

namespace detail {

inline std::pair<i64, i64> degrees_or(const RunConfig& c, i64 lo, i64 hi) { return c.window.value_or(std::make_pair(lo, hi)); }

inline ScenarioOutput tower_scenario(const RunConfig& c, int n, bool fixed, i64 half_width) {
  TowerConfig tc;
  tc.p = c.p;
  tc.n = n;
  tc.fixed = fixed;
  tc.seed = c.seed;
  if (n == 0) tc.triples = c.s1_triples;
  auto tw = std::make_shared<Tower>(build_tower(tc));
  auto [lo, hi] = degrees_or(c, -half_width, half_width);
  Window win = tower_window(*tw, lo, hi);
  if (c.filtration) win.s_lo = c.filtration->first, win.s_hi = c.filtration->second;
  TowerRunOptions o;
  o.win = win;
  if (n == 0) {
    // the stated E-infinity is reached once every later differential is longer than the distance to s = 0
    const i64 S = 2 * r_of(2 * tc.triples + 1, c.p) - std::max(std::abs(lo), std::abs(hi)) - 2;
    if (S >= 0) o.region = Window{std::max(-S, win.s_lo), std::min(S, win.s_hi), lo, hi};
  }
  ScenarioOutput out{run_tower(*tw, o), tw, win};
  if (n == 1 && !fixed) {
    const int P = int(c.p);
    Check k = check_collapse(tw->pages.back(), 2 * P * P + 2, 4 * P * P, Window::degrees(lo, hi));
    k.name = "no differentials of length 2p^2+2..4p^2 on the last page";
    out.report.add(k);
  }
  return out;
}

inline void require_p3(const RunConfig& c) {
  if (c.p != 3) throw ConfigError("the C_{p^3} replays run at p = 3");
  if (!c.p3_deep_pages) throw ConfigError("the C_{p^3} replays need --p3-deep-pages");
}

}  // namespace detail

inline const std::vector<ScenarioInfo>& registry() {
  static const std::vector<ScenarioInfo> all = [] {
    std::vector<ScenarioInfo> v;
    v.push_back({"rn", "the r(n) table and recursion", [](const RunConfig& c) {
                   return ScenarioOutput{scenario_rn(c.p), nullptr, {}};
                 }});
    v.push_back({"thh", "THH presentation health and its tensor description", [](const RunConfig& c) {
                   return ScenarioOutput{scenario_thh(c.p, std::min<i64>(c.cutoff, 120)), nullptr, {}};
                 }});
    v.push_back({"cp-tate", "Tate spectral sequence for C_p", [](const RunConfig& c) {
                   return detail::tower_scenario(c, 1, false, 60);
                 }});
    v.push_back({"cp-fixed", "mu-inverted homotopy fixed points for C_p", [](const RunConfig& c) {
                   return detail::tower_scenario(c, 1, true, 60);
                 }});
    v.push_back({"cp2-tate", "Tate spectral sequence for C_{p^2}", [](const RunConfig& c) {
                   return detail::tower_scenario(c, 2, false, 40);
                 }});
    v.push_back({"cp2-fixed", "mu-inverted homotopy fixed points for C_{p^2}", [](const RunConfig& c) {
                   return detail::tower_scenario(c, 2, true, 40);
                 }});
    auto deep = [](const RunConfig& c) { return c.p == 3 && c.p3_deep_pages; };
    v.push_back({"cp3-tate", "Tate spectral sequence for C_{p^3} (p = 3)",
                 [](const RunConfig& c) {
                   detail::require_p3(c);
                   return detail::tower_scenario(c, 3, false, 40);
                 },
                 deep});
    v.push_back({"cp3-fixed", "mu-inverted homotopy fixed points for C_{p^3} (p = 3)",
                 [](const RunConfig& c) {
                   detail::require_p3(c);
                   return detail::tower_scenario(c, 3, true, 40);
                 },
                 deep});
    v.push_back({"s1-tate", "Tate spectral sequence for the circle", [](const RunConfig& c) {
                   return detail::tower_scenario(c, 0, false, 40);
                 }});
    v.push_back({"gamma1", "last C_p Tate page against THH with mu inverted", [](const RunConfig& c) {
                   TowerConfig tc;
                   tc.p = c.p;
                   tc.seed = c.seed;
                   auto tw = std::make_shared<Tower>(build_tower(tc));
                   auto rep = check_gamma1(*tw, detail::degrees_or(c, 0, 60).second);
                   return ScenarioOutput{rep, nullptr, {}};
                 }});
    v.push_back({"tc", "TC from the restriction tower", [](const RunConfig& c) {
                   TcOptions o;
                   o.p = c.p;
                   o.cutoff = c.cutoff;
                   o.seed = c.seed;
                   return ScenarioOutput{assemble_tc(o).report, nullptr, {}};
                 }});
    v.push_back({"k", "algebraic K-theory from TC", [](const RunConfig& c) {
                   KOptions o;
                   o.tc.p = c.p;
                   o.tc.cutoff = c.cutoff;
                   o.tc.seed = c.seed;
                   return ScenarioOutput{assemble_k(o, assemble_tc(o.tc)).report, nullptr, {}};
                 }});
    v.push_back({"kup", "localization sequence feasibility", [](const RunConfig& c) {
                   return ScenarioOutput{assemble_kup(c.p, c.cutoff), nullptr, {}};
                 }});
    v.push_back({"kz", "Eilenberg-MacLane homology, bar Tor and the RW presentations", [](const RunConfig& c) {
                   return ScenarioOutput{scenario_kz(c.p), nullptr, {}};
                 }});
    v.push_back({"kz3", "rank bound for V(1)_{2p^2+2p} K(Z,3)",
                 [](const RunConfig& c) { return ScenarioOutput{scenario_kz3_rank(c.p), nullptr, {}}; },
                 [](const RunConfig& c) { return c.p >= 5; }});
    v.push_back({"presentation", "health of the ring config given by --presentation",
                 [](const RunConfig& c) {
                   if (c.presentation.empty()) throw ConfigError("the presentation scenario needs --presentation");
                   std::ifstream in(c.presentation);
                   if (!in) throw ConfigError("cannot read " + c.presentation);
                   std::stringstream text;
                   text << in.rdbuf();
                   Presentation pr = Presentation::from_text(text.str());
                   auto R = pr.build(c.p);
                   HealthOptions o;
                   o.cutoff = std::min<i64>(c.cutoff, 100);
                   auto rep = check_presentation_health(*R, o);
                   rep.scenario = "presentation(" + pr.name + ",p=" + std::to_string(c.p) + ")";
                   return ScenarioOutput{rep, nullptr, {}};
                 },
                 [](const RunConfig& c) { return !c.presentation.empty(); }});
    return v;
  }();
  return all;
}

inline const ScenarioInfo& find_scenario(const std::string& name) {
  for (const auto& s : registry())
    if (s.name == name) return s;
  throw ConfigError("unknown scenario '" + name + "'");
}

inline std::vector<std::string> default_scenarios(const RunConfig& c) {
  std::vector<std::string> out;
  for (const auto& s : registry())
    if (s.in_default(c)) out.push_back(s.name);
  return out;
}

inline ScenarioOutput run_scenario(const std::string& name, const RunConfig& c) {
  const auto& info = find_scenario(name);
  auto t0 = std::chrono::steady_clock::now();
  ScenarioOutput out;
  try {
    out = info.run(c);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    // engine failures inside a scenario become a failing check so the report stays complete
    out.report.scenario = name;
    Check k{"engine error"};
    k.fail(name, "no error", e.what());
    out.report.add(k);
  }
  out.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

/** Runs the scenarios concurrently; results keep the requested order. */
inline std::vector<ScenarioOutput> run_scenarios(const std::vector<std::string>& names, const RunConfig& c,
                                                 bool parallel = true) {
  c.validate();
  for (const auto& n : names) find_scenario(n);
  std::vector<ScenarioOutput> out;
  if (!parallel) {
    for (const auto& n : names) out.push_back(run_scenario(n, c));
    return out;
  }
  std::vector<std::future<ScenarioOutput>> jobs;
  for (const auto& n : names) jobs.push_back(std::async(std::launch::async, [n, &c] { return run_scenario(n, c); }));
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace ssr::scen
