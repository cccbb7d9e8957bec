#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ssr/bar.hpp"
#include "ssr/chart.hpp"
#include "ssr/scenarios/registry.hpp"

using namespace ssr;
using namespace ssr::scen;

namespace {

RingPtr one_gen(const std::string& name, Kind k, int h, i64 t) {
  return std::make_shared<RingSpec>(5, std::vector<GeneratorSpec>{{name, k, h, 0, t, 0}});
}

bool all_pass(const CheckReport& r) {
  for (const auto& c : r.checks) CHECK_MESSAGE(c.pass, std::string(r.scenario + ": " + c.name));
  return r.pass();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string tmp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ssr_unit_" + name)).string();
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(SSREPLAY_PATH) + " " + args + " >" + tmp("cli.out") + " 2>&1";
  int rc = std::system(cmd.c_str());
#ifdef WEXITSTATUS
  return WEXITSTATUS(rc);
#else
  return rc;
#endif
}

}  // namespace

TEST_SUITE("bar") {
  TEST_CASE("Tor over an exterior algebra on an odd class is divided powers") {
    AugmentedAlgebra A(one_gen("x", Kind::Exterior, 0, 3), 18);
    auto tor = bar_tor_dims(A, 6, 18);
    BarBigrading want{{{0, 0}, 1}};
    for (i64 s = 1; s <= 6; ++s) want[{s, 3 * s}] = 1;
    CHECK(tor == want);
  }

  TEST_CASE("Tor over a polynomial algebra is exterior on the suspension") {
    AugmentedAlgebra A(one_gen("x", Kind::Polynomial, 0, 2), 16);
    auto tor = bar_tor_dims(A, 16, 16);
    CHECK(tor == BarBigrading{{{0, 0}, 1}, {{1, 2}, 1}});
  }

  TEST_CASE("Tor over a truncated algebra, p = 3 and 5") {
    CHECK(truncated_tor_check(5, 30).pass);
    CHECK(truncated_tor_check(3, 24).pass);
  }

  TEST_CASE("Cartan's computation below degree 26") { CHECK(all_pass(cartan_check(5, 26))); }

  TEST_CASE("Laurent generators and oversized bidegrees are refused") {
    CHECK_THROWS_AS(AugmentedAlgebra(one_gen("v", Kind::Laurent, 0, 2), 10), ConfigError);
    AugmentedAlgebra A(one_gen("x", Kind::Exterior, 0, 1), 20);
    CHECK_THROWS_AS(bar_tor_dims(A, 20, 20, 0), BudgetExceeded);
  }
}

TEST_SUITE("scenarios") {
  TEST_CASE("r(n) at p = 5") {
    auto rep = scenario_rn(5);
    CHECK(all_pass(rep));
    CHECK(r_of(3, 5) == 130);
    CHECK(r_of(6, 5) == 16275);
  }

  TEST_CASE("THH presentation and tensor description") { CHECK(all_pass(scenario_thh(5, 60))); }

  TEST_CASE("C_p Tate replay on a small window, with and without seeds") {
    RunConfig c;
    c.window = {{-20, 20}};
    CHECK(all_pass(run_scenario("cp-tate", c).report));
    for (std::uint64_t seed : {1u, 2u}) {
      c.seed = seed;
      CHECK(run_scenario("cp-tate", c).report.verdict() == "pass");
    }
  }

  TEST_CASE("a tower with a wrong page or a wrong rule fails") {
    TowerConfig tc;
    Tower tw = build_tower(tc);
    TowerRunOptions o;
    o.win = tower_window(tw, -20, 20);
    o.check_ell = false;
    o.only_transition = 0;
    {
      Tower bad = tw;
      bad.pages[1] = bad.pages[2];
      CHECK_FALSE(run_tower(bad, o).pass());
    }
    {
      Tower bad = tw;
      bad.rules[0].gen.clear();
      bad.rules[0].family.clear();
      CHECK_FALSE(run_tower(bad, o).pass());
    }
  }

  TEST_CASE("TC at p = 5 and the low-degree values") {
    TcOptions o;
    o.cutoff = 60;
    auto res = assemble_tc(o);
    CHECK(all_pass(res.report));
    const i64 want[] = {1, 1, 1, 0, 2, 0, 2, 0, 2, 1};
    for (i64 n = -1; n <= 8; ++n) CHECK(res.dims[n] == want[n + 1]);
  }

  TEST_CASE("the restriction tower needs enough stages") {
    TfModel M(5);
    Check onto{"onto"};
    CHECK_THROWS_AS(tf_limit(M, 200, 0, 3, onto), NonStabilized);
  }

  TEST_CASE("K at p = 5: low degrees and the b-torsion class") {
    KOptions o;
    o.tc.cutoff = 60;
    auto k = assemble_k(o, assemble_tc(o.tc));
    CHECK(all_pass(k.report));
    const i64 want[] = {1, 1, 0, 2, 0, 2, 0, 3, 1};
    for (i64 n = 0; n <= 8; ++n) CHECK(k.dims[n] == want[n]);
  }

  TEST_CASE("p = 7 TC and K") {
    KOptions o;
    o.tc.p = 7;
    o.tc.cutoff = 100;
    auto tc = assemble_tc(o.tc);
    CHECK(all_pass(tc.report));
    CHECK(all_pass(assemble_k(o, tc).report));
  }

  TEST_CASE("hypothesis-dependent scenarios are conditional") {
    CHECK(assemble_kup(5, 100).verdict() == "conditional");
    CHECK(scenario_kz3_rank(5).verdict() == "conditional");
    CHECK_THROWS_AS(scenario_kz3_rank(3), ConfigError);
  }

  TEST_CASE("registry rejects bad configurations") {
    RunConfig c;
    CHECK_THROWS_AS(find_scenario("nope"), ConfigError);
    c.p = 9;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.p = 5;
    CHECK_THROWS_AS(run_scenario("cp3-tate", c), ConfigError);
    c.p = 3;
    CHECK_THROWS_AS(run_scenario("cp3-tate", c), ConfigError);
    auto names = default_scenarios(c);
    CHECK(std::find(names.begin(), names.end(), "cp3-tate") == names.end());
  }
}

TEST_SUITE("report") {
  TEST_CASE("reports are byte-identical across runs") {
    RunConfig c;
    c.cutoff = 80;
    auto dump = [&] {
      Report r;
      r.config = c.to_json();
      for (auto& o : run_scenarios({"rn", "tc", "k"}, c)) r.scenarios.push_back(o.report);
      return r.to_json().dump(2);
    };
    CHECK(dump() == dump());
  }

  TEST_CASE("diff is empty on equal reports and names the changed row") {
    Report r;
    r.scenarios.push_back(scenario_rn(5));
    json a = r.to_json();
    CHECK(diff_reports(a, a).empty());
    json b = a;
    b["scenarios"][0]["checks"][0]["data"]["r"][3] = 131;
    auto d = diff_reports(a, b);
    CHECK(d.find("130 -> 131") != std::string::npos);
    b["schema_version"] = "0.9";
    CHECK_THROWS_AS(diff_reports(a, b), SchemaMismatch);
  }

  TEST_CASE("conditional verdicts do not fail a run") {
    Report r;
    r.scenarios.push_back(assemble_kup(5, 60));
    CHECK(r.pass());
    CHECK(r.to_json()["scenarios"][0]["verdict"] == "conditional");
  }

  TEST_CASE("timings appear only on request") {
    Report r;
    r.scenarios.push_back(scenario_rn(5));
    CHECK_FALSE(r.to_json()["scenarios"][0].contains("seconds"));
    r.timings = true;
    CHECK(r.to_json()["scenarios"][0].contains("seconds"));
  }

  TEST_CASE("atomic writes leave no temporary file") {
    auto path = tmp("atomic.json");
    write_atomically(path, "{}\n");
    CHECK(slurp(path) == "{}\n");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
    std::filesystem::remove(path);
  }

  TEST_CASE("an empty page charts as axes only") {
    auto R = scen::thh_ring(5);
    Page empty{"empty", DimSpec(R, "empty")};
    auto svg = chart_svg(empty, Window{-4, 4, -4, 4});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<line") != std::string::npos);
    CHECK(svg.find("<circle") == std::string::npos);
  }

  TEST_CASE("chart dots follow the page and arrows follow the differential") {
    TowerConfig tc;
    Tower tw = build_tower(tc);
    Window win{-12, 12, -6, 14};
    auto dims = tw.pages[0].spec.cell_dims(win);
    std::size_t dots = 0;
    for (const auto& [c, d] : dims) dots += d > 0;
    auto svg = chart_svg(tw.pages[0], win, tw.pages[1], tw.rules[0].r);
    std::size_t circles = 0, arrows = 0;
    for (std::size_t i = svg.find("<circle"); i != std::string::npos; i = svg.find("<circle", i + 1)) ++circles;
    for (std::size_t i = svg.find("marker-end"); i != std::string::npos; i = svg.find("marker-end", i + 1)) ++arrows;
    CHECK(circles == dots);
    CHECK(arrows > 0);
    CHECK(svg == chart_svg(tw.pages[0], win, tw.pages[1], tw.rules[0].r));
  }
}

TEST_SUITE("cli") {
  TEST_CASE("a passing run exits 0 and writes the report") {
    auto path = tmp("rn.json");
    CHECK(run_cli("--scenario rn --report " + path) == 0);
    auto j = json::parse(slurp(path));
    CHECK(j["schema_version"] == kSchemaVersion);
    CHECK(j["scenarios"][0]["checks"][0]["data"]["r"][3] == 130);
  }

  TEST_CASE("configuration errors exit 2") {
    CHECK(run_cli("--prime 4 --scenario rn") == 2);
    CHECK(run_cli("--scenario nope") == 2);
    CHECK(run_cli("--window 5 --scenario rn") == 2);
    CHECK(run_cli("--bogus-flag") == 2);
  }

  TEST_CASE("a failing check exits 1") {
    auto path = tmp("bad_ring.json");
    std::ofstream(path) << R"({"schema_version": "1.0", "name": "bad",
      "generators": [{"name": "x", "t": 2}, {"name": "y", "t": 2}, {"name": "z", "t": 4}],
      "rules": ["x^2 -> z", "x*y -> 0"]})";
    CHECK(run_cli("--presentation " + path + " --scenario presentation") == 1);
    std::ofstream(path) << "{ not json";
    CHECK(run_cli("--presentation " + path + " --scenario presentation") == 2);
  }

  TEST_CASE("repeated runs give identical bytes; diff exit codes") {
    auto a = tmp("a.json"), b = tmp("b.json"), c = tmp("c.json");
    REQUIRE(run_cli("-s rn -s tc --cutoff 60 --report " + a) == 0);
    REQUIRE(run_cli("-s rn -s tc --cutoff 60 --report " + b) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(run_cli("diff " + a + " " + b) == 0);
    REQUIRE(run_cli("-s rn -s tc --cutoff 60 -p 7 --report " + c) == 0);
    CHECK(run_cli("diff " + a + " " + c) == 1);
  }

  TEST_CASE("chart output") {
    auto svg = tmp("chart.svg");
    CHECK(run_cli("-s cp-tate --window=-10,10 --chart " + svg) == 0);
    CHECK(slurp(svg).rfind("<svg", 0) == 0);
    CHECK(run_cli("-s rn --chart " + svg) == 2);
  }
}
