// Command-line driver: runs replay scenarios, writes a JSON report and optional SVG charts.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ssr/chart.hpp"
#include "ssr/report.hpp"
#include "ssr/scenarios/registry.hpp"

namespace {

using namespace ssr;

std::pair<i64, i64> parse_range(const std::string& text, const char* what) {
  auto sep = text.find_first_of(",:", 1);
  if (sep == std::string::npos) throw ConfigError(std::string(what) + " must look like LO,HI");
  try {
    std::size_t a = 0, b = 0;
    i64 lo = std::stoll(text.substr(0, sep), &a);
    i64 hi = std::stoll(text.substr(sep + 1), &b);
    if (a != sep || b != text.size() - sep - 1) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw ConfigError(std::string(what) + " must look like LO,HI, got '" + text + "'");
  }
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Checked replay of the spectral sequence computations"};
  app.require_subcommand(0, 1);

  unsigned prime = 5;
  std::string window, filtration, report_path, chart_path, presentation;
  std::vector<std::string> names;
  std::optional<std::uint64_t> seed;
  bool deep = false, timings = false, serial = false, list = false;
  i64 cutoff = 200;
  int triples = 1, chart_page = -1;
  app.add_option("--prime,-p", prime, "odd prime");
  app.add_option("--window", window, "total degree window LO,HI (scenario default otherwise)");
  app.add_option("--filtration", filtration, "filtration window LO,HI for the towers");
  app.add_option("--scenario,-s", names, "scenario to run; repeatable (default: all that apply)");
  app.add_option("--report", report_path, "write the JSON report here");
  app.add_option("--chart", chart_path, "write an SVG chart of the first tower scenario");
  app.add_option("--chart-page", chart_page, "page index for --chart (default: last)");
  app.add_option("--scalar-seed", seed, "randomize the units in stated differentials");
  app.add_flag("--p3-deep-pages", deep, "enable the C_{p^3} towers at p = 3");
  app.add_option("--presentation", presentation, "ring config (JSON) to health-check");
  app.add_option("--cutoff", cutoff, "degree cutoff for TC and K");
  app.add_option("--s1-triples", triples, "number of differential triples replayed for the circle");
  app.add_flag("--timings", timings, "include wall-clock seconds in the report");
  app.add_flag("--serial", serial, "run scenarios one after another");
  app.add_flag("--list", list, "list scenarios and exit");

  auto* diff = app.add_subcommand("diff", "compare two reports; exit 1 when they differ");
  std::string diff_a, diff_b;
  diff->add_option("a", diff_a)->required();
  diff->add_option("b", diff_b)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*diff) {
    std::string d = diff_reports(read_json(diff_a), read_json(diff_b));
    std::cout << d;
    return d.empty() ? 0 : 1;
  }

  scen::RunConfig cfg;
  cfg.p = prime;
  if (!window.empty()) cfg.window = parse_range(window, "--window");
  if (!filtration.empty()) cfg.filtration = parse_range(filtration, "--filtration");
  cfg.seed = seed;
  cfg.p3_deep_pages = deep;
  cfg.cutoff = cutoff;
  cfg.s1_triples = triples;
  cfg.presentation = presentation;
  cfg.validate();

  if (list) {
    for (const auto& s : scen::registry()) std::cout << s.name << "  " << s.summary << "\n";
    return 0;
  }
  if (names.empty()) names = scen::default_scenarios(cfg);

  auto outputs = scen::run_scenarios(names, cfg, !serial);

  Report rep;
  rep.config = cfg.to_json();
  rep.config["scenarios"] = names;
  rep.timings = timings;
  for (const auto& o : outputs) rep.scenarios.push_back(o.report);

  for (const auto& o : outputs) {
    const auto& r = o.report;
    std::size_t failed = 0;
    for (const auto& c : r.checks) failed += !c.pass;
    std::cout << r.verdict() << "  " << r.scenario << "  (" << r.checks.size() << " checks";
    if (failed) std::cout << ", " << failed << " failed";
    std::cout << ")\n";
    for (const auto& c : r.checks)
      if (!c.pass) {
        std::cout << "    fail: " << c.name;
        if (!c.mismatches.empty())
          std::cout << " at " << c.mismatches[0].where << ": expected " << c.mismatches[0].expected << ", got "
                    << c.mismatches[0].got;
        std::cout << "\n";
      }
  }

  if (!report_path.empty()) write_atomically(report_path, rep.to_json().dump(2) + "\n");

  if (!chart_path.empty()) {
    const scen::ScenarioOutput* tw = nullptr;
    for (const auto& o : outputs)
      if (o.tower && !tw) tw = &o;
    if (!tw) throw ConfigError("--chart needs a tower scenario");
    const auto& pages = tw->tower->pages;
    const int last = int(pages.size()) - 1;
    const int i = chart_page < 0 ? last : chart_page;
    if (i > last) throw ConfigError("--chart-page beyond the last page " + std::to_string(last));
    std::optional<Page> next;
    int r = 0;
    if (i < last) next = pages[std::size_t(i) + 1], r = tw->tower->rules[std::size_t(i)].r;
    write_atomically(chart_path, chart_svg(pages[std::size_t(i)], tw->window, next, r));
  }

  return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ssr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ssr::SchemaMismatch& e) {
    std::cerr << "schema mismatch: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
