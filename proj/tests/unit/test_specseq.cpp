#include "doctest.h"
#include "ssr/scenarios/thh.hpp"
#include "ssr/specseq.hpp"

using namespace ssr;

namespace {

// P(x) E(y) E(z) with y -> x and z -> y both of length 2
RingPtr toy_ring() {
  return std::make_shared<RingSpec>(5, std::vector<GeneratorSpec>{{"x", Kind::Polynomial, 0, -2, 2, 0},
                                                                   {"y", Kind::Exterior, 0, 0, 1, 0},
                                                                   {"z", Kind::Exterior, 0, 2, 0, 0}});
}

Page page(RingPtr R, const std::string& label, std::vector<Summand> parts) {
  DimSpec d(R, label);
  for (auto& s : parts) d.add(std::move(s));
  return Page{label, d};
}

DerivationRule d2(const RingSpec& R, const std::string& gen, const std::string& image) {
  DerivationRule rule;
  rule.r = 2;
  rule.label = "d2";
  rule.gen[gen] = Element::mono(R.parse(image));
  return rule;
}

const Window kWin{-20, 20, -10, 10};

}  // namespace

TEST_SUITE("dimspec") {
  TEST_CASE("polynomial and exterior factors count like their series") {
    auto R = toy_ring();
    Page E = page(R, "E", {Summand{"P(x) E(y)", {}, {poly(*R, "x", "x"), ext(*R, "y", "y")}}});
    // x has total degree 0, so total degrees are finite only with s bounded
    auto hb = hilbert(E.spec, Window{-20, 0, -10, 10});
    CHECK(hb[0] == 11);
    CHECK(hb[1] == 11);
    CHECK(hb[2] == 0);
  }

  TEST_CASE("the same class listed twice is a DuplicateLabel") {
    auto R = toy_ring();
    Page E = page(R, "E", {Summand{"P(x)", {}, {poly(*R, "x", "x")}}, Summand{"x", {pre(*R, "", "x")}, {}}});
    CHECK_THROWS_AS(E.spec.cells(kWin), DuplicateLabel);
  }

  TEST_CASE("a listed class that normalizes away is an InvalidLabel") {
    auto R = scen::thh_ring(5);
    DimSpec d(R, "bad");
    d.add(Summand{"u^3 P(u)", {pre(*R, "", "u^3")}, {poly(*R, "u", "u")}});
    CHECK_THROWS_AS(hilbert(d, Window::degrees(0, 20)), InvalidLabel);
  }

  TEST_CASE("weight-filtered hilbert series of THH at p=5") {
    auto R = scen::thh_ring(5);
    auto D = scen::thh_dimspec(R);
    auto all = hilbert(D, Window::degrees(0, 12));
    auto w0 = hilbert(D, Window::degrees(0, 12), 0);
    // 1, u, u^2, u^3 in degrees 0..6; lambda1 at 9; b_1 and lambda1 a_0 at 12
    CHECK(all[0] == 1);
    CHECK(all[2] == 1);
    CHECK(all[8] == 0);
    CHECK(all[9] == 1);
    CHECK(all[12] == 2);
    CHECK(w0[2] == 0);
    CHECK(w0[9] == 1);
  }
}

TEST_SUITE("specseq") {
  TEST_CASE("a correct page turn passes") {
    auto R = toy_ring();
    Page E2 = page(R, "E2", {Summand{"P(x) E(y)", {}, {poly(*R, "x", "x"), ext(*R, "y", "y")}}});
    Page E3 = page(R, "E3", {Summand{"1", {}, {}}});
    auto res = turn_page({E2, d2(*R, "y", "x"), E3}, kWin);
    CHECK(res.report.pass());
    CHECK(res.total_rank > 0);
  }

  TEST_CASE("a wrong claimed page is reported cell by cell") {
    auto R = toy_ring();
    Page E2 = page(R, "E2", {Summand{"P(x) E(y)", {}, {poly(*R, "x", "x"), ext(*R, "y", "y")}}});
    Page wrong = page(R, "E3", {Summand{"P(x)", {}, {poly(*R, "x", "x")}}});
    auto res = turn_page({E2, d2(*R, "y", "x"), wrong}, kWin);
    CHECK_FALSE(res.report.pass());
    bool found = false;
    for (const auto& c : res.report.checks)
      if (!c.pass) {
        found = true;
        REQUIRE_FALSE(c.mismatches.empty());
        CHECK(c.mismatches[0].got == "0");
      }
    CHECK(found);
  }

  TEST_CASE("a wrong rule is caught against the claimed page") {
    auto R = toy_ring();
    Page E2 = page(R, "E2", {Summand{"P(x) E(y)", {}, {poly(*R, "x", "x"), ext(*R, "y", "y")}}});
    Page E3 = page(R, "E3", {Summand{"1", {}, {}}});
    DerivationRule zero;
    zero.r = 2;
    zero.label = "d2";
    CHECK_FALSE(turn_page({E2, zero, E3}, kWin).report.pass());
  }

  TEST_CASE("a differential leaving the page is TargetOutsideBasis") {
    auto R = toy_ring();
    Page E2 = page(R, "E2", {Summand{"E(y)", {}, {ext(*R, "y", "y")}}});
    Page E3 = page(R, "E3", {Summand{"1", {}, {}}});
    CHECK_THROWS_AS(turn_page({E2, d2(*R, "y", "x"), E3}, kWin), TargetOutsideBasis);
  }

  TEST_CASE("d o d != 0 is CompositionNonzero") {
    auto R = toy_ring();
    Page E2 = page(R, "E2", {Summand{"P(x) E(y) E(z)", {}, {poly(*R, "x", "x"), ext(*R, "y", "y"), ext(*R, "z", "z")}}});
    DerivationRule d = d2(*R, "y", "x");
    d.gen["z"] = Element::mono(R->parse("y"));
    CHECK_THROWS_AS(turn_page({E2, d, E2}, kWin), CompositionNonzero);
  }

  TEST_CASE("collapse scan finds no room on a page concentrated in one filtration") {
    auto R = toy_ring();
    Page E = page(R, "E", {Summand{"E(y)", {}, {ext(*R, "y", "y")}}});
    CHECK(check_collapse(E, 2, 10, kWin).pass);
  }

  TEST_CASE("exactness from dimensions") {
    // 0 -> F -> F^2 -> F -> 0 in one degree is exact
    LESData ok{Graded::from({{0, 1}}, 0, 0), Graded::from({{0, 2}}, 0, 0), Graded::from({{0, 1}}, 0, 0)};
    CHECK(les_feasible(ok).feasible);
    LESData bad{Graded::from({{0, 1}}, 0, 0), Graded::from({{0, 3}}, 0, 0), Graded::from({{0, 1}}, 0, 0)};
    CHECK_FALSE(les_feasible(bad).feasible);
  }

  TEST_CASE("the two-line page refuses degrees where more lines enter") {
    GradedOperator h;
    h.dims[0] = 1;
    CHECK_THROWS_AS(two_line_ah(h, 5, 37), CutoffTooLarge);
    auto m = two_line_ah(h, 5, 20);
    CHECK(m[0] == 1);
    CHECK(m[7] == 1);
    CHECK(m[8] == 0);
  }
}
