#include "doctest.h"
#include "ssr/config.hpp"
#include "ssr/health.hpp"
#include "ssr/scenarios/thh.hpp"

using namespace ssr;

TEST_SUITE("algebra") {
  TEST_CASE("Koszul signs in products") {
    RingSpec R(5, {{"x", Kind::Exterior, 0, 0, 1, 0}, {"y", Kind::Exterior, 0, 0, 3, 0}, {"z", Kind::Polynomial, 0, 0, 2, 0}});
    auto yx = R.mul(R.parse("y"), R.parse("x"));
    REQUIRE(yx.terms.size() == 1);
    CHECK(yx.terms.begin()->second == 4);
    CHECK(R.mul(R.parse("x"), R.parse("x")).is_zero());
    CHECK(R.mul(R.parse("z"), R.parse("x")) == Element::mono(R.parse("x*z")));
  }

  TEST_CASE("THH products at p=5") {
    auto R = scen::thh_ring(5);
    auto prod = [&](const char* a, const char* b) { return R->str(R->mul(R->parse(a), R->parse(b))); };
    CHECK(prod("b_1", "b_4") == "mu*u^2");
    CHECK(prod("b_2", "b_2") == "b_4*u");
    CHECK(prod("u^3", "u") == "0");
    CHECK(prod("a_2", "a_3") == "0");
    CHECK(prod("u*a_1", "b_3") == "a_4*u^2");
    CHECK(prod("u^3", "a_4") == "a_4*u^3");
    CHECK(prod("u^3", "a_2") == "0");
    CHECK(prod("a_3", "b_4") == "a_2*mu*u");
    // b_1^k = u^{k-1} b_k and b_1^{p-1} = 0
    CHECK(prod("b_1^2", "b_1") == "b_3*u^2");
    CHECK(prod("b_1^2", "b_1^2") == "0");
  }

  TEST_CASE("rules may not rewrite Laurent generators") {
    RingSpec R(5, {{"m", Kind::Laurent, 0, 0, 2, 0}});
    CHECK_THROWS_AS(R.add_rule(R.parse("m"), Element{}), ConfigError);
  }

  TEST_CASE("cyclic rewriting hits the step budget") {
    RingSpec R(5, {{"x", Kind::Polynomial, 0, 0, 2, 0}, {"y", Kind::Polynomial, 0, 0, 2, 0}});
    R.add_rule(R.parse("x"), Element::mono(R.parse("y")));
    R.add_rule(R.parse("y"), Element::mono(R.parse("x")));
    R.set_step_budget(50);
    CHECK_THROWS_AS(R.normal_form(R.parse("x")), NonTerminating);
  }
}

TEST_SUITE("config") {
  TEST_CASE("expressions") {
    Expr::Env env{{"p", 5}, {"i", 2}};
    CHECK(Expr::eval("2p*i+3", env) == 23);
    CHECK(Expr::eval("2p^2", env) == 50);
    CHECK(Expr::eval("(p-1)%3", env) == 1);
    CHECK(Expr::eval("i<=p-1 && i>0", env) == 1);
    CHECK_THROWS_AS(Expr::eval("q+1", env), ConfigError);
  }

  TEST_CASE("template rules expand as written") {
    auto R = scen::thh_ring(5);
    // 10 b*b, 20 a*b, 10 a*a, u^4, 4 u^3*a, 4 u^3*b
    CHECK(R->rules().size() == 10 + 20 + 10 + 1 + 4 + 4);
    CHECK(R->generators().size() == 1 + 1 + 1 + 5 + 4);
  }

  TEST_CASE("serialized presentation round-trips") {
    auto R = scen::thh_ring(5);
    auto text = Presentation::serialize(*R, "thh").dump();
    auto R2 = Presentation::from_text(text).build(5);
    CHECK(R2->rules().size() == R->rules().size());
    Window w = Window::degrees(0, 80);
    CHECK(hilbert(*R, w) == hilbert(*R2, w));
  }

  TEST_CASE("malformed configs are ConfigErrors") {
    CHECK_THROWS_AS(Presentation::from_text("{"), ConfigError);
    CHECK_THROWS_AS(Presentation::from_text(R"({"schema_version":"9","generators":[]})"), ConfigError);
    auto bad = R"({"schema_version":"1.0","generators":[{"name":"x","kind":"weird"}]})";
    CHECK_THROWS_AS(Presentation::from_text(bad).build(5), ConfigError);
    CHECK_THROWS_AS(scen::thh_presentation().build(4), ConfigError);
  }
}

TEST_SUITE("health") {
  TEST_CASE("THH presentation is healthy") {
    auto R = scen::thh_ring(5);
    auto rep = check_presentation_health(*R, {60, 0, 2, 200000});
    for (const auto& c : rep.checks) CHECK_MESSAGE(c.pass, c.name);
  }

  TEST_CASE("a non-confluent rule set is caught") {
    RingSpec R(5, {{"x", Kind::Polynomial, 0, 0, 2, 0}, {"y", Kind::Polynomial, 0, 0, 2, 0}, {"z", Kind::Polynomial, 0, 0, 4, 0}});
    R.add_rule(R.parse("x^2"), Element::mono(R.parse("z")));
    R.add_rule(R.parse("x*y"), Element{});
    auto rep = check_presentation_health(R, {12});
    bool conf = true;
    for (const auto& c : rep.checks)
      if (c.name == "local_confluence") conf = c.pass;
    CHECK_FALSE(conf);  // x^2 y -> z y, or -> 0
  }

  TEST_CASE("inhomogeneous rule is caught") {
    RingSpec R(5, {{"x", Kind::Polynomial, 0, 0, 2, 0}, {"y", Kind::Polynomial, 0, 0, 2, 0}});
    R.add_rule(R.parse("x^2"), Element::mono(R.parse("y")));
    CHECK_FALSE(check_presentation_health(R, {10}).checks.front().pass);
  }

  TEST_CASE("ring and tensor description agree") {
    auto R = scen::thh_ring(5);
    auto D = scen::thh_dimspec(R);
    Window w = Window::degrees(0, 120);
    CHECK(hilbert(*R, w) == hilbert(D, w));
    for (int wt = 0; wt < 4; ++wt) CHECK(hilbert(*R, w, wt) == hilbert(D, w, wt));
  }
}
