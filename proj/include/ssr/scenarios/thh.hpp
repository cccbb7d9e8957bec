#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ssr/config.hpp"
#include "ssr/dimspec.hpp"
#include "ssr/health.hpp"

namespace ssr::scen {

/** r(n) = p^n + r(n-2), r(n) = 0 for n <= 0. */
inline i64 r_of(i64 n, i64 p) {
  if (n <= 0) return 0;
  return ipow(p, n) + r_of(n - 2, p);
}

/** Presentation of V(1)_* THH(ku) with its weight grading; b_0 stands for u. */
inline const char* kThhPresentation = R"({
  "schema_version": "1.0",
  "name": "thh",
  "generators": [
    {"name": "lambda1", "kind": "exterior", "t": "2p-1", "w": 0},
    {"name": "mu", "kind": "poly", "t": "2p^2", "w": 0},
    {"name": "u", "kind": "poly", "t": 2, "w": 1},
    {"name": "a[i]", "range": ["0", "p-1"], "kind": "exterior", "t": "2p*i+3", "w": 1},
    {"name": "b[j]", "range": ["1", "p-1"], "kind": "poly", "t": "2p*j+2", "w": 1}
  ],
  "aliases": {"b_0": "u"},
  "rules": [
    "b[i]*b[j] -> u*b[i+j] if i<=j && i+j<=p-1",
    "b[i]*b[j] -> u*b[i+j-p]*mu if i<=j && i+j>=p",
    "a[i]*b[j] -> u*a[i+j] if i+j<=p-1",
    "a[i]*b[j] -> u*a[i+j-p]*mu if i+j>=p",
    "a[i]*a[j] -> 0 if i<j",
    "u^(p-1) -> 0",
    "u^(p-2)*a[i] -> 0 if i<=p-2",
    "u^(p-2)*b[j] -> 0"
  ]
})";

inline Presentation thh_presentation() { return Presentation::from_text(kThhPresentation); }

/** Extra generators for group cohomology and its localizations. */
struct AmbientOptions {
  bool t = false;            // the cohomology class t, bidegree (-2, 0)
  bool t_laurent = false;
  bool u_n = false;          // exterior class of filtration -1
  bool mu_laurent = false;
};

inline std::shared_ptr<RingSpec> thh_ring(u32 p, const AmbientOptions& o = {}) {
  Presentation pr = thh_presentation();
  for (auto& g : pr.generators)
    if (g.name == "mu" && o.mu_laurent) g.kind = "laurent";
  if (o.t) {
    GeneratorTemplate t;
    t.name = "t";
    t.kind = o.t_laurent ? "laurent" : "poly";
    t.height = "0";
    t.s = "-2";
    t.t = "0";
    t.w = "0";
    pr.generators.push_back(t);
  }
  if (o.u_n) {
    GeneratorTemplate u;
    u.name = "un";
    u.kind = "exterior";
    u.height = "0";
    u.s = "-1";
    u.t = "0";
    u.w = "0";
    pr.generators.push_back(u);
  }
  return pr.build(p);
}

inline std::string a(i64 i) { return "a_" + std::to_string(i); }
inline std::string b(i64 j) { return "b_" + std::to_string(j); }

/**
 * THH as a sum of tensor products, independent of the rewrite rules:
 * E(lambda1, lambda2) P(mu) plus E(lambda1) P(mu) tensor the classes u^k,
 * u^k b_j and u^k a_i below the truncation, with lambda2 = u^{p-2} a_{p-1}.
 */
inline DimSpec thh_dimspec(RingPtr R, const std::vector<Factor>& extra = {}, bool mu_laurent = false) {
  const i64 p = R->prime();
  DimSpec d(R, "THH");
  auto mu = mu_laurent ? laurent(*R, "mu", "mu") : poly(*R, "mu", "mu");
  auto with_extra = [&](Summand s) {
    s.factors.insert(s.factors.end(), extra.begin(), extra.end());
    d.add(std::move(s));
  };
  {
    Summand s{"E(lambda1,lambda2) P(mu)"};
    s.factors = {ext(*R, "lambda1", "lambda1"), ext(*R, "lambda2", "u^" + std::to_string(p - 2) + "*" + a(p - 1)), mu};
    with_extra(s);
  }
  {
    Summand s{"E(lambda1) P(mu) P_{p-2}(u) {u, b_j}"};
    s.factors = {ext(*R, "lambda1", "lambda1"), trunc(*R, "u", "u", p - 2), mu};
    s.prefixes.push_back(pre(*R, "", "u"));
    for (i64 j = 1; j <= p - 1; ++j) s.prefixes.push_back(pre(*R, "", b(j)));
    with_extra(s);
  }
  {
    Summand s{"E(lambda1) P(mu) P_{p-2}(u) {a_i}"};
    s.factors = {ext(*R, "lambda1", "lambda1"), trunc(*R, "u", "u", p - 2), mu};
    for (i64 i = 0; i <= p - 1; ++i) s.prefixes.push_back(pre(*R, "", a(i)));
    with_extra(s);
  }
  return d;
}

/** Health of the presentation and agreement of its normal basis with the tensor description. */
inline CheckReport scenario_thh(u32 p, i64 cutoff = 120) {
  CheckReport rep;
  rep.scenario = "thh(p=" + std::to_string(p) + ")";
  auto R = thh_ring(p);
  HealthOptions o;
  o.cutoff = cutoff;
  rep.merge(check_presentation_health(*R, o), "health");
  DimSpec D = thh_dimspec(R);
  const Window win = Window::degrees(0, cutoff);
  for (std::optional<int> w : {std::optional<int>{}, std::optional<int>{0}}) {
    std::map<i64, i64> ring;
    for (i64 n = 0; n <= cutoff; ++n) ring[n] = 0;
    R->enumerate_normal(win, [&](const Monomial&, const Tri& t) {
      if (!w || t.w == *w) ++ring[t.n()];
    });
    Check c{std::string("ring hilbert = tensor description, ") + (w ? "weight 0" : "all weights")};
    compare_dims<i64>(c, hilbert(D, win, w), ring, deg_str);
    rep.add(c);
  }
  return rep;
}

}  // namespace ssr::scen
