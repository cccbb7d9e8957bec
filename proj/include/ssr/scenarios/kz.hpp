#pragma once

#include <string>
#include <vector>

#include "ssr/bar.hpp"
#include "ssr/config.hpp"
#include "ssr/dimspec.hpp"
#include "ssr/health.hpp"
#include "ssr/specseq.hpp"

namespace ssr::scen {

namespace detail {

inline GeneratorSpec gen(const std::string& name, Kind k, i64 h, i64 s, i64 t) { return {name, k, int(h), s, t, 0}; }

/** Gamma(y), |y| = 2, as the tensor product of P_p(gamma_{p^k} y) with 2p^k <= t_max. */
inline RingPtr divided_power_ring(u32 p, i64 deg, i64 t_max) {
  std::vector<GeneratorSpec> g;
  for (i64 k = 0, d = deg; d <= t_max; ++k, d *= p) g.push_back(gen("g" + std::to_string(k), Kind::Truncated, p, 0, d));
  return std::make_shared<RingSpec>(p, g);
}

/** Bigraded comparison of a bar Tor computation with a DimSpec whose classes carry (s, t). */
inline void compare_bigraded(Check& chk, const BarBigrading& got, const DimSpec& want, i64 total_max) {
  std::map<std::pair<i64, i64>, i64> w, g;
  want.enumerate(Window::degrees(0, total_max), [&](LabeledClass&& c) { ++w[{c.tri.s, c.tri.t}]; });
  for (auto [k, v] : got)
    if (k.first + k.second <= total_max) g[k] = v;
  compare_dims<std::pair<i64, i64>>(chk, w, g, [](const std::pair<i64, i64>& k) {
    return "(s=" + std::to_string(k.first) + ",t=" + std::to_string(k.second) + ")";
  });
}

}  // namespace detail

/**
 * Cartan: Tor over Gamma(y) is E(e_k) Gamma(f_k) with e_k in bidegree
 * (1, 2p^k) and f_k in (2, 2p^{k+1}); Tor over E(x_1) is Gamma(sigma x_1).
 */
inline CheckReport cartan_check(u32 p, i64 cutoff) {
  CheckReport rep;
  rep.scenario = "cartan(p=" + std::to_string(p) + ")";
  {
    AugmentedAlgebra G(detail::divided_power_ring(p, 2, cutoff), cutoff);
    auto tor = bar_tor_dims(G, cutoff, cutoff - 1);
    std::vector<GeneratorSpec> g;
    for (i64 k = 0, q = 2; q + 1 <= cutoff; ++k, q *= p) {
      g.push_back(detail::gen("e" + std::to_string(k), Kind::Exterior, 0, 1, q));
      g.push_back(detail::gen("f" + std::to_string(k), Kind::Polynomial, 0, 2, p * q));
    }
    auto H = std::make_shared<RingSpec>(p, g);
    Check c{"Tor over Gamma(y) = E(e_k) Gamma(f_k), total degree <= " + std::to_string(cutoff)};
    detail::compare_bigraded(c, tor, DimSpec::of_ring(H, "E(e_k) Gamma(f_k)"), cutoff);
    json deg = json::object();
    for (i64 k = 0, q = 2; q + 1 <= cutoff; ++k, q *= p) {
      deg["e" + std::to_string(k)] = q + 1;
      if (p * q + 2 <= cutoff) deg["f" + std::to_string(k)] = p * q + 2;
    }
    c.data["degrees"] = deg;
    rep.add(c);

    Check eu{"Euler characteristic of the bar complex per internal degree"};
    auto chains = bar_chain_dims(G, cutoff, cutoff - 1);
    std::map<i64, i64> a, b;
    for (auto [k, v] : chains) a[k.second] += (k.first % 2 ? -v : v);
    for (auto [k, v] : tor) b[k.second] += (k.first % 2 ? -v : v);
    compare_dims<i64>(eu, a, b, [](const i64& t) { return "t=" + std::to_string(t); });
    rep.add(eu);
  }
  {
    auto E = std::make_shared<RingSpec>(p, std::vector<GeneratorSpec>{detail::gen("x1", Kind::Exterior, 0, 0, 1)});
    AugmentedAlgebra A(E, cutoff);
    auto tor = bar_tor_dims(A, cutoff, cutoff / 2);
    Check c{"Tor over E(x_1) has the dimensions of Gamma(y)"};
    std::map<i64, i64> got, want;
    for (auto [k, v] : tor)
      if (k.first + k.second <= cutoff) got[k.first + k.second] += v;
    for (i64 n = 0; n <= cutoff; n += 2) want[n] = 1;
    compare_dims<i64>(c, want, got, deg_str);
    rep.add(c);
  }
  return rep;
}

/** Tor over P_p(x), |x| = 2, against E(sigma x) Gamma(phi x): sigma x at (1, 2), phi x at (2, 2p). */
inline Check truncated_tor_check(u32 p, i64 t_max) {
  auto P = std::make_shared<RingSpec>(p, std::vector<GeneratorSpec>{detail::gen("x", Kind::Truncated, p, 0, 2)});
  AugmentedAlgebra A(P, t_max);
  auto tor = bar_tor_dims(A, t_max, t_max);
  auto H = std::make_shared<RingSpec>(p, std::vector<GeneratorSpec>{detail::gen("sx", Kind::Exterior, 0, 1, 2),
                                                                     detail::gen("px", Kind::Polynomial, 0, 2, 2 * p)});
  Check c{"Tor over P_p(x) = E(sigma x) Gamma(phi x), t <= " + std::to_string(t_max)};
  std::map<std::pair<i64, i64>, i64> w;
  DimSpec::of_ring(H, "E Gamma").enumerate(Window{0, kInf, 0, 2 * t_max}, [&](LabeledClass&& x) {
    if (x.tri.t <= t_max) ++w[{x.tri.s, x.tri.t}];
  });
  compare_dims<std::pair<i64, i64>>(c, w, tor, [](const std::pair<i64, i64>& k) {
    return "(s=" + std::to_string(k.first) + ",t=" + std::to_string(k.second) + ")";
  });
  return c;
}

/** H_*(K(Z,2)) = Gamma(y) with (P^1)^* gamma_{k+p-1} = k gamma_k. */
inline GradedOperator kz2_homology(u32 p, i64 cutoff) {
  GradedOperator h;
  const i64 shift = 2 * i64(p) - 2;
  for (i64 n = 0; n <= cutoff + shift + 2; n += 2) h.dims[n] = 1;
  for (i64 n = shift; n <= cutoff + shift + 2; n += 2) {
    i64 k = (n - shift) / 2;
    FpMatrix M(1, 1, p);
    M.set(0, 0, u32(mod_pos(k, p)));
    h.op[n] = M;
  }
  return h;
}

/** Ravenel-Wilson presentations with v2 Laurent; k runs over 0..K. */
inline const char* kRwPresentation = R"json({
  "schema_version": "1.0",
  "name": "rw",
  "params": {"K": 1},
  "generators": [
    {"name": "v2", "kind": "laurent", "t": "2p^2-2"},
    {"name": "beta[k]", "range": ["0", "K"], "kind": "poly", "t": "2p^k"},
    {"name": "b[k]", "range": ["0", "K"], "kind": "poly", "t": "2p^k*(p+1)"}
  ],
  "rules": [
    "beta[k]^p -> 0 if k==0",
    "beta[k]^p -> v2^(p^(k-1))*beta[k-1] if k>=1",
    "b[k]^p -> -v2^(p^k)*b[k]"
  ]
})json";

inline CheckReport scenario_kz(u32 p, i64 cutoff = 26, i64 tor_t = 30) {
  CheckReport rep;
  rep.scenario = "kz(p=" + std::to_string(p) + ")";
  rep.merge(cartan_check(p, cutoff));
  rep.add(truncated_tor_check(p, tor_t));
  {
    const i64 below = 4 * i64(p) - 3;
    auto ah = two_line_ah(kz2_homology(p, below), p, below - 1);
    Check c{"two-line AH page for K(Z,2) = F_p{alpha_1} + P_p(x) below 4p-3"};
    std::map<i64, i64> want;
    for (i64 n = 0; n < below; ++n) want[n] = (n % 2 == 0 && n <= 2 * (i64(p) - 1)) || n == 2 * i64(p) - 3;
    compare_dims<i64>(c, want, ah, deg_str);
    json ones = json::array();
    for (auto [n, v] : ah)
      if (v) ones.push_back(n);
    c.data["nonzero_degrees"] = ones;
    rep.add(c);
  }
  {
    auto R = Presentation::from_text(kRwPresentation).build(p);
    HealthOptions o;
    o.cutoff = 2 * i64(p) * p * (p + 1);
    o.min_degree = -o.cutoff;
    o.laurent = 2;
    rep.merge(check_presentation_health(*R, o), "RW");
    // with v2 = 1 the K(Z,2) part is P_{p^{K+1}}(beta_K): p^{K+1} normal monomials of v2-degree 0
    Check c{"RW K(Z,2) normal basis has p^(K+1) classes at v2-degree 0"};
    std::size_t n = 0;
    const std::size_t iv = R->index("v2");
    R->enumerate_normal(Window::degrees(0, 4 * i64(p) * p), [&](const Monomial& m, const Tri&) {
      bool only_beta = m.e[iv] == 0;
      for (std::size_t i = 0; i < R->size(); ++i)
        if (R->gen(i).name.rfind("b_", 0) == 0 && m.e[i]) only_beta = false;
      if (only_beta) ++n;
    }, 0);
    if (n != std::size_t(p * p)) c.fail("count", std::to_string(p * p), std::to_string(n));
    rep.add(c);
  }
  return rep;
}

/**
 * V(1)_{2p^2+2p} K(Z,3) from the Atiyah-Hirzebruch E^2 = H_*(K(Z,3)) (x) V(1)_*.
 * The stated differential kills e_0 f_0 alpha_1 beta_1; the bound <= 1 also
 * needs gamma_p f_0 to support d^{2p-2}, which is assumed (hence conditional).
 */
inline CheckReport scenario_kz3_rank(u32 p) {
  if (p < 5) throw ConfigError("the V(1) homotopy used here needs p >= 5");
  CheckReport rep;
  rep.scenario = "kz3-rank(p=" + std::to_string(p) + ")";
  rep.conditional = true;
  rep.note = "assumes d^{2p-2}(gamma_p f_0) = f_1 alpha_1, which the stated differentials do not cover";
  const i64 P = p, N = 2 * P * P + 2 * P;
  // homology classes by name and degree; gamma_j f_0 for j < p^2
  std::vector<std::pair<std::string, i64>> H;
  std::vector<std::pair<std::string, i64>> ext{{"e0", 3}, {"e1", 2 * P + 1}, {"e2", 2 * P * P + 1}};
  std::vector<std::pair<std::string, i64>> gam{{"f0", 2 * P + 2}, {"f1", 2 * P * P + 2}};
  for (int mask = 0; mask < 8; ++mask)
    for (i64 j0 = 0; j0 * (2 * P + 2) <= N + 1; ++j0)
      for (i64 j1 = 0; j1 * (2 * P * P + 2) <= N + 1; ++j1) {
        i64 d = j0 * (2 * P + 2) + j1 * (2 * P * P + 2);
        std::string name;
        for (int i = 0; i < 3; ++i)
          if (mask >> i & 1) {
            d += ext[std::size_t(i)].second;
            name += ext[std::size_t(i)].first + " ";
          }
        if (j0) name += (j0 == 1 ? std::string("f0") : "gamma_" + std::to_string(j0) + " f0") + " ";
        if (j1) name += (j1 == 1 ? std::string("f1") : "gamma_" + std::to_string(j1) + " f1") + " ";
        if (d <= N + 1) H.push_back({name.empty() ? "1" : name.substr(0, name.size() - 1), d});
      }
  // V(1)_* below 4p^2-2p-4: P(v2) P(beta1) {1, alpha1, beta1', (alpha1 beta1)#}
  std::vector<std::pair<std::string, i64>> V;
  const i64 b1 = 2 * P * P - 2 * P - 2, v2 = 2 * P * P - 2;
  std::vector<std::pair<std::string, i64>> base{{"", 0}, {"alpha1", 2 * P - 3}, {"beta1'", 2 * P * P - 2 * P - 1},
                                                 {"(alpha1 beta1)#", 2 * P * P + 2 * P - 6}};
  for (i64 i = 0; i * v2 <= N + 1; ++i)
    for (i64 j = 0; j * b1 <= N + 1; ++j)
      for (const auto& [nm, d] : base) {
        i64 t = i * v2 + j * b1 + d;
        if (t > N + 1) continue;
        std::string s = nm;
        if (j) s += std::string(s.empty() ? "" : " ") + (j == 1 ? "beta1" : "beta1^" + std::to_string(j));
        if (i) s += std::string(s.empty() ? "" : " ") + (i == 1 ? "v2" : "v2^" + std::to_string(i));
        V.push_back({s, t});
      }
  auto span = [&](i64 n) {
    std::vector<std::string> out;
    for (const auto& [h, s] : H)
      for (const auto& [v, t] : V)
        if (s + t == n) out.push_back(v.empty() ? h : (h == "1" ? v : h + " " + v));
    std::sort(out.begin(), out.end());
    return out;
  };
  auto at = span(N);
  Check listing{"E^2 in total degree 2p^2+2p contains f0 v2 and e0 f0 alpha1 beta1"};
  json cls = json::array();
  for (const auto& s : at) cls.push_back(s);
  listing.data["classes"] = cls;
  for (const char* want : {"f0 v2", "e0 f0 alpha1 beta1"})
    if (std::find(at.begin(), at.end(), want) == at.end()) listing.fail(want, "present", "absent");
  rep.add(listing);

  Check bound{"rank of V(1)_{2p^2+2p} K(Z,3) is at most one"};
  i64 dim = i64(at.size());
  auto has = [&](const std::string& s) { return std::find(at.begin(), at.end(), s) != at.end(); };
  auto src = span(N + 1);
  bool stated = std::find(src.begin(), src.end(), "e0 e1 f0 beta1") != src.end() || std::find(src.begin(), src.end(), "e1 f0 beta1") != src.end();
  if (stated && has("e0 f0 alpha1 beta1")) --dim;  // d^{2p-2}(e_1 f_0 beta_1) = e_0 f_0 alpha_1 beta_1
  bound.data["after_stated_differential"] = dim;
  if (has("gamma_" + std::to_string(p) + " f0")) --dim;  // assumed: d^{2p-2}(gamma_p f_0) = f_1 alpha_1
  bound.data["after_assumed_differential"] = dim;
  if (dim > 1) bound.fail("n=" + std::to_string(N), "<= 1", std::to_string(dim));
  rep.add(bound);
  return rep;
}

}  // namespace ssr::scen
