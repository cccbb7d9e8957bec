#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ssr/config.hpp"
#include "ssr/dimspec.hpp"
#include "ssr/health.hpp"
#include "ssr/scenarios/towers.hpp"

namespace ssr::scen {

/**
 * Label ring for the TC and K module descriptions. Module generators that
 * are not products (t^d lambda1, sigma_n, ...) are formal exterior classes.
 * s is killed by b: it comes from a b-torsion module.
 */
inline const char* kTcLabels = R"json({
  "schema_version": "1.0",
  "name": "tc-labels",
  "generators": [
    {"name": "b", "kind": "poly", "t": "2p+2", "w": 1},
    {"name": "v2", "kind": "poly", "t": "2p^2-2", "w": 0},
    {"name": "del", "kind": "exterior", "t": -1, "w": 0},
    {"name": "lambda1", "kind": "exterior", "t": "2p-1", "w": 0},
    {"name": "lambda2", "kind": "exterior", "t": "2p^2-1", "w": 0},
    {"name": "a1", "kind": "exterior", "t": "2p+3", "w": 1},
    {"name": "d", "kind": "exterior", "t": 1, "w": 0},
    {"name": "s", "kind": "exterior", "t": "2p-3", "w": 0},
    {"name": "dv1", "kind": "exterior", "t": "2p-3", "w": 0},
    {"name": "lt[d]", "range": ["1", "p-1"], "kind": "exterior", "t": "2p-1-2d", "w": 0},
    {"name": "l2tp[d]", "range": ["1", "p-1"], "kind": "exterior", "t": "2p^2-1-2p*d", "w": 0},
    {"name": "sigma[n]", "range": ["1", "p-2"], "kind": "exterior", "t": "2n+1", "w": "n"}
  ],
  "rules": ["s*b -> 0"]
})json";

/** P(b, v2) E(del, lambda1, a1) with v2 rewritten to -b^{p-1}. */
inline const char* kTcCore = R"json({
  "schema_version": "1.0",
  "name": "tc-core",
  "generators": [
    {"name": "b", "kind": "poly", "t": "2p+2", "w": 1},
    {"name": "v2", "kind": "poly", "t": "2p^2-2", "w": 0},
    {"name": "del", "kind": "exterior", "t": -1, "w": 0},
    {"name": "lambda1", "kind": "exterior", "t": "2p-1", "w": 0},
    {"name": "a1", "kind": "exterior", "t": "2p+3", "w": 1}
  ],
  "rules": ["v2 -> -b^(p-1)"]
})json";

inline RingPtr tc_labels(u32 p) { return Presentation::from_text(kTcLabels).build(p); }
inline RingPtr tc_core(u32 p) { return Presentation::from_text(kTcCore).build(p); }

inline std::string idx(const std::string& base, i64 i) { return base + "_" + std::to_string(i); }

/** The stated TC as a P(b)-module; t^{p^2-p} lambda2 is l2tp_{p-1} and u^i a_0 is sigma_{i+1}. */
inline DimSpec tc_spec(RingPtr L) {
  const i64 p = L->prime();
  const auto& R = *L;
  DimSpec D(L, "TC");
  D.add(Summand{"P(b) E(del,lambda1,a1)", {}, {poly(R, "b", "b"), ext(R, "del", "del"), ext(R, "lambda1", "lambda1"), ext(R, "a1", "a1")}});
  Summand lt{"P(b) E(a1) {t^d lambda1}", {}, {poly(R, "b", "b"), ext(R, "a1", "a1")}};
  for (i64 d = 1; d < p; ++d) lt.prefixes.push_back(pre(R, idx("lt", d), idx("lt", d)));
  D.add(lt);
  Summand sg{"P(b) E(lambda1) {u^i a_0, t^(p^2-p) lambda2}", {}, {poly(R, "b", "b"), ext(R, "lambda1", "lambda1")}};
  for (i64 n = 1; n <= p - 2; ++n) sg.prefixes.push_back(pre(R, idx("sigma", n), idx("sigma", n)));
  sg.prefixes.push_back(pre(R, "l2t", idx("l2tp", p - 1)));
  D.add(sg);
  return D;
}

/** The ell-shaped TC: P(v2) E(del, lambda1, lambda2) + P(v2) E(lambda2){t^d lambda1} + P(v2) E(lambda1){t^{dp} lambda2}. */
inline DimSpec tc_ell_spec(RingPtr L) {
  const i64 p = L->prime();
  const auto& R = *L;
  DimSpec D(L, "TC(ell)");
  D.add(Summand{"P(v2) E(del,lambda1,lambda2)", {}, {poly(R, "v2", "v2"), ext(R, "del", "del"), ext(R, "lambda1", "lambda1"), ext(R, "lambda2", "lambda2")}});
  Summand lt{"P(v2) E(lambda2) {t^d lambda1}", {}, {poly(R, "v2", "v2"), ext(R, "lambda2", "lambda2")}};
  Summand l2{"P(v2) E(lambda1) {t^dp lambda2}", {}, {poly(R, "v2", "v2"), ext(R, "lambda1", "lambda1")}};
  for (i64 d = 1; d < p; ++d) {
    lt.prefixes.push_back(pre(R, idx("lt", d), idx("lt", d)));
    l2.prefixes.push_back(pre(R, idx("l2tp", d), idx("l2tp", d)));
  }
  D.add(lt);
  D.add(l2);
  return D;
}

/** TC in degrees -1 .. 2p-2, where TF is not yet described by the circle spectral sequence. */
inline std::map<i64, i64> tc_low_table(i64 p) {
  std::map<i64, i64> t;
  for (i64 n = -1; n <= 2 * p - 2; ++n) {
    if (n == -1 || n == 0 || n == 1 || n == 2 * p - 2) t[n] = 1;
    else if (n % 2 != 0 && n >= 3 && n <= 2 * p - 3) t[n] = 2;
    else t[n] = 0;
  }
  return t;
}

/**
 * One basis class of the summand B_k of E^inf(S1):
 * kind 0: lambda1^eps b^m (tmu)^e a1 t^{dq}      (k even >= 2, q = p^{k-1})
 * kind 1: lambda1^eps (tmu)^e lambda2 t^{dq}     (k even >= 2)
 * kind 2: a1^eps b^m (tmu)^e lambda1 t^{dq}      (k odd)
 * kind 3: lambda1^eps b^m x_d, x_0 = a_0, x_i = mu^{-1} a_i   (k = 0)
 */
struct TfClass {
  int kind = 0, eps = 0, m = 0;
  i64 d = 0, e = 0;
  int w = 0;
  auto key() const { return std::make_tuple(kind, eps, m, d, e); }
};

/** The associated graded of TF in degrees > 2p-2 together with the restriction map R. */
class TfModel {
 public:
  TfModel(u32 p, std::optional<std::uint64_t> seed = {}) : p_(p), sc_(seed, p) {}

  u32 prime() const { return p_; }

  /** Basis of B_k in total degree n. */
  std::vector<TfClass> B(int k, i64 n) const {
    const i64 p = p_, D = 2 * p * p - 2;
    std::vector<TfClass> out;
    auto push = [&](TfClass c, i64 base, i64 e_hi) {
      i64 diff = n - base;
      if (diff < 0 || diff % D != 0) return;
      c.e = diff / D;
      if (c.e <= e_hi) out.push_back(c);
    };
    if (k == 0) {
      for (int eps = 0; eps <= 1; ++eps)
        for (int m = 0; m <= p - 3; ++m)
          for (i64 x = 0; x < p; ++x) {
            if (x == 1) continue;
            i64 base = eps * (2 * p - 1) + m * (2 * p + 2) + (x == 0 ? 3 : 2 * p * x + 3 - 2 * p * p);
            push({3, eps, m, x, 0, int((m + 1) % (p - 1))}, base, 0);
          }
      return out;
    }
    const i64 q = ipow(p, k - 1), r = r_of(k, p);
    for (i64 d = 1; d < p; ++d) {
      if (k % 2 == 0) {
        for (int eps = 0; eps <= 1; ++eps) {
          for (int m = 0; m <= p - 3; ++m)
            push({0, eps, m, d, 0, int((m + 1) % (p - 1))}, eps * (2 * p - 1) + m * (2 * p + 2) + 2 * p + 3 - 2 * d * q,
                 r - d * q);
          push({1, eps, 0, d, 0, 0}, eps * (2 * p - 1) + 2 * p * p - 1 - 2 * d * q, r - d * q - 1);
        }
      } else {
        for (int eps = 0; eps <= 1; ++eps)
          for (int m = 0; m <= p - 2; ++m)
            push({2, eps, m, d, 0, int((eps + m) % (p - 1))}, eps * (2 * p + 3) + m * (2 * p + 2) + 2 * p - 1 - 2 * d * q,
                 r - d * q - 1);
      }
    }
    return out;
  }

  /** R: B_{k+2} -> B_k in degree n, each nonzero entry a unit. */
  FpMatrix R(int k, i64 n) const {
    auto src = B(k + 2, n), tgt = B(k, n);
    std::map<std::tuple<int, int, int, i64, i64>, std::size_t> at;
    for (std::size_t i = 0; i < tgt.size(); ++i) at[tgt[i].key()] = i;
    FpMatrix M(tgt.size(), src.size(), p_);
    const i64 p = p_;
    for (std::size_t j = 0; j < src.size(); ++j) {
      const auto& c = src[j];
      std::tuple<int, int, int, i64, i64> key;
      if (k == 0) {
        if (c.kind != 0 || c.e != 0) continue;  // lambda2 lines have height r(0) = 0
        key = {3, c.eps, c.m, c.d == 1 ? 0 : p + 1 - c.d, 0};
      } else {
        key = {c.kind, c.eps, c.m, c.d, c.e - c.d * ipow(p, k - 1)};
      }
      auto it = at.find(key);
      if (it == at.end()) continue;
      M.set(it->second, j, sc_.unit("R" + std::to_string(k) + "/" + std::to_string(c.kind), c.d));
    }
    return M;
  }

  /** dim A_{n,w}, A = E(lambda1, a1) P_{p-1}(b) P(tmu). */
  std::map<int, i64> A(i64 n) const {
    const i64 p = p_, D = 2 * p * p - 2;
    std::map<int, i64> out;
    for (int e1 = 0; e1 <= 1; ++e1)
      for (int e2 = 0; e2 <= 1; ++e2)
        for (int m = 0; m <= p - 2; ++m) {
          i64 diff = n - e1 * (2 * p - 1) - e2 * (2 * p + 3) - m * (2 * p + 2);
          if (diff >= 0 && diff % D == 0) ++out[int((e2 + m) % (p - 1))];
        }
    return out;
  }

 private:
  u32 p_;
  Scalars sc_;
};

/** Per-degree outcome of the tower of restrictions. */
struct TfDegree {
  std::map<int, i64> lim;  // weight -> dim lim B (both parities)
  int stable_even = -1, stable_odd = -1;
};

/**
 * Limit of B_{k+2} -> B_k in degree n along one parity. The tower is cut at
 * the first k0 where two consecutive maps are isomorphisms; every map below
 * has to be onto. Returns the weight split of B_{k0}.
 */
inline std::pair<int, std::map<int, i64>> tf_limit(const TfModel& M, i64 n, int parity, int k_max, Check& onto) {
  for (int k = parity; k + 4 <= k_max; k += 2) {
    auto b0 = M.B(k, n);
    auto R0 = M.R(k, n);
    std::size_t r0 = rank(R0);
    if (r0 != b0.size()) onto.fail("n=" + std::to_string(n) + " k=" + std::to_string(k), std::to_string(b0.size()),
                                   std::to_string(r0));
    auto R1 = M.R(k + 2, n);
    std::size_t d1 = M.B(k + 2, n).size(), d2 = M.B(k + 4, n).size();
    if (b0.size() == d1 && d1 == d2 && r0 == d1 && rank(R1) == d1) {
      std::map<int, i64> w;
      for (const auto& c : b0) ++w[c.w];
      return {k, w};
    }
  }
  throw NonStabilized("restriction tower in degree " + std::to_string(n) + " does not stabilize below k=" +
                      std::to_string(k_max));
}

struct TcResult {
  CheckReport report;
  std::map<i64, i64> dims;                      // TC_n, -1 <= n <= cutoff
  std::map<std::pair<i64, int>, i64> dims_nw;   // TC_{n,w}, 2p-1 <= n <= cutoff
};

struct TcOptions {
  u32 p = 5;
  i64 cutoff = 200;
  int k_max = 16;
  std::optional<std::uint64_t> seed;
};

/** TC from ker and coker of R - 1 on TF, the low-degree table, and the stated TC. */
inline TcResult assemble_tc(const TcOptions& opt) {
  const i64 p = opt.p, N = opt.cutoff;
  TcResult res;
  auto& rep = res.report;
  rep.scenario = "tc(p=" + std::to_string(p) + ")";
  TfModel M(opt.p, opt.seed);

  // ker(R-1) in degrees 2p-1 .. N+1; R is the identity on A so A survives in both ker and coker
  Check onto{"restriction maps B_{k+2} onto B_k"};
  Check stab{"restriction tower stabilizes"};
  std::map<std::pair<i64, int>, i64> ker, cok;
  int deepest = 0;
  for (i64 n = 2 * p - 1; n <= N + 1; ++n) {
    try {
      auto [ke, we] = tf_limit(M, n, 0, opt.k_max, onto);
      auto [ko, wo] = tf_limit(M, n, 1, opt.k_max, onto);
      deepest = std::max({deepest, ke, ko});
      for (auto [w, v] : we) ker[{n, w}] += v;
      for (auto [w, v] : wo) ker[{n, w}] += v;
    } catch (const NonStabilized& e) {
      stab.fail("n=" + std::to_string(n), "stable", e.what());
    }
    for (auto [w, v] : M.A(n)) {
      ker[{n, w}] += v;
      cok[{n, w}] += v;
    }
  }
  stab.data["deepest_k"] = deepest;
  rep.add(stab);
  rep.add(onto);
  for (i64 n = 2 * p - 1; n <= N; ++n)
    for (int w = 0; w < p - 1; ++w) {
      i64 v = (ker.count({n, w}) ? ker[{n, w}] : 0) + (cok.count({n + 1, w}) ? cok[{n + 1, w}] : 0);
      res.dims_nw[{n, w}] = v;
      res.dims[n] += v;
    }
  for (auto [n, v] : tc_low_table(p)) res.dims[n] = v;

  auto L = tc_labels(opt.p);
  DimSpec spec = tc_spec(L);
  Window win = Window::degrees(-1, N);
  {
    Check c{"TC from ker/coker of R-1 equals the stated TC per (n, w)"};
    std::map<std::pair<i64, int>, i64> want;
    for (auto [k, v] : hilbert_nw(spec, win))
      if (k.first >= 2 * p - 1) want[k] = v;
    compare_dims<std::pair<i64, int>>(c, want, res.dims_nw, nw_str);
    rep.add(c);
  }
  {
    Check c{"low-degree table equals the stated TC"};
    std::map<i64, i64> want;
    for (auto [n, v] : hilbert(spec, Window::degrees(-1, 2 * p - 2))) want[n] = v;
    compare_dims<i64>(c, want, tc_low_table(p), deg_str);
    rep.add(c);
  }
  {
    Check c{"TC total dims equal the stated TC"};
    compare_dims<i64>(c, hilbert(spec, win), res.dims, deg_str);
    rep.add(c);
  }
  {
    Check c{"weight-0 part of TC has the ell shape"};
    std::map<i64, i64> got;
    for (i64 n = -1; n <= N; ++n) got[n] = 0;
    for (auto [k, v] : res.dims_nw)
      if (k.second == 0) got[k.first] += v;
    auto shape = hilbert(tc_ell_spec(L), win);
    for (auto [n, v] : hilbert(spec, Window::degrees(-1, 2 * p - 2), 0)) got[n] = v;
    compare_dims<i64>(c, shape, got, deg_str);
    rep.add(c);
  }

  // the P(b)-algebra with v2 = -b^{p-1}
  auto core = tc_core(opt.p);
  rep.merge(check_presentation_health(*core, {std::min<i64>(N, 120)}), "v2 rewrite");
  {
    Check c{"v2 rewrite preserves hilbert"};
    const auto& R = *core;
    DimSpec free(core, "P(b) E(del,lambda1,a1)");
    free.add(Summand{"", {}, {poly(R, "b", "b"), ext(R, "del", "del"), ext(R, "lambda1", "lambda1"), ext(R, "a1", "a1")}});
    compare_dims<i64>(c, hilbert(free, win), hilbert(*core, win), deg_str);
    rep.add(c);
  }
  rep.data["cutoff"] = N;
  return res;
}

}  // namespace ssr::scen
