#pragma once

#include <map>
#include <string>
#include <vector>

#include "ssr/scenarios/tc.hpp"
#include "ssr/specseq.hpp"

namespace ssr::scen {

/** Stated K(ku_p): TC with del replaced by the del-multiples and the sporadic class s. */
inline DimSpec k_spec(RingPtr L) {
  const i64 p = L->prime();
  const auto& R = *L;
  DimSpec D(L, "K(ku)");
  D.add(Summand{"P(b) E(lambda1,a1)", {}, {poly(R, "b", "b"), ext(R, "lambda1", "lambda1"), ext(R, "a1", "a1")}});
  D.add(Summand{"P(b) {del lambda1, del b, del a1, del lambda1 a1}",
                {pre(R, "", "del*lambda1"), pre(R, "", "del*b"), pre(R, "", "del*a1"), pre(R, "", "del*lambda1*a1")},
                {poly(R, "b", "b")}});
  Summand lt{"P(b) E(a1) {t^d lambda1}", {}, {poly(R, "b", "b"), ext(R, "a1", "a1")}};
  for (i64 d = 1; d < p; ++d) lt.prefixes.push_back(pre(R, idx("lt", d), idx("lt", d)));
  D.add(lt);
  Summand sg{"P(b) E(lambda1) {sigma_n, t^(p^2-p) lambda2}", {}, {poly(R, "b", "b"), ext(R, "lambda1", "lambda1")}};
  for (i64 n = 1; n <= p - 2; ++n) sg.prefixes.push_back(pre(R, idx("sigma", n), idx("sigma", n)));
  sg.prefixes.push_back(pre(R, "l2t", idx("l2tp", p - 1)));
  D.add(sg);
  D.add(Summand{"{s}", {pre(R, "", "s")}, {}});
  return D;
}

/** Stated K(KU_p): a1 replaced by the degree-one class d, no s. */
inline DimSpec kup_spec(RingPtr L) {
  const i64 p = L->prime();
  const auto& R = *L;
  DimSpec D(L, "K(KU)");
  D.add(Summand{"P(b) E(lambda1,d)", {}, {poly(R, "b", "b"), ext(R, "lambda1", "lambda1"), ext(R, "d", "d")}});
  D.add(Summand{"P(b) {del lambda1, del b, del a1, del lambda1 d}",
                {pre(R, "", "del*lambda1"), pre(R, "", "del*b"), pre(R, "", "del*a1"), pre(R, "", "del*lambda1*d")},
                {poly(R, "b", "b")}});
  Summand lt{"P(b) E(d) {t^d lambda1}", {}, {poly(R, "b", "b"), ext(R, "d", "d")}};
  for (i64 d = 1; d < p; ++d) lt.prefixes.push_back(pre(R, idx("lt", d), idx("lt", d)));
  D.add(lt);
  Summand sg{"P(b) E(lambda1) {sigma_n, t^(p^2-p) lambda2}", {}, {poly(R, "b", "b"), ext(R, "lambda1", "lambda1")}};
  for (i64 n = 1; n <= p - 2; ++n) sg.prefixes.push_back(pre(R, idx("sigma", n), idx("sigma", n)));
  sg.prefixes.push_back(pre(R, "l2t", idx("l2tp", p - 1)));
  D.add(sg);
  return D;
}

/** Stated K(Z_p): E(lambda1) + {del v1, del lambda1} + {lambda1 t^d}. */
inline DimSpec kzp_spec(RingPtr L) {
  const i64 p = L->prime();
  const auto& R = *L;
  DimSpec D(L, "K(Z_p)");
  D.add(Summand{"E(lambda1)", {}, {ext(R, "lambda1", "lambda1")}});
  Summand rest{"{del v1, del lambda1, lambda1 t^d}", {pre(R, "", "dv1"), pre(R, "", "del*lambda1")}, {}};
  for (i64 d = 1; d < p; ++d) rest.prefixes.push_back(pre(R, idx("lt", d), idx("lt", d)));
  D.add(rest);
  return D;
}

/** Finite kernel and cokernel of P(b) (x)_{P(v2)} K(ell) -> K(ku). */
inline std::map<i64, i64> mu_kernel(i64 p) {
  std::map<i64, i64> k;
  for (i64 j = 1; j <= p - 2; ++j) ++k[2 * p - 3 + j * (2 * p + 2)];
  return k;
}

inline DimSpec mu_cokernel(RingPtr L) {
  const i64 p = L->prime();
  const auto& R = *L;
  DimSpec D(L, "Q");
  D.add(Summand{"P_{p-2}(b) {del b, del a1, a1, del lambda1 a1, lambda1 a1}",
                {pre(R, "", "del*b"), pre(R, "", "del*a1"), pre(R, "", "a1"), pre(R, "", "del*lambda1*a1"),
                 pre(R, "", "lambda1*a1")},
                {trunc(R, "b", "b", p - 2)}});
  Summand lt{"P_{p-2}(b) {a1 lambda1 t^d}", {}, {trunc(R, "b", "b", p - 2)}};
  for (i64 d = 1; d < p; ++d) lt.prefixes.push_back(pre(R, "", "a1*" + idx("lt", d)));
  D.add(lt);
  for (i64 n = 1; n <= p - 2; ++n)
    D.add(Summand{"E(lambda1) {sigma_n b^i}", {pre(R, "", idx("sigma", n))},
                  {ext(R, "lambda1", "lambda1"), trunc(R, "b", "b", p - 1 - n)}});
  return D;
}

struct KOptions {
  TcOptions tc;
};

struct KResult {
  CheckReport report;
  std::map<i64, i64> dims;
};

namespace detail {

inline std::map<i64, i64> restrict_to(const std::map<i64, i64>& m, i64 lo, i64 hi) {
  std::map<i64, i64> out;
  for (i64 n = lo; n <= hi; ++n) out[n] = 0;
  for (auto [n, v] : m)
    if (n >= lo && n <= hi) out[n] = v;
  return out;
}

/** Multiplication by a monomial between two bases of a module spec, one matrix per source degree. */
inline std::map<i64, FpMatrix> multiplication(const DimSpec& src_spec, const DimSpec& tgt_spec, const Monomial& by,
                                             i64 lo, i64 hi) {
  const auto& R = src_spec.ring();
  const i64 shift = R.tri(by).n();
  std::map<i64, std::vector<std::pair<Monomial, u32>>> src;
  src_spec.enumerate(Window::degrees(lo, hi), [&](LabeledClass&& c) { src[c.tri.n()].push_back({c.label, c.coef}); });
  std::map<i64, std::vector<Monomial>> tgt;
  tgt_spec.enumerate(Window::degrees(lo + shift, hi + shift), [&](LabeledClass&& c) { tgt[c.tri.n()].push_back(c.label); });
  std::map<i64, FpMatrix> out;
  for (auto& [n, cols] : src) {
    auto& rows = tgt[n + shift];
    std::sort(rows.begin(), rows.end());
    FpMatrix M(rows.size(), cols.size(), R.prime());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      Element img = R.mul(Element::mono(cols[j].first, cols[j].second), Element::mono(by));
      for (const auto& [m, c] : img.terms) {
        auto it = std::lower_bound(rows.begin(), rows.end(), m);
        if (it == rows.end() || !(*it == m)) throw TargetOutsideBasis(R.str(m) + " is not a basis class");
        M.set(std::size_t(it - rows.begin()), j, c);
      }
    }
    out.emplace(n, std::move(M));
  }
  return out;
}

}  // namespace detail

/** K(ku_p) from TC by the connecting class, with the module-level consequences. */
inline KResult assemble_k(const KOptions& opt, const TcResult& tc) {
  const i64 p = opt.tc.p, N = opt.tc.cutoff;
  KResult res;
  auto& rep = res.report;
  rep.scenario = "k(p=" + std::to_string(p) + ")";
  for (i64 n = -1; n <= N; ++n) {
    auto it = tc.dims.find(n);
    res.dims[n] = (it == tc.dims.end() ? 0 : it->second) - (n == -1) + (n == 2 * p - 3);
  }
  auto L = tc_labels(u32(p));
  DimSpec K = k_spec(L);
  const Window win = Window::degrees(-1, N);
  {
    Check c{"K from TC equals the stated K(ku)"};
    compare_dims<i64>(c, hilbert(K, win), res.dims, deg_str);
    rep.add(c);
  }
  {
    // kernel of multiplication by b, computed on the stated module
    Check c{"exactly one b-torsion class, in degree 2p-3"};
    auto mats = detail::multiplication(K, K, L->parse("b"), -1, N);
    std::map<i64, i64> tors;
    for (auto& [n, M] : mats) {
      i64 k = i64(M.cols()) - i64(rank(M));
      if (k) tors[n] = k;
    }
    std::map<i64, i64> want{{2 * p - 3, 1}};
    compare_dims<i64>(c, want, tors, deg_str);
    rep.add(c);
  }
  {
    Check c{"(1 - x^(2p+2)) HS(F) has nonnegative coefficients summing to 8+4(p-1)"};
    const i64 B = 2 * p + 2;
    i64 sum = 0, top = -kInf;
    for (i64 n = -1; n <= N; ++n) {
      auto F = [&](i64 m) -> i64 { return m < -1 ? 0 : res.dims[m] - (m == 2 * p - 3); };
      i64 coef = F(n) - F(n - B);
      if (coef < 0) c.fail("n=" + std::to_string(n), ">= 0", std::to_string(coef));
      if (coef) top = n;
      sum += coef;
    }
    if (sum != 8 + 4 * (p - 1)) c.fail("sum", std::to_string(8 + 4 * (p - 1)), std::to_string(sum));
    if (top > N - B) c.fail("support", "<= " + std::to_string(N - B), std::to_string(top));
    c.data["generators"] = sum;
    c.data["top_degree"] = top;
    rep.add(c);
  }
  {
    Check c{"low degrees match the rank table"};
    std::map<i64, i64> want;
    for (i64 n = 0; n <= 2 * p - 2; ++n) {
      i64 v = 0;
      if (n == 0 || n == 1 || n == 2 * p - 2) v = 1;
      else if (n == 2 * p - 3) v = 3;
      else if (n % 2 != 0 && n >= 3 && n <= 2 * p - 5) v = 2;
      want[n] = v;
    }
    compare_dims<i64>(c, want, detail::restrict_to(res.dims, 0, 2 * p - 2), deg_str);
    rep.add(c);
  }

  // comparison with the weight-0 part W = K(ell)
  std::map<i64, i64> w0 = hilbert(K, win, 0);
  std::map<i64, i64> ind;  // P(b) (x)_{P(v2)} W = W {1, b, ..., b^{p-2}}
  for (i64 n = -1; n <= N; ++n) {
    i64 v = 0;
    for (i64 k = 0; k <= p - 2; ++k)
      if (n - k * (2 * p + 2) >= -1) v += w0[n - k * (2 * p + 2)];
    ind[n] = v;
  }
  auto kern = mu_kernel(p);
  auto Q = hilbert(mu_cokernel(L), win);
  {
    Check c{"0 -> ker mu -> P(b) (x) K(ell) -> K(ku) -> coker mu -> 0 has vanishing Euler characteristic"};
    i64 tk = 0, tq = 0;
    for (i64 n = -1; n <= N; ++n) {
      i64 v = (kern.count(n) ? kern[n] : 0) - ind[n] + res.dims[n] - Q[n];
      if (v) c.fail("n=" + std::to_string(n), "0", std::to_string(v));
      tq += Q[n];
    }
    for (auto [n, v] : kern) tk += v;
    if (tk != p - 2) c.fail("dim K", std::to_string(p - 2), std::to_string(tk));
    c.data["dim_kernel"] = tk;
    c.data["dim_cokernel"] = tq;
    rep.add(c);
  }
  {
    // the map itself: b^k times weight-0 classes, with kernel and cokernel read off from ranks
    Check c{"mu has the listed kernel and cokernel"};
    std::map<i64, i64> got_k, got_q;
    std::map<i64, std::vector<std::pair<Monomial, u32>>> imgs;
    std::vector<LabeledClass> wb;
    K.enumerate(win, [&](LabeledClass&& x) {
      if (x.tri.w == 0) wb.push_back(std::move(x));
    });
    std::map<i64, std::vector<Monomial>> tgt;
    K.enumerate(win, [&](LabeledClass&& x) { tgt[x.tri.n()].push_back(x.label); });
    std::map<i64, i64> src_dim;
    for (const auto& x : wb)
      for (i64 k = 0; k <= p - 2; ++k) {
        i64 n = x.tri.n() + k * (2 * p + 2);
        if (n > N) continue;
        ++src_dim[n];
        Element img = L->mul(Element::mono(x.label, x.coef), Element::mono(L->mono_pow(L->parse("b"), k)->second));
        if (img.is_zero()) {
          imgs[n].push_back({Monomial{}, 0});
          continue;
        }
        if (img.terms.size() != 1) throw TargetOutsideBasis("image is not a monomial");
        imgs[n].push_back(*img.terms.begin());
      }
    for (i64 n = -1; n <= N; ++n) {
      auto& rows = tgt[n];
      std::sort(rows.begin(), rows.end());
      auto& cols = imgs[n];
      FpMatrix M(rows.size(), cols.size(), u32(p));
      for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].second == 0) continue;
        auto it = std::lower_bound(rows.begin(), rows.end(), cols[j].first);
        if (it == rows.end() || !(*it == cols[j].first)) throw TargetOutsideBasis(L->str(cols[j].first));
        M.set(std::size_t(it - rows.begin()), j, cols[j].second);
      }
      i64 rk = i64(rank(M));
      if (i64(cols.size()) - rk) got_k[n] = i64(cols.size()) - rk;
      if (i64(rows.size()) - rk) got_q[n] = i64(rows.size()) - rk;
    }
    compare_dims<i64>(c, kern, got_k, [](const i64& n) { return "kernel n=" + std::to_string(n); });
    std::map<i64, i64> qn;
    for (auto [n, v] : Q)
      if (v) qn[n] = v;
    compare_dims<i64>(c, qn, got_q, [](const i64& n) { return "cokernel n=" + std::to_string(n); });
    rep.add(c);
  }
  {
    const i64 edge = 2 * p * p - 4;
    Check c{"mu is dimensionwise an isomorphism above 2p^2-4"};
    for (i64 n = edge + 1; n <= N; ++n)
      if (ind[n] != res.dims[n]) c.fail("n=" + std::to_string(n), std::to_string(ind[n]), std::to_string(res.dims[n]));
    for (auto [n, v] : kern)
      if (v && n > edge) c.fail("kernel n=" + std::to_string(n), "0", std::to_string(v));
    for (auto [n, v] : Q)
      if (v && n > edge) c.fail("cokernel n=" + std::to_string(n), "0", std::to_string(v));
    rep.add(c);
  }
  {
    // weight 0 of K is TC(ell) with del traded for s
    Check c{"weight-0 part of K has the ell shape"};
    auto shape = hilbert(tc_ell_spec(L), win);
    shape[-1] -= 1;
    shape[2 * p - 3] += 1;
    std::map<i64, i64> got;
    for (i64 n = -1; n <= N; ++n) got[n] = 0;
    for (auto [k, v] : tc.dims_nw)
      if (k.second == 0) got[k.first] += v;
    for (auto [n, v] : w0)
      if (n <= 2 * p - 2) got[n] = v;
    compare_dims<i64>(c, shape, got, deg_str);
    rep.add(c);
  }
  rep.data["cutoff"] = N;
  return res;
}

/** Localization sequence K(Z_p) -> K(ku_p) -> K(KU_p) on stated dimensions; hypothesis-dependent. */
inline CheckReport assemble_kup(u32 p, i64 cutoff) {
  CheckReport rep;
  rep.scenario = "kup(p=" + std::to_string(p) + ")";
  rep.conditional = true;
  rep.note = "assumes the localization sequence maps to the THH sequence by traces and the log THH isomorphism is multiplicative";
  auto L = tc_labels(p);
  const Window win = Window::degrees(-1, cutoff);
  auto A = hilbert(kzp_spec(L), win), B = hilbert(k_spec(L), win), C = hilbert(kup_spec(L), win);
  {
    Check c{"les_feasible(K(Z_p), K(ku), K(KU))"};
    auto r = les_feasible({Graded::from(A, -1, cutoff), Graded::from(B, -1, cutoff), Graded::from(C, -1, cutoff)});
    if (!r.feasible) c.fail("n=" + std::to_string(r.failing_degree), "exact", "infeasible");
    c.data["degrees"] = r.ranks.size();
    rep.add(c);
  }
  {
    Check c{"d adds one class in degree 1"};
    if (C[1] - B[1] != 1) c.fail("n=1", "1", std::to_string(C[1] - B[1]));
    rep.add(c);
  }
  return rep;
}

}  // namespace ssr::scen
