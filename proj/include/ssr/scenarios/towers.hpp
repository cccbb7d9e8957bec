#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "ssr/scenarios/thh.hpp"
#include "ssr/specseq.hpp"

namespace ssr::scen {

/**
 * Random units for differentials known only up to a unit. Without a seed
 * every unit is 1. Keys name the transition and the assignment; family
 * members get independent units.
 */
class Scalars {
 public:
  Scalars() = default;
  Scalars(std::optional<std::uint64_t> seed, u32 p) : seed_(seed), p_(p) {}

  u32 unit(const std::string& key, i64 j = 0) const {
    if (!seed_) return 1;
    std::uint64_t h = 1469598103934665603ULL ^ *seed_;
    for (char c : key) h = (h ^ std::uint8_t(c)) * 1099511628211ULL;
    h ^= std::uint64_t(j) * 0x9e3779b97f4a7c15ULL;
    // splitmix64 finalizer
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return u32(1 + h % (p_ - 1));
  }
  bool active() const { return seed_.has_value(); }

 private:
  std::optional<std::uint64_t> seed_;
  u32 p_ = 5;
};

struct TowerConfig {
  u32 p = 5;
  int n = 1;          // C_{p^n}; 0 selects the circle group
  bool fixed = false;  // mu-inverted homotopy fixed points instead of Tate
  int triples = 1;     // circle only: last triple index replayed
  std::optional<std::uint64_t> seed;

  std::string name() const {
    std::string g = n == 0 ? "S1" : (n == 1 ? "Cp" : "Cp^" + std::to_string(n));
    return std::string(fixed ? "fixed" : "tate") + "(" + g + ",p=" + std::to_string(p) + ")";
  }
};

/** Claimed pages with their weight-0 (ell-shaped) twins and the rules between them. */
struct Tower {
  TowerConfig cfg;
  RingPtr ring;
  std::vector<Page> pages;
  std::vector<Page> ell;
  std::vector<DerivationRule> rules;  // rules[i] turns pages[i] into pages[i+1]
  std::optional<Page> stated;         // circle only: stated E-infinity for the region check

  int r_last() const { return rules.empty() ? 0 : rules.back().r; }
};

namespace detail {

inline std::string pw(const std::string& x, i64 e) { return x + "^" + std::to_string(e); }

class TowerBuilder {
 public:
  TowerBuilder(const TowerConfig& cfg, RingPtr R, bool ell)
      : cfg_(cfg), R_(std::move(R)), p_(cfg.p), ell_(ell), var_(cfg.fixed ? "mu" : "t"), sc_(cfg.seed, cfg.p) {}

  std::string l2() const { return pw("u", p_ - 2) + "*" + a(p_ - 1); }

  Factor tmu(i64 h) const { return h == kInf ? poly(*R_, "tmu", "t*mu") : trunc(*R_, "tmu", "t*mu", h); }

  void x_factors(Summand& s, bool un) const {
    if (un) s.factors.push_back(ext(*R_, "un", "un"));
    s.factors.push_back(ext(*R_, "lambda1", "lambda1"));
    if (ell_) {
      s.factors.push_back(ext(*R_, "lambda2", l2()));
    } else {
      s.factors.push_back(ext(*R_, "a1", "a_1"));
      s.factors.push_back(trunc(*R_, "b1", "b_1", p_ - 1));
    }
  }

  /** P(var^{+-q}, t mu) tensor X, t mu truncated at height h. */
  Summand free(i64 q, i64 h, bool un) const {
    Summand s{"Free(" + var_ + "^" + std::to_string(q) + ")"};
    s.factors.push_back(laurent(*R_, pw(var_, q), pw(var_, q)));
    s.factors.push_back(tmu(h));
    x_factors(s, un);
    return s;
  }

  /** Circle E-infinity free part: E(lambda1, a1) P_{p-1}(b1) P(t mu). */
  Summand free_circle() const {
    Summand s{"E(lambda1,a1) P(b1) P(tmu)"};
    s.factors.push_back(tmu(kInf));
    x_factors(s, false);
    return s;
  }

  Summand line(const std::string& name, std::vector<Prefix> prefixes, i64 vpj, i64 h) const {
    Summand s{name + "[v_p=" + std::to_string(vpj) + ",h=" + (h == kInf ? std::string("inf") : std::to_string(h)) + "]"};
    s.prefixes = std::move(prefixes);
    s.factors.push_back(fac(*R_, var_, var_, -kInf, kInf, Constraint::vp_eq(vpj, p_)));
    s.factors.push_back(tmu(h));
    s.family = 0;
    return s;
  }

  /** {lambda2 var^j} tensor E(un, lambda1). */
  std::vector<Summand> L1(i64 vpj, i64 h, bool un) const {
    auto s = line("L1", {pre(*R_, "l2", l2())}, vpj, h);
    if (un) s.factors.push_back(ext(*R_, "un", "un"));
    s.factors.push_back(ext(*R_, "lambda1", "lambda1"));
    return {s};
  }
  /** {lambda1 var^j} tensor E(un, a1) P_{p-1}(b1); lambda2 in place of a1, b1 for ell. */
  std::vector<Summand> L2(i64 vpj, i64 h, bool un) const {
    auto s = line("L2", {pre(*R_, "l1", "lambda1")}, vpj, h);
    if (un) s.factors.push_back(ext(*R_, "un", "un"));
    if (ell_) {
      s.factors.push_back(ext(*R_, "lambda2", l2()));
    } else {
      s.factors.push_back(ext(*R_, "a1", "a_1"));
      s.factors.push_back(trunc(*R_, "b1", "b_1", p_ - 1));
    }
    return {s};
  }
  /** {a1 var^j} tensor E(un, lambda1) P_{p-2}(b1); no weight-0 classes. */
  std::vector<Summand> L3(i64 vpj, i64 h, bool un) const {
    if (ell_) return {};
    auto s = line("L3", {pre(*R_, "a1", "a_1")}, vpj, h);
    if (un) s.factors.push_back(ext(*R_, "un", "un"));
    s.factors.push_back(ext(*R_, "lambda1", "lambda1"));
    s.factors.push_back(trunc(*R_, "b1", "b_1", p_ - 2));
    return {s};
  }
  /** {a1 var^j, b1 var^j} tensor E(un, lambda1) P_{p-2}(b1). */
  std::vector<Summand> F(i64 vpj, i64 h, bool un) const {
    if (ell_) return {};
    auto s = line("F", {pre(*R_, "a1", "a_1"), pre(*R_, "b1", "b_1")}, vpj, h);
    if (un) s.factors.push_back(ext(*R_, "un", "un"));
    s.factors.push_back(ext(*R_, "lambda1", "lambda1"));
    s.factors.push_back(trunc(*R_, "b1", "b_1", p_ - 2));
    return {s};
  }
  /** E(un, lambda1) P_{p-2}(b1) P(mu^{+-1}) {a_i | i != 1}. */
  std::vector<Summand> A(bool un) const {
    if (ell_) return {};
    Summand s{"A"};
    for (i64 i = 0; i < p_; ++i)
      if (i != 1) s.prefixes.push_back(pre(*R_, "", a(i)));
    s.factors.push_back(laurent(*R_, "muA", "mu"));
    if (un) s.factors.push_back(ext(*R_, "un", "un"));
    s.factors.push_back(ext(*R_, "lambda1", "lambda1"));
    s.factors.push_back(trunc(*R_, "b1", "b_1", p_ - 2));
    return {s};
  }

  /** Torsion lines T_m: Tate valuations 2m+1, 2m, 2m-1; fixed 2m-1, 2m-2, 2m-3. */
  std::vector<Summand> T(i64 m, bool un) const {
    std::vector<Summand> out;
    auto add = [&](std::vector<Summand> v) { out.insert(out.end(), v.begin(), v.end()); };
    if (!cfg_.fixed) {
      add(L1(2 * m + 1, r_of(2 * m, p_), un));
      add(L2(2 * m, r_of(2 * m - 1, p_), un));
      add(L3(2 * m - 1, r_of(2 * m - 2, p_) + 1, un));
    } else {
      add(L1(2 * m - 1, r_of(2 * m, p_), un));
      add(L2(2 * m - 2, r_of(2 * m - 1, p_), un));
      if (m == 1) add(A(un));
      else add(L3(2 * m - 3, r_of(2 * m - 2, p_) + 1, un));
    }
    return out;
  }

  Page page(const std::string& label, const std::vector<std::vector<Summand>>& parts) const {
    DimSpec d(R_, label);
    for (const auto& part : parts)
      for (const auto& s : part) d.add(s);
    return Page{label, d};
  }

  std::vector<Summand> tlines(i64 lo, i64 hi, bool un) const {
    std::vector<Summand> out;
    for (i64 m = lo; m <= hi; ++m) {
      auto v = T(m, un);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  }

  Element el(const std::string& mono, u32 c = 1) const { return Element::mono(R_->parse(mono), c % p_); }

  Tower build() const {
    Tower tw;
    tw.cfg = cfg_;
    tw.ring = R_;
    const bool un = cfg_.n > 0;
    const i64 p = p_;
    const std::string v = var_;
    auto E = [](i64 r) { return "E^" + std::to_string(r); };

    // E^2 is the whole ring; d^2(b_i) = (1-i) a_i t exactly, b_0 = u
    Page e2{E(2), DimSpec::of_ring(R_, E(2))};
    if (ell_) {
      std::vector<Factor> extra;
      extra.push_back(cfg_.fixed ? poly(*R_, "t", "t") : laurent(*R_, "t", "t"));
      if (un) extra.push_back(ext(*R_, "un", "un"));
      Summand s{"E(lambda1,lambda2) P(mu)"};
      s.factors = {ext(*R_, "lambda1", "lambda1"), ext(*R_, "lambda2", l2()),
                   cfg_.fixed ? laurent(*R_, "mu", "mu") : poly(*R_, "mu", "mu")};
      s.factors.insert(s.factors.end(), extra.begin(), extra.end());
      e2.spec = DimSpec(R_, E(2));
      e2.spec.add(s);
    }
    tw.pages.push_back(e2);
    DerivationRule d2{2, "d^2", {}, {}};
    d2.gen["u"] = el("a_0*t");
    for (i64 j = 1; j < p; ++j) d2.gen[b(j)] = el(a(j) + "*t", mod_p(1 - j, p_));
    tw.rules.push_back(d2);

    auto add_rule = [&](int r, const std::string& label) -> DerivationRule& {
      tw.rules.push_back(DerivationRule{r, label, {}, {}});
      return tw.rules.back();
    };
    auto unit = [&](const std::string& key, i64 j = 0) { return sc_.unit(cfg_.name() + "/" + key, j); };

    if (!cfg_.fixed) {
      tw.pages.push_back(page(E(3), {{free(1, kInf, un)}}));
      const int last = cfg_.n > 0 ? cfg_.n - 1 : cfg_.triples;
      for (int k = 0; k <= last; ++k) {
        const i64 q0 = ipow(p, 2 * k), q1 = ipow(p, 2 * k + 1), q2 = ipow(p, 2 * k + 2);
        if (k >= 1) {
          const int r = int(2 * r_of(2 * k, p) + 2);
          const i64 e = r_of(2 * k - 2, p) + 1;
          auto& d = add_rule(r, "d^" + std::to_string(r) + "(b1 t^j)");
          std::string key = d.label;
          d.family["b1"] = [R = R_, sc = sc_, nm = cfg_.name() + "/" + key, q0, e](i64 j) {
            return Element::mono(R->parse("a_1*t^" + std::to_string(j + q0 + e) + "*mu^" + std::to_string(e)), sc.unit(nm, j));
          };
          tw.pages.push_back(page(E(r + 1), {{free(q0, kInf, un)}, L3(2 * k - 1, e, un), tlines(1, k - 1, un)}));
        }
        {
          const int r = int(2 * r_of(2 * k + 1, p));
          const i64 e = r_of(2 * k - 1, p);
          auto& d = add_rule(r, "d^" + std::to_string(r) + "(t^" + std::to_string(q0) + ")");
          d.gen[pw("t", q0)] = el("lambda1*t^" + std::to_string(q0 + q1 + e) + "*mu^" + std::to_string(e), unit(d.label));
          std::vector<std::vector<Summand>> parts{{free(q1, kInf, un)}, tlines(1, k - 1, un)};
          if (k >= 1) {
            parts.push_back(L3(2 * k - 1, r_of(2 * k - 2, p) + 1, un));
            parts.push_back(L2(2 * k, e, un));
          }
          tw.pages.push_back(page(E(r + 1), parts));
        }
        {
          const int r = int(2 * r_of(2 * k + 2, p));
          const i64 e = r_of(2 * k, p);
          auto& d = add_rule(r, "d^" + std::to_string(r) + "(t^" + std::to_string(q1) + ")");
          d.gen[pw("t", q1)] = el(l2() + "*t^" + std::to_string(q1 + q2 + e) + "*mu^" + std::to_string(e), unit(d.label));
          tw.pages.push_back(page(E(r + 1), {{free(q2, kInf, un)}, F(2 * k + 1, kInf, un), tlines(1, k, un)}));
        }
      }
      if (cfg_.n > 0) {
        const i64 N = cfg_.n, qN = ipow(p, 2 * N), e = r_of(2 * N - 2, p) + 1;
        const int r = int(2 * r_of(2 * N, p) + 1);
        auto& d = add_rule(r, "d^" + std::to_string(r) + "(un)");
        d.gen["un"] = el("t^" + std::to_string(qN + e) + "*mu^" + std::to_string(e), unit(d.label));
        tw.pages.push_back(page("E^inf", {{free(qN, e, false)}, F(2 * N - 1, e, false), tlines(1, N - 1, true)}));
      } else {
        Page st = page("stated E^inf(S1)", {{free_circle()}, tlines(1, cfg_.triples + 2, false)});
        tw.stated = st;
      }
    } else {
      tw.pages.push_back(page(E(3), {{free(1, kInf, un)}, A(un)}));
      const int last = cfg_.n > 0 ? cfg_.n : cfg_.triples;
      for (int k = 1; k <= last; ++k) {
        const i64 qa = ipow(p, 2 * k - 2), qb = ipow(p, 2 * k - 1), qc = ipow(p, 2 * k);
        if (k >= 2) {
          const int r = int(2 * r_of(2 * k - 2, p) + 2);
          const i64 e = r_of(2 * k - 2, p) + 1;
          auto& d = add_rule(r, "d^" + std::to_string(r) + "(b1 mu^j)");
          std::string key = d.label;
          d.family["b1"] = [R = R_, sc = sc_, nm = cfg_.name() + "/" + key, qa, e](i64 j) {
            return Element::mono(R->parse("a_1*mu^" + std::to_string(j - qa + e) + "*t^" + std::to_string(e)), sc.unit(nm, j));
          };
          tw.pages.push_back(page(E(r + 1), {{free(qa, kInf, un)}, L3(2 * k - 3, e, un), tlines(1, k - 1, un)}));
        }
        {
          const int r = int(2 * r_of(2 * k - 1, p));
          const i64 e = r_of(2 * k - 1, p);
          auto& d = add_rule(r, "d^" + std::to_string(r) + "(mu^" + std::to_string(qa) + ")");
          d.gen[pw("mu", qa)] = el("lambda1*mu^" + std::to_string(qa * (1 - p) + e) + "*t^" + std::to_string(e), unit(d.label));
          std::vector<std::vector<Summand>> parts{{free(qb, kInf, un)}, tlines(1, k - 1, un), L2(2 * k - 2, e, un)};
          if (k >= 2) parts.push_back(L3(2 * k - 3, r_of(2 * k - 2, p) + 1, un));
          else parts.push_back(A(un));
          tw.pages.push_back(page(E(r + 1), parts));
        }
        {
          const int r = int(2 * r_of(2 * k, p));
          const i64 e = r_of(2 * k, p);
          auto& d = add_rule(r, "d^" + std::to_string(r) + "(mu^" + std::to_string(qb) + ")");
          d.gen[pw("mu", qb)] = el(l2() + "*mu^" + std::to_string(qb * (1 - p) + e) + "*t^" + std::to_string(e), unit(d.label));
          tw.pages.push_back(page(E(r + 1), {{free(qc, kInf, un)}, F(2 * k - 1, kInf, un), tlines(1, k, un)}));
        }
      }
      if (cfg_.n > 0) {
        const i64 N = cfg_.n, qN = ipow(p, 2 * N), e = r_of(2 * N, p) + 1;
        const int r = int(2 * r_of(2 * N, p) + 1);
        auto& d = add_rule(r, "d^" + std::to_string(r) + "(un)");
        d.gen["un"] = el("t^" + std::to_string(e) + "*mu^" + std::to_string(e - qN), unit(d.label));
        tw.pages.push_back(page("E^inf", {{free(qN, e, false)}, F(2 * N - 1, e, false), tlines(1, N, true)}));
      } else {
        Page st = page("stated E^inf(S1)", {{free_circle()}, tlines(1, cfg_.triples + 2, false)});
        tw.stated = st;
      }
    }
    return tw;
  }

  const TowerConfig cfg_;
  RingPtr R_;
  i64 p_;
  bool ell_;
  std::string var_;
  Scalars sc_;
};

}  // namespace detail

inline RingPtr tower_ring(const TowerConfig& cfg) {
  AmbientOptions o;
  o.t = true;
  o.t_laurent = !cfg.fixed;
  o.mu_laurent = cfg.fixed;
  o.u_n = cfg.n > 0;
  return thh_ring(cfg.p, o);
}

inline Tower build_tower(const TowerConfig& cfg) {
  auto R = tower_ring(cfg);
  Tower tw = detail::TowerBuilder(cfg, R, false).build();
  Tower el = detail::TowerBuilder(cfg, R, true).build();
  tw.ell = el.pages;
  return tw;
}

/** Default replay window: s within 2(r_last+1) of zero (s <= 0 for fixed points). */
inline Window tower_window(const Tower& tw, i64 n_lo, i64 n_hi) {
  i64 S = 2 * (i64(tw.r_last()) + 1);
  return Window{-S, tw.cfg.fixed ? 0 : S, n_lo, n_hi};
}

struct TowerRunOptions {
  Window win;
  bool check_ell = true;
  std::optional<Window> region;  // circle: comparison region for the stated E-infinity
  TurnOptions turn;
  int only_transition = -1;      // run one transition (tests)
};

/** Replays every transition of the tower and the auxiliary identities. */
inline CheckReport run_tower(const Tower& tw, const TowerRunOptions& opt) {
  CheckReport rep;
  rep.scenario = tw.cfg.name();
  const auto& R = *tw.ring;

  // E^2 against the tensor description of group cohomology with THH coefficients
  {
    std::vector<Factor> extra;
    extra.push_back(tw.cfg.fixed ? poly(R, "t", "t") : laurent(R, "t", "t"));
    if (tw.cfg.n > 0) extra.push_back(ext(R, "un", "un"));
    DimSpec tensor = thh_dimspec(tw.ring, extra, tw.cfg.fixed);
    rep.add(spec_equal(tw.pages[0].spec, tensor, opt.win, "E^2 = H^*(G) tensor THH"));
  }

  json transitions = json::array();
  for (std::size_t i = 0; i < tw.rules.size(); ++i) {
    if (opt.only_transition >= 0 && int(i) != opt.only_transition) continue;
    PageTransition tr{tw.pages[i], tw.rules[i], tw.pages[i + 1]};
    auto t0 = std::chrono::steady_clock::now();
    TurnResult res = turn_page(tr, opt.win, opt.turn);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string prefix = tw.rules[i].label;
    rep.merge(res.report, prefix);
    transitions.push_back({{"rule", tw.rules[i].label},
                           {"source", tw.pages[i].label},
                           {"target", tw.pages[i + 1].label},
                           {"classes", res.classes},
                           {"rank", res.total_rank}});
    rep.seconds += secs;
  }
  rep.data["transitions"] = transitions;
  rep.data["window"] = {{"s", {opt.win.s_lo, opt.win.s_hi}}, {"n", {opt.win.n_lo, opt.win.n_hi}}};

  if (opt.check_ell) {
    Check ell{"weight-0 part has the ell shape at every page"};
    for (std::size_t i = 0; i < tw.pages.size(); ++i) {
      std::map<Cell, i64> w0;
      for (const auto& [c, d] : tw.pages[i].spec.cell_dims(opt.win))
        if (c.w == 0) w0[c] = d;
      auto shape = tw.ell[i].spec.cell_dims(opt.win);
      compare_dims<Cell>(ell, shape, w0, [&](const Cell& c) { return tw.pages[i].label + " " + c.str(); });
    }
    rep.add(ell);
  }

  if (tw.stated && opt.region) {
    rep.add(spec_equal(tw.stated->spec, tw.pages.back().spec, *opt.region,
                       "last replayed page = stated E^inf(S1) on s in [" + std::to_string(opt.region->s_lo) + "," +
                           std::to_string(opt.region->s_hi) + "]"));
  }
  return rep;
}

}  // namespace ssr::scen
