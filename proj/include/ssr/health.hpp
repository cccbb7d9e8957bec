#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssr/algebra.hpp"
#include "ssr/report.hpp"

namespace ssr {

struct HealthOptions {
  i64 cutoff = 100;          // total degree bound for every search
  i64 min_degree = 0;        // lower total degree bound (rings with negative generators)
  i64 laurent = 2;           // exponent bound for Laurent generators in the searches
  std::size_t max_triples = 2000000;
};

namespace detail {

inline Monomial lcm(const Monomial& a, const Monomial& b) {
  Monomial m(a.e.size());
  for (std::size_t i = 0; i < a.e.size(); ++i) m.e[i] = std::max(a.e[i], b.e[i]);
  return m;
}

inline bool overlaps(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.e.size(); ++i)
    if (a.e[i] > 0 && b.e[i] > 0) return true;
  return false;
}

}  // namespace detail

/**
 * Termination, bounded local confluence, associativity on basis triples and
 * homogeneity of the rule set. Every violation is a mismatch row with a
 * witness monomial.
 */
inline CheckReport check_presentation_health(const RingSpec& ring, const HealthOptions& opt = {}) {
  CheckReport rep;
  rep.scenario = "health";
  const u32 p = ring.prime();
  const Window win{-kInf, kInf, opt.min_degree, opt.cutoff};

  Check homog{"homogeneity"};
  for (const auto& r : ring.rules()) {
    Tri lt = ring.tri(r.lhs);
    for (const auto& [m, c] : r.rhs.terms) {
      Tri rt = ring.tri(m);
      if (!(rt == lt))
        homog.fail(ring.str(r.lhs), "tri-degree of lhs", "different rhs term " + ring.str(m), ring.str(r.lhs));
    }
  }
  rep.add(homog);

  Check term{"termination"};
  std::size_t raw = 0;
  try {
    ring.enumerate_raw(
        win,
        [&](const Monomial& m, const Tri&) {
          ++raw;
          try {
            (void)ring.normal_form(m);
          } catch (const NonTerminating&) {
            term.fail("n=" + std::to_string(ring.tri(m).n()), "normal form", "step budget exceeded", ring.str(m));
          }
        },
        opt.laurent);
  } catch (const InfiniteFiber& e) {
    term.fail("window", "finite raw enumeration", e.what());
  }
  term.data["raw_monomials"] = raw;
  rep.add(term);

  Check conf{"local_confluence"};
  std::size_t pairs = 0;
  auto compare = [&](const Monomial& m, std::size_t i, std::optional<std::size_t> j) {
    if (ring.tri(m).n() > opt.cutoff) return;
    ++pairs;
    Element a, b;
    try {
      a = ring.normal_form_via(m, i);
      b = j ? ring.normal_form_via(m, *j) : Element{};
    } catch (const NonTerminating&) {
      conf.fail(ring.str(m), "terminating reducts", "step budget exceeded", ring.str(m));
      return;
    }
    if (!(a == b)) {
      std::string rj = j ? ring.rules()[*j].source : std::string("structural zero");
      conf.fail(ring.str(m), ring.str(b), ring.str(a), ring.str(m) + " via [" + ring.rules()[i].source + "] vs [" + rj + "]");
    }
  };
  const auto& rules = ring.rules();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = i + 1; j < rules.size(); ++j)
      if (detail::overlaps(rules[i].lhs, rules[j].lhs) || rules[i].lhs == rules[j].lhs)
        compare(detail::lcm(rules[i].lhs, rules[j].lhs), i, j);
    // overlaps with the structural relations: odd squares and truncations
    for (std::size_t g = 0; g < ring.size(); ++g) {
      int e = rules[i].lhs.e[g];
      if (e <= 0) continue;
      const auto& gen = ring.gen(g);
      int need = 0;
      if (ring.is_odd(g) || gen.kind == Kind::Exterior) need = 2;
      else if (gen.kind == Kind::Truncated) need = gen.height;
      if (need == 0 || e >= need) continue;
      Monomial m = rules[i].lhs;
      m.e[g] = need;
      compare(m, i, std::nullopt);
    }
  }
  conf.data["critical_pairs"] = pairs;
  rep.add(conf);

  Check assoc{"associativity"};
  std::vector<std::pair<Monomial, Tri>> basis;
  ring.enumerate_normal(win, [&](const Monomial& m, const Tri& t) {
    if (!m.is_one()) basis.emplace_back(m, t);
  }, opt.laurent);
  std::sort(basis.begin(), basis.end(), [](auto& a, auto& b) { return a.second.n() < b.second.n(); });
  std::size_t triples = 0;
  bool truncated = false;
  for (std::size_t a = 0; a < basis.size() && !truncated; ++a)
    for (std::size_t b = 0; b < basis.size() && !truncated; ++b) {
      i64 nab = basis[a].second.n() + basis[b].second.n();
      if (opt.min_degree >= 0 && nab > opt.cutoff) break;
      Element ab;
      try {
        ab = ring.mul(basis[a].first, basis[b].first);
      } catch (const NonTerminating&) {
        assoc.fail("product", "terminating", "budget", ring.str(basis[a].first) + "*" + ring.str(basis[b].first));
        continue;
      }
      for (std::size_t c = 0; c < basis.size(); ++c) {
        i64 n = nab + basis[c].second.n();
        if (n > opt.cutoff) {
          if (opt.min_degree >= 0) break;
          continue;
        }
        if (n < opt.min_degree) continue;
        if (++triples > opt.max_triples) {
          truncated = true;
          break;
        }
        Element left = ring.mul(ab, Element::mono(basis[c].first));
        Element bc = ring.mul(basis[b].first, basis[c].first);
        Element right = ring.mul(Element::mono(basis[a].first), bc);
        if (!(left == right))
          assoc.fail("n=" + std::to_string(n), ring.str(right), ring.str(left),
                     ring.str(basis[a].first) + " | " + ring.str(basis[b].first) + " | " + ring.str(basis[c].first));
      }
    }
  assoc.data["triples"] = triples;
  assoc.data["basis_size"] = basis.size();
  if (truncated) assoc.detail = "sampled: stopped after max_triples";
  rep.add(assoc);
  (void)p;
  return rep;
}

/** Graded dimension of the normal-form basis, keyed by total degree. */
inline std::map<i64, i64> hilbert(const RingSpec& ring, const Window& win, std::optional<int> weight = std::nullopt,
                                  i64 laurent = kInf) {
  std::map<i64, i64> h;
  for (i64 n = win.n_lo; n <= win.n_hi; ++n) h[n] = 0;
  ring.enumerate_normal(win, [&](const Monomial&, const Tri& t) {
    if (weight && t.w != *weight) return;
    ++h[t.n()];
  }, laurent);
  return h;
}

}  // namespace ssr
