#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ssr/algebra.hpp"
#include "ssr/report.hpp"

namespace ssr {

/** Admissible values of a family parameter j. */
struct Constraint {
  enum class Kind { Any, VpEq, VpGe, Range, Congruence, List };
  Kind kind = Kind::Any;
  i64 a = 0, b = 0;  // VpEq/VpGe: c = a; Range: [a, b]; Congruence: j = a mod b
  std::vector<i64> list;
  i64 p = 0;

  static Constraint any() { return {}; }
  static Constraint vp_eq(i64 c, i64 p) { return {Kind::VpEq, c, 0, {}, p}; }
  static Constraint vp_ge(i64 c, i64 p) { return {Kind::VpGe, c, 0, {}, p}; }
  static Constraint range(i64 a, i64 b) { return {Kind::Range, a, b, {}, 0}; }
  static Constraint congruence(i64 a, i64 m) { return {Kind::Congruence, a, m, {}, 0}; }
  static Constraint of(std::vector<i64> l) { return {Kind::List, 0, 0, std::move(l), 0}; }

  bool ok(i64 j) const {
    switch (kind) {
      case Kind::Any: return true;
      case Kind::VpEq: return j != 0 && vp(j, p) == a;
      case Kind::VpGe: return j == 0 || vp(j, p) >= a;
      case Kind::Range: return j >= a && j <= b;
      case Kind::Congruence: return mod_pos(j - a, b) == 0;
      case Kind::List: return std::find(list.begin(), list.end(), j) != list.end();
    }
    return false;
  }

  std::string str() const {
    switch (kind) {
      case Kind::Any: return "";
      case Kind::VpEq: return "v_p(j)=" + std::to_string(a);
      case Kind::VpGe: return "v_p(j)>=" + std::to_string(a);
      case Kind::Range: return "j in [" + std::to_string(a) + "," + std::to_string(b) + "]";
      case Kind::Congruence: return "j=" + std::to_string(a) + " mod " + std::to_string(b);
      case Kind::List: {
        std::string s = "j in {";
        for (std::size_t i = 0; i < list.size(); ++i) s += (i ? "," : "") + std::to_string(list[i]);
        return s + "}";
      }
    }
    return "";
  }
};

/** base^k for k in [lo, hi] (kInf for unbounded) subject to a constraint. */
struct Factor {
  std::string name;
  Monomial base;
  i64 lo = 0, hi = 0;
  Constraint cons;
};

/** A fixed multiplier of a summand; key names it for family differentials. */
struct Prefix {
  std::string key;
  Monomial mono;
};

/**
 * prefix * prod factor_i^{k_i}. If family >= 0 the prefix together with
 * that factor forms one block whose differential is given by a family rule.
 */
struct Summand {
  std::string name;
  std::vector<Prefix> prefixes;
  std::vector<Factor> factors;
  int family = -1;
  bool normal_only = false;  // keep only exponent vectors that are ring normal forms
};

struct LabeledClass {
  Monomial label;
  u32 coef = 1;  // normal form of the product is coef * label
  Tri tri;
  int summand = 0, prefix = 0;
  std::vector<i64> ex;
};

struct Cell {
  i64 s = 0, n = 0;
  int w = 0;
  auto operator<=>(const Cell&) const = default;
  std::string str() const {
    return "(s=" + std::to_string(s) + ",n=" + std::to_string(n) + ",w=" + std::to_string(w) + ")";
  }
};

struct CellHash {
  std::size_t operator()(const Cell& c) const noexcept {
    std::size_t h = std::hash<i64>()(c.s);
    h = h * 1000003u ^ std::hash<i64>()(c.n);
    return h * 31u ^ std::size_t(c.w);
  }
};

inline Cell cell_of(const Tri& t) { return Cell{t.s, t.n(), t.w}; }

/**
 * Direct sum of tensor-product summands over an ambient ring. The ambient
 * ring supplies degrees, weights and the labels of basis classes.
 */
class DimSpec {
 public:
  DimSpec() = default;
  DimSpec(RingPtr ring, std::string name) : ring_(std::move(ring)), name_(std::move(name)) {}

  static DimSpec of_ring(RingPtr ring, std::string name) {
    DimSpec d(ring, std::move(name));
    Summand s;
    s.name = "ring";
    s.normal_only = true;
    s.prefixes.push_back({"", ring->one()});
    for (std::size_t i = 0; i < ring->size(); ++i) {
      const auto& g = ring->gen(i);
      Factor f;
      f.name = g.name;
      f.base = ring->gen_mono(g.name);
      switch (g.kind) {
        case Kind::Exterior: f.hi = 1; break;
        case Kind::Truncated: f.hi = g.height - 1; break;
        case Kind::Polynomial: f.hi = ring->is_odd(i) ? 1 : kInf; break;
        case Kind::Laurent: f.lo = -kInf; f.hi = kInf; break;
      }
      if (g.kind != Kind::Laurent) f.hi = ring->normal_bound(i);
      s.factors.push_back(f);
    }
    d.add(std::move(s));
    return d;
  }

  const RingSpec& ring() const { return *ring_; }
  RingPtr ring_ptr() const { return ring_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  const std::vector<Summand>& summands() const { return summands_; }

  DimSpec& add(Summand s) {
    if (s.prefixes.empty()) s.prefixes.push_back({"", ring_->one()});
    summands_.push_back(std::move(s));
    return *this;
  }
  DimSpec& append(const DimSpec& o) {
    for (const auto& s : o.summands_) summands_.push_back(s);
    return *this;
  }

  /**
   * Raw product in the canonical order (prefix, family factor, remaining
   * factors by index) with its Koszul sign.
   */
  std::optional<std::pair<u32, Monomial>> raw_product(const Summand& sm, int prefix, const std::vector<i64>& ex) const {
    const auto& R = *ring_;
    std::pair<u32, Monomial> acc{1, sm.prefixes[prefix].mono};
    auto mult = [&](std::size_t i) {
      if (ex[i] == 0) return true;
      auto pw = R.mono_pow(sm.factors[i].base, ex[i]);
      if (!pw) return false;
      auto pr = R.mono_mul(acc.second, pw->second);
      if (!pr) return false;
      acc = {fp_mul(acc.first, pr->first, R.prime()), pr->second};
      return true;
    };
    if (sm.family >= 0 && !mult(std::size_t(sm.family))) return std::nullopt;
    for (std::size_t i = 0; i < sm.factors.size(); ++i)
      if (int(i) != sm.family && !mult(i)) return std::nullopt;
    return acc;
  }

  /**
   * Emits every basis class in the window (unsorted). Throws InvalidLabel if
   * a listed class normalizes to zero or to more than one monomial.
   */
  void enumerate(const Window& win, const std::function<void(LabeledClass&&)>& emit) const {
    const auto& R = *ring_;
    const u32 p = R.prime();
    for (std::size_t si = 0; si < summands_.size(); ++si) {
      const auto& sm = summands_[si];
      std::vector<LatticeItem> items;
      for (const auto& f : sm.factors) {
        Tri t = R.tri(f.base);
        LatticeItem it{t.s, t.t, f.lo, f.hi, nullptr};
        if (f.cons.kind != Constraint::Kind::Any) {
          auto c = f.cons;
          it.filter = [c](i64 j) { return c.ok(j); };
        }
        items.push_back(std::move(it));
      }
      LatticePrune prune;
      if (sm.normal_only) {
        prune = [&](const std::vector<i64>& ex, const std::vector<bool>& assigned) {
          for (const auto& r : R.rules()) {
            bool hit = true;
            for (std::size_t i = 0; i < ex.size() && hit; ++i)
              if (r.lhs.e[i] > 0 && (!assigned[i] || ex[i] < r.lhs.e[i])) hit = false;
            if (hit) return true;
          }
          return false;
        };
      }
      for (std::size_t pi = 0; pi < sm.prefixes.size(); ++pi) {
        Tri pt = R.tri(sm.prefixes[pi].mono);
        enumerate_lattice(
            items, pt.s, pt.t, win,
            [&](const std::vector<i64>& ex, i64, i64) {
              auto raw = raw_product(sm, int(pi), ex);
              if (sm.normal_only) {
                if (!raw || !R.is_normal(raw->second)) return;
                emit(LabeledClass{raw->second, 1, R.tri(raw->second), int(si), int(pi), ex});
                return;
              }
              if (!raw) throw InvalidLabel("class of " + sm.name + " vanishes structurally" + exponents(sm, ex));
              Element nf = R.normal_form(raw->second);
              if (nf.terms.size() != 1)
                throw InvalidLabel("class of " + sm.name + " normalizes to " + R.str(nf) + exponents(sm, ex));
              const auto& [m, c] = *nf.terms.begin();
              emit(LabeledClass{m, fp_mul(c, raw->first, p), R.tri(m), int(si), int(pi), ex});
            },
            prune);
      }
    }
  }

  /** Basis grouped by cell, each cell sorted by label; DuplicateLabel on a repeated label. */
  std::unordered_map<Cell, std::vector<LabeledClass>, CellHash> cells(const Window& win) const {
    std::unordered_map<Cell, std::vector<LabeledClass>, CellHash> out;
    enumerate(win, [&](LabeledClass&& c) { out[cell_of(c.tri)].push_back(std::move(c)); });
    for (auto& [cell, v] : out) {
      std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.label < b.label; });
      for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i].label == v[i - 1].label)
          throw DuplicateLabel(name_ + ": label " + ring_->str(v[i].label) + " listed by " +
                               summands_[v[i - 1].summand].name + " and " + summands_[v[i].summand].name);
    }
    return out;
  }

  /** Sorted basis inside the window, optionally restricted to one weight. */
  std::vector<LabeledClass> basis(const Window& win, std::optional<int> weight = std::nullopt) const {
    std::vector<LabeledClass> out;
    for (auto& [cell, v] : cells(win))
      for (auto& c : v)
        if (!weight || c.tri.w == *weight) out.push_back(c);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.label < b.label; });
    return out;
  }

  std::string str(const LabeledClass& c) const {
    std::string s = ring_->str(c.label);
    return c.coef == 1 ? s : std::to_string(c.coef) + "*" + s;
  }

  /** Dimension per cell. */
  std::map<Cell, i64> cell_dims(const Window& win) const {
    std::map<Cell, i64> out;
    enumerate(win, [&](LabeledClass&& c) { ++out[cell_of(c.tri)]; });
    return out;
  }

 private:
  std::string exponents(const Summand& sm, const std::vector<i64>& ex) const {
    std::string s = " (";
    for (std::size_t i = 0; i < ex.size(); ++i) s += (i ? "," : "") + sm.factors[i].name + "^" + std::to_string(ex[i]);
    return s + ")";
  }

  RingPtr ring_;
  std::string name_;
  std::vector<Summand> summands_;
};

/** Graded dimension by total degree, optionally for one weight. */
inline std::map<i64, i64> hilbert(const DimSpec& spec, const Window& win, std::optional<int> weight = std::nullopt) {
  std::map<i64, i64> h;
  for (i64 n = win.n_lo; n <= win.n_hi; ++n) h[n] = 0;
  spec.enumerate(win, [&](LabeledClass&& c) {
    if (weight && c.tri.w != *weight) return;
    ++h[c.tri.n()];
  });
  return h;
}

/** Graded dimension keyed by (n, w). */
inline std::map<std::pair<i64, int>, i64> hilbert_nw(const DimSpec& spec, const Window& win) {
  std::map<std::pair<i64, int>, i64> h;
  spec.enumerate(win, [&](LabeledClass&& c) { ++h[{c.tri.n(), c.tri.w}]; });
  return h;
}

/** Rows for every key where the two maps differ (absent keys count as zero). */
template <class K>
void compare_dims(Check& chk, const std::map<K, i64>& expected, const std::map<K, i64>& got,
                  const std::function<std::string(const K&)>& where) {
  auto ie = expected.begin();
  auto ig = got.begin();
  while (ie != expected.end() || ig != got.end()) {
    if (ig == got.end() || (ie != expected.end() && ie->first < ig->first)) {
      if (ie->second != 0) chk.fail(where(ie->first), std::to_string(ie->second), "0");
      ++ie;
    } else if (ie == expected.end() || ig->first < ie->first) {
      if (ig->second != 0) chk.fail(where(ig->first), "0", std::to_string(ig->second));
      ++ig;
    } else {
      if (ie->second != ig->second) chk.fail(where(ie->first), std::to_string(ie->second), std::to_string(ig->second));
      ++ie;
      ++ig;
    }
  }
}

inline std::string cell_str(const Cell& c) { return c.str(); }
inline std::string deg_str(const i64& n) { return "n=" + std::to_string(n); }
inline std::string nw_str(const std::pair<i64, int>& k) {
  return "n=" + std::to_string(k.first) + ",w=" + std::to_string(k.second);
}

// builders ----------------------------------------------------------------

inline Factor fac(const RingSpec& R, const std::string& name, const std::string& base, i64 lo, i64 hi,
                  Constraint c = {}) {
  return Factor{name, R.parse(base), lo, hi, std::move(c)};
}
inline Factor ext(const RingSpec& R, const std::string& name, const std::string& base) {
  return fac(R, name, base, 0, 1);
}
inline Factor poly(const RingSpec& R, const std::string& name, const std::string& base) {
  return fac(R, name, base, 0, kInf);
}
/** P_h(x): exponents 0..h-1. */
inline Factor trunc(const RingSpec& R, const std::string& name, const std::string& base, i64 h) {
  return fac(R, name, base, 0, h - 1);
}
inline Factor laurent(const RingSpec& R, const std::string& name, const std::string& base) {
  return fac(R, name, base, -kInf, kInf);
}
inline Prefix pre(const RingSpec& R, const std::string& key, const std::string& mono) { return Prefix{key, R.parse(mono)}; }

}  // namespace ssr
