#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ssr/errors.hpp"

namespace ssr {

using i64 = std::int64_t;

inline constexpr i64 kInf = std::numeric_limits<i64>::max() / 4;

/** Filtration and total-degree window; s may be unbounded. */
struct Window {
  i64 s_lo = -kInf, s_hi = kInf;
  i64 n_lo = 0, n_hi = 0;

  static Window degrees(i64 n_lo, i64 n_hi) { return Window{-kInf, kInf, n_lo, n_hi}; }
  static Window cell(i64 s, i64 n) { return Window{s, s, n, n}; }

  bool contains(i64 s, i64 n) const { return s >= s_lo && s <= s_hi && n >= n_lo && n <= n_hi; }
  Window padded(i64 ds, i64 dn) const {
    Window w = *this;
    if (w.s_lo != -kInf) w.s_lo -= ds;
    if (w.s_hi != kInf) w.s_hi += ds;
    w.n_lo -= dn;
    w.n_hi += dn;
    return w;
  }
};

/** One integer exponent with a linear contribution to (s, t). */
struct LatticeItem {
  i64 ds = 0, dt = 0;
  i64 lo = 0, hi = 0;  // inclusive, kInf for unbounded
  std::function<bool(i64)> filter;
};

namespace detail {

struct Interval {
  i64 lo, hi;
};

inline i64 sat_add(i64 a, i64 b) {
  if (a == kInf || b == kInf) return (a == -kInf || b == -kInf) ? 0 : kInf;
  if (a == -kInf || b == -kInf) return -kInf;
  return a + b;
}

inline Interval scaled(i64 c, i64 lo, i64 hi) {
  auto mul = [](i64 c, i64 x) -> i64 {
    if (c == 0) return 0;
    if (x == kInf) return c > 0 ? kInf : -kInf;
    if (x == -kInf) return c > 0 ? -kInf : kInf;
    return c * x;
  };
  i64 a = mul(c, lo), b = mul(c, hi);
  return {std::min(a, b), std::max(a, b)};
}

inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
inline i64 ceil_div(i64 a, i64 b) { return -floor_div(-a, b); }

/** Values m with c*m in [L, U]. */
inline Interval solve(i64 c, i64 L, i64 U) {
  if (c < 0) return solve(-c, U == kInf ? -kInf : -U, L == -kInf ? kInf : -L);
  Interval r{-kInf, kInf};
  if (L != -kInf) r.lo = ceil_div(L, c);
  if (U != kInf) r.hi = floor_div(U, c);
  return r;
}

}  // namespace detail

/**
 * Enumerates all exponent vectors whose (s, t) contribution plus the base
 * offset lands in the window. Picks the most constrained item at every
 * step; throws InfiniteFiber if the fiber is not provably finite.
 * The optional prune callback sees the partial assignment and may cut a
 * branch early.
 */
using LatticePrune = std::function<bool(const std::vector<i64>&, const std::vector<bool>&)>;

inline void enumerate_lattice(const std::vector<LatticeItem>& items, i64 base_s, i64 base_t, const Window& win,
                              const std::function<void(const std::vector<i64>&, i64 s, i64 t)>& emit,
                              const LatticePrune& prune = nullptr) {
  const std::size_t k = items.size();
  std::vector<i64> m(k, 0);
  std::vector<bool> assigned(k, false);
  const i64 t_lo = (win.s_hi == kInf) ? -kInf : win.n_lo - win.s_hi;
  const i64 t_hi = (win.s_lo == -kInf) ? kInf : win.n_hi - win.s_lo;

  std::function<void(std::size_t, i64, i64)> rec = [&](std::size_t depth, i64 acc_s, i64 acc_t) {
    if (depth == k) {
      if (win.contains(acc_s, acc_s + acc_t)) emit(m, acc_s, acc_t);
      return;
    }
    // bounds of every unassigned item given the others
    std::vector<detail::Interval> cs(k), ct(k), cn(k);
    for (std::size_t i = 0; i < k; ++i) {
      if (assigned[i]) continue;
      const auto& it = items[i];
      cs[i] = detail::scaled(it.ds, it.lo, it.hi);
      ct[i] = detail::scaled(it.dt, it.lo, it.hi);
      cn[i] = detail::scaled(it.ds + it.dt, it.lo, it.hi);
    }
    int best = -1;
    detail::Interval best_r{0, -1};
    for (std::size_t i = 0; i < k; ++i) {
      if (assigned[i]) continue;
      const auto& it = items[i];
      detail::Interval r{it.lo, it.hi};
      auto restrict = [&](i64 coef, const std::vector<detail::Interval>& c, i64 F_lo, i64 F_hi, i64 acc) {
        if (coef == 0) return;
        detail::Interval other{0, 0};
        for (std::size_t j = 0; j < k; ++j) {
          if (assigned[j] || j == i) continue;
          other.lo = detail::sat_add(other.lo, c[j].lo);
          other.hi = detail::sat_add(other.hi, c[j].hi);
        }
        i64 L = (F_lo == -kInf || other.hi == kInf) ? -kInf : F_lo - acc - other.hi;
        i64 U = (F_hi == kInf || other.lo == -kInf) ? kInf : F_hi - acc - other.lo;
        auto sol = detail::solve(coef, L, U);
        r.lo = std::max(r.lo, sol.lo);
        r.hi = std::min(r.hi, sol.hi);
      };
      restrict(it.ds, cs, win.s_lo, win.s_hi, acc_s);
      restrict(it.dt, ct, t_lo, t_hi, acc_t);
      restrict(it.ds + it.dt, cn, win.n_lo, win.n_hi, acc_s + acc_t);
      if (r.lo > r.hi) return;  // empty branch
      if (r.lo == -kInf || r.hi == kInf) continue;
      if (best < 0 || (r.hi - r.lo) < (best_r.hi - best_r.lo)) {
        best = int(i);
        best_r = r;
      }
    }
    if (best < 0) throw InfiniteFiber("enumeration window does not bound every exponent");
    assigned[best] = true;
    const auto& it = items[best];
    for (i64 v = best_r.lo; v <= best_r.hi; ++v) {
      if (it.filter && !it.filter(v)) continue;
      m[best] = v;
      if (prune && prune(m, assigned)) continue;
      rec(depth + 1, acc_s + it.ds * v, acc_t + it.dt * v);
    }
    m[best] = 0;
    assigned[best] = false;
  };
  rec(0, base_s, base_t);
}

/** p-adic valuation; v_p(0) is reported as kInf. */
inline i64 vp(i64 j, i64 p) {
  if (j == 0) return kInf;
  i64 v = 0;
  if (j < 0) j = -j;
  while (j % p == 0) {
    j /= p;
    ++v;
  }
  return v;
}

inline i64 ipow(i64 b, i64 e) {
  i64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline i64 mod_pos(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace ssr
