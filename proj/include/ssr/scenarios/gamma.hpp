#pragma once

#include <string>

#include "ssr/scenarios/towers.hpp"

namespace ssr::scen {

/** The r(n) table and its recursion r(n) - r(n-2) = p^n. */
inline CheckReport scenario_rn(u32 p, int n_max = 12) {
  CheckReport rep;
  rep.scenario = "rn(p=" + std::to_string(p) + ")";
  Check tab{"r(n) for n = 0..6"};
  json row = json::array();
  for (int n = 0; n <= 6; ++n) row.push_back(r_of(n, p));
  if (p == 5) {
    const i64 want[] = {0, 5, 25, 130, 650, 3255, 16275};
    for (int n = 0; n <= 6; ++n)
      if (r_of(n, p) != want[n]) tab.fail("n=" + std::to_string(n), std::to_string(want[n]), std::to_string(r_of(n, p)));
  }
  tab.data["r"] = row;
  rep.add(tab);
  Check rec{"r(n) - r(n-2) = p^n"};
  for (int n = 1; n <= n_max; ++n) {
    // closed form: sum of p^k over k = n, n-2, ... > 0
    i64 direct = 0;
    for (int k = n; k > 0; k -= 2) direct += ipow(p, k);
    if (r_of(n, p) != direct) rec.fail("n=" + std::to_string(n), std::to_string(direct), std::to_string(r_of(n, p)));
    if (r_of(n, p) - r_of(n - 2, p) != ipow(p, n))
      rec.fail("n=" + std::to_string(n), std::to_string(ipow(p, n)), std::to_string(r_of(n, p) - r_of(n - 2, p)));
  }
  rep.add(rec);
  return rep;
}

/**
 * Localization away from mu: summed over filtrations, the last Tate page
 * for C_p has the dimensions of THH[mu^{-1}] in degrees above 2p-2.
 */
inline CheckReport check_gamma1(const Tower& cp, i64 n_hi) {
  const u32 p = cp.cfg.p;
  CheckReport rep;
  rep.scenario = "gamma1(p=" + std::to_string(p) + ")";
  AmbientOptions o;
  o.mu_laurent = true;
  auto R = thh_ring(p, o);
  const i64 n_lo = 2 * i64(p) - 1;
  std::map<std::pair<i64, int>, i64> target;
  R->enumerate_normal(Window::degrees(n_lo, n_hi), [&](const Monomial&, const Tri& t) { ++target[{t.n(), t.w}]; });
  // every total degree of the last page is finite, so s needs no bound
  Window win = Window::degrees(n_lo, n_hi);
  const DimSpec& einf = cp.pages.back().spec;
  rep.add(abutment_check(einf, win, target, n_lo, n_hi, std::nullopt, "sum over s of E^inf(Cp) = THH[mu^-1], all weights"));
  rep.add(abutment_check(einf, win, target, n_lo, n_hi, 0, "sum over s of E^inf(Cp) = THH[mu^-1], weight 0"));
  return rep;
}

}  // namespace ssr::scen
