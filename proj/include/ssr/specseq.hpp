#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ssr/dimspec.hpp"
#include "ssr/fp.hpp"
#include "ssr/report.hpp"

namespace ssr {

/** A claimed E^r term; d^r has tri-degree (-r, r-1, 0). */
struct Page {
  std::string label;
  DimSpec spec;
};

using FamilyMap = std::function<Element(i64 j)>;

/**
 * Generator-level differential of length r. gen maps a factor name to the
 * image of its base; family maps a prefix key to the image of prefix*var^j.
 * Everything unassigned is a cycle.
 */
struct DerivationRule {
  int r = 2;
  std::string label;
  std::map<std::string, Element> gen;
  std::map<std::string, FamilyMap> family;
};

struct PageTransition {
  Page source;
  DerivationRule rule;
  Page target;
};

using CellMap = std::unordered_map<Cell, std::vector<LabeledClass>, CellHash>;

namespace detail {

inline const LabeledClass* find_label(const std::vector<LabeledClass>& v, const Monomial& m) {
  auto it = std::lower_bound(v.begin(), v.end(), m, [](const LabeledClass& c, const Monomial& x) { return c.label < x; });
  return (it != v.end() && it->label == m) ? &*it : nullptr;
}

using Signed = std::pair<u32, Monomial>;

inline std::optional<Signed> times(const RingSpec& R, const std::optional<Signed>& a, const Monomial& b) {
  if (!a) return std::nullopt;
  auto pr = R.mono_mul(a->second, b);
  if (!pr) return std::nullopt;
  return Signed{fp_mul(a->first, pr->first, R.prime()), pr->second};
}

}  // namespace detail

/**
 * Applies a derivation rule to labeled classes of one page, using the
 * Leibniz rule over the summand's factor decomposition. Products are
 * formed in the ambient ring; a product that is not a label of the page
 * is zero there.
 */
class LeibnizEvaluator {
 public:
  LeibnizEvaluator(const DimSpec& spec, const DerivationRule& rule) : spec_(spec), rule_(rule) {
    const auto& R = spec.ring();
    for (const auto& [name, y] : rule.gen) {
      // every summand factor with this name must have a matching base degree
      for (const auto& sm : spec.summands())
        for (const auto& f : sm.factors) {
          if (f.name != name) continue;
          Tri bt = R.tri(f.base);
          for (const auto& [m, c] : y.terms) {
            Tri yt = R.tri(m);
            if (yt.s != bt.s - rule.r || yt.t != bt.t + rule.r - 1 || yt.w != bt.w)
              throw TargetOutsideBasis("d^" + std::to_string(rule.r) + "(" + name + ") = " + R.str(y) +
                                       " has the wrong tri-degree");
          }
        }
    }
  }

  /** d(x) as ambient terms: normalized monomial -> coefficient. */
  Element apply(const LabeledClass& x) const {
    const auto& R = spec_.ring();
    const u32 p = R.prime();
    const auto& sm = spec_.summands()[x.summand];
    const auto& pf = sm.prefixes[x.prefix];

    // pieces in the canonical order of DimSpec::raw_product: the block
    // (prefix times family power) first, then the other factors
    std::vector<Monomial> piece;
    std::vector<int> owner;  // factor index, -1 for the block
    detail::Signed block{1, pf.mono};
    if (sm.family >= 0 && x.ex[sm.family] != 0) {
      auto pw = R.mono_pow(sm.factors[sm.family].base, x.ex[sm.family]);
      if (!pw) return {};
      auto pr = R.mono_mul(block.second, pw->second);
      if (!pr) return {};
      block = *pr;
    }
    piece.push_back(block.second);
    owner.push_back(-1);
    for (std::size_t i = 0; i < sm.factors.size(); ++i) {
      if (int(i) == sm.family || x.ex[i] == 0) continue;
      auto pw = R.mono_pow(sm.factors[i].base, x.ex[i]);
      if (!pw) return {};
      piece.push_back(pw->second);
      owner.push_back(int(i));
    }
    const std::size_t np = piece.size();
    // left[i]: block sign times piece[0..i) ; right[i]: piece[i..np)
    std::vector<std::optional<detail::Signed>> left(np + 1), right(np + 1);
    left[0] = detail::Signed{block.first, R.one()};
    for (std::size_t i = 0; i < np; ++i) left[i + 1] = detail::times(R, left[i], piece[i]);
    right[np] = detail::Signed{1, R.one()};
    for (std::size_t i = np; i-- > 0;) {
      if (!right[i + 1]) continue;
      auto pr = R.mono_mul(piece[i], right[i + 1]->second);
      if (pr) right[i] = detail::Signed{fp_mul(pr->first, right[i + 1]->first, p), pr->second};
    }

    Element out;
    auto emit = [&](const detail::Signed& pre, const Monomial& mid, u32 coef, std::size_t after) {
      if (!right[after] || coef == 0) return;
      auto a = R.mono_mul(pre.second, mid);
      if (!a) return;
      auto b = R.mono_mul(a->second, right[after]->second);
      if (!b) return;
      u32 c = fp_mul(fp_mul(coef, pre.first, p), fp_mul(a->first, b->first, p), p);
      out.add(R.normal_form(b->second), fp_mul(c, right[after]->first, p), p);
    };

    // d(prefix * var^j) is given as a whole, so the block sign cancels
    auto fam = pf.key.empty() ? rule_.family.end() : rule_.family.find(pf.key);
    if (fam != rule_.family.end()) {
      i64 j = sm.family >= 0 ? x.ex[sm.family] : 0;
      Element z = fam->second(j);
      Tri bt = R.tri(block.second);
      for (const auto& [m, c] : z.terms) {
        Tri zt = R.tri(m);
        if (zt.s != bt.s - rule_.r || zt.t != bt.t + rule_.r - 1 || zt.w != bt.w)
          throw TargetOutsideBasis("family image of " + R.str(block.second) + " has the wrong tri-degree");
        emit(detail::Signed{1, R.one()}, m, c, 1);
      }
    }
    for (std::size_t i = 1; i < np; ++i) {
      const auto& f = sm.factors[owner[i]];
      auto g = rule_.gen.find(f.name);
      if (g == rule_.gen.end() || g->second.is_zero() || !left[i]) continue;
      i64 e = x.ex[owner[i]];
      u32 kcoef = mod_p(e, p);
      if (kcoef == 0) continue;
      auto pre = left[i];
      if (e != 1) {
        auto pw = R.mono_pow(f.base, e - 1);
        if (!pw) continue;
        pre = detail::times(R, pre, pw->second);
        if (!pre) continue;
      }
      u32 sign = R.is_odd(left[i]->second) ? p - 1 : 1;
      for (const auto& [m, c] : g->second.terms) emit(*pre, m, fp_mul(fp_mul(c, kcoef, p), sign, p), i + 1);
    }
    return out;
  }

 private:
  const DimSpec& spec_;
  const DerivationRule& rule_;
};

struct TurnOptions {
  bool check_dd = true;
  std::size_t max_witness = 3;
};

namespace detail {

inline std::string witness(const DimSpec& spec, const std::vector<LabeledClass>* v, std::size_t k) {
  if (!v || v->empty()) return "";
  std::string s;
  for (std::size_t i = 0; i < v->size() && i < k; ++i) s += (i ? ", " : "") + spec.str((*v)[i]);
  if (v->size() > k) s += ", ...";
  return s;
}

}  // namespace detail

/** Differential matrix out of one cell; rows index the target cell's classes. */
inline FpMatrix differential_matrix(const LeibnizEvaluator& ev, const DimSpec& spec, const std::vector<LabeledClass>& src,
                                    const std::vector<LabeledClass>* dst, const Cell& dst_cell, bool strict_family) {
  const auto& R = spec.ring();
  const u32 p = R.prime();
  FpMatrix m(dst ? dst->size() : 0, src.size(), p);
  for (std::size_t col = 0; col < src.size(); ++col) {
    Element img = ev.apply(src[col]);
    u32 inv = fp_inv(src[col].coef, p);
    for (const auto& [mono, c] : img.terms) {
      Tri t = R.tri(mono);
      if (cell_of(t) != dst_cell)
        throw TargetOutsideBasis("d of " + spec.str(src[col]) + " produced " + R.str(mono) + " in " + cell_of(t).str());
      const LabeledClass* hit = dst ? detail::find_label(*dst, mono) : nullptr;
      if (!hit) {
        if (strict_family) throw TargetOutsideBasis("image " + R.str(mono) + " of " + spec.str(src[col]) + " is not a page class");
        continue;
      }
      std::size_t row = std::size_t(hit - dst->data());
      m.add(row, col, fp_mul(fp_mul(c, inv, p), fp_inv(hit->coef, p), p));
    }
  }
  return m;
}

struct TurnResult {
  CheckReport report;
  std::map<Cell, i64> computed;  // E^{r+1} dims inside the window
  std::size_t classes = 0;
  std::size_t total_rank = 0;
};

/**
 * One checked page turn: builds d^r on the source page over the window
 * padded by (r, 1), verifies d o d = 0 wherever both maps are available,
 * and compares the homology with the claimed target per cell.
 */
inline TurnResult turn_page(const PageTransition& tr, const Window& win, const TurnOptions& opt = {}) {
  const int r = tr.rule.r;
  const Window pad = win.padded(r, 1);
  const DimSpec& src = tr.source.spec;
  const auto& R = src.ring();
  TurnResult res;
  res.report.scenario = tr.source.label + " -> " + tr.target.label;

  // every generator assignment must be expressed in source page labels
  Check assign{"d^" + std::to_string(r) + " assignments in page span"};
  for (const auto& [name, y] : tr.rule.gen)
    for (const auto& [m, c] : y.terms) {
      Tri t = R.tri(m);
      auto one = src.cells(Window::cell(t.s, t.n()));
      auto it = one.find(cell_of(t));
      if (it == one.end() || !detail::find_label(it->second, m))
        throw TargetOutsideBasis("d^" + std::to_string(r) + "(" + name + ") = " + R.str(y) + " leaves the page " +
                                 tr.source.label);
    }
  res.report.add(assign);

  CellMap cells = src.cells(pad);
  for (auto& [c, v] : cells) res.classes += v.size();
  LeibnizEvaluator ev(src, tr.rule);

  std::unordered_map<Cell, FpMatrix, CellHash> out;
  std::unordered_map<Cell, std::size_t, CellHash> rk;
  std::vector<Cell> keys;
  for (auto& [c, v] : cells) keys.push_back(c);
  std::sort(keys.begin(), keys.end());
  for (const auto& c : keys) {
    Cell d{c.s - r, c.n - 1, c.w};
    if (!pad.contains(d.s, d.n)) continue;
    auto it = cells.find(d);
    const std::vector<LabeledClass>* dst = it == cells.end() ? nullptr : &it->second;
    FpMatrix m = differential_matrix(ev, src, cells[c], dst, d, false);
    rk[c] = rank(m);
    res.total_rank += rk[c];
    out.emplace(c, std::move(m));
  }

  Check dd{"d^" + std::to_string(r) + " o d^" + std::to_string(r) + " = 0"};
  std::size_t dd_checked = 0;
  if (opt.check_dd)
    for (const auto& c : keys) {
      auto a = out.find(c);
      if (a == out.end() || a->second.rows() == 0) continue;
      auto b = out.find(Cell{c.s - r, c.n - 1, c.w});
      if (b == out.end()) continue;
      ++dd_checked;
      if (!(b->second * a->second).is_zero())
        throw CompositionNonzero("d^" + std::to_string(r) + " o d^" + std::to_string(r) + " != 0 at " + c.str() +
                                 " on " + detail::witness(src, &cells[c], opt.max_witness));
    }
  dd.data["cells"] = dd_checked;
  res.report.add(dd);

  Check hom{"E^" + std::to_string(r + 1) + " dims match " + tr.target.label};
  Check book{"bookkeeping identity"};
  auto claimed = tr.target.spec.cell_dims(win);
  std::map<Cell, i64> computed;
  for (const auto& c : keys) {
    if (!win.contains(c.s, c.n)) continue;
    const auto& v = cells[c];
    auto o = out.find(c);
    Cell up{c.s + r, c.n + 1, c.w};
    auto in = out.find(up);
    FpMatrix survivors = o != out.end() ? o->second : FpMatrix(0, v.size(), R.prime());
    FpMatrix killers = in != out.end() ? in->second : FpMatrix(v.size(), 0, R.prime());
    std::size_t h = subquotient_dim(v.size(), killers, survivors);
    std::size_t r_out = o != out.end() ? rk[c] : 0;
    std::size_t r_in = in != out.end() ? rk[up] : 0;
    if (i64(h) != i64(v.size()) - i64(r_out) - i64(r_in))
      book.fail(c.str(), std::to_string(v.size() - r_out - r_in), std::to_string(h));
    if (h) computed[c] = i64(h);
  }
  for (auto it = claimed.begin(); it != claimed.end();)
    it = it->second == 0 ? claimed.erase(it) : std::next(it);
  auto ic = claimed.begin();
  auto ih = computed.begin();
  while (ic != claimed.end() || ih != computed.end()) {
    bool take_c = ih == computed.end() || (ic != claimed.end() && ic->first < ih->first);
    bool take_h = ic == claimed.end() || (ih != computed.end() && ih->first < ic->first);
    if (take_c) {
      auto w = cells.find(ic->first);
      hom.fail(ic->first.str(), std::to_string(ic->second), "0",
               detail::witness(src, w == cells.end() ? nullptr : &w->second, opt.max_witness));
      ++ic;
    } else if (take_h) {
      hom.fail(ih->first.str(), "0", std::to_string(ih->second), detail::witness(src, &cells[ih->first], opt.max_witness));
      ++ih;
    } else {
      if (ic->second != ih->second)
        hom.fail(ic->first.str(), std::to_string(ic->second), std::to_string(ih->second),
                 detail::witness(src, &cells[ic->first], opt.max_witness));
      ++ic;
      ++ih;
    }
  }
  hom.data["cells"] = computed.size();
  hom.data["classes"] = res.classes;
  hom.data["rank"] = res.total_rank;
  res.report.add(hom);
  res.report.add(book);
  res.computed = std::move(computed);
  return res;
}

/** Compares two presentations of the same page cell by cell. */
inline Check spec_equal(const DimSpec& a, const DimSpec& b, const Window& win, const std::string& name) {
  Check chk{name};
  compare_dims<Cell>(chk, a.cell_dims(win), b.cell_dims(win), cell_str);
  return chk;
}

struct Slot {
  Cell source;
  int r;
  std::string witness;
};

/**
 * Bounded collapse scan: every nonzero cell of the window is paired with the
 * cell a d^r would hit; each nonzero pair is a candidate slot.
 */
inline std::vector<Slot> collapse_slots(const Page& page, int r_lo, int r_hi, const Window& win) {
  auto cells = page.spec.cells(win.padded(r_hi, 1));
  std::vector<Slot> slots;
  std::vector<Cell> keys;
  for (auto& [c, v] : cells)
    if (win.contains(c.s, c.n)) keys.push_back(c);
  std::sort(keys.begin(), keys.end());
  for (const auto& c : keys)
    for (int r = r_lo; r <= r_hi; ++r) {
      auto it = cells.find(Cell{c.s - r, c.n - 1, c.w});
      if (it != cells.end() && !it->second.empty())
        slots.push_back({c, r, page.spec.str(cells[c].front()) + " -> " + page.spec.str(it->second.front())});
    }
  return slots;
}

inline Check check_collapse(const Page& page, int r_lo, int r_hi, const Window& win) {
  Check chk{"collapse " + page.label + " for r in [" + std::to_string(r_lo) + "," + std::to_string(r_hi) + "]"};
  auto slots = collapse_slots(page, r_lo, r_hi, win);
  for (const auto& s : slots) chk.fail(s.source.str() + " r=" + std::to_string(s.r), "no target", "nonzero target", s.witness);
  chk.data["slots"] = slots.size();
  return chk;
}

/** Sum over filtrations of the E-infinity page against the abutment, per (n, w). */
inline Check abutment_check(const DimSpec& einf, const Window& einf_win, const std::map<std::pair<i64, int>, i64>& target,
                            i64 n_lo, i64 n_hi, std::optional<int> weight, const std::string& name) {
  Check chk{name};
  std::map<std::pair<i64, int>, i64> got, want;
  einf.enumerate(einf_win, [&](LabeledClass&& c) {
    i64 n = c.tri.n();
    if (n < n_lo || n > n_hi || (weight && c.tri.w != *weight)) return;
    ++got[{n, c.tri.w}];
  });
  for (const auto& [k, v] : target)
    if (k.first >= n_lo && k.first <= n_hi && (!weight || k.second == *weight)) want[k] = v;
  compare_dims<std::pair<i64, int>>(chk, want, got, nw_str);
  return chk;
}

/** Graded dimensions over a degree range, index 0 = lowest degree. */
struct Graded {
  i64 lo = 0;
  std::vector<i64> d;
  i64 at(i64 n) const { return (n < lo || n >= lo + i64(d.size())) ? 0 : d[std::size_t(n - lo)]; }
  i64 hi() const { return lo + i64(d.size()) - 1; }
  static Graded from(const std::map<i64, i64>& m, i64 lo, i64 hi) {
    Graded g{lo, std::vector<i64>(std::size_t(hi - lo + 1), 0)};
    for (const auto& [n, v] : m)
      if (n >= lo && n <= hi) g.d[std::size_t(n - lo)] = v;
    return g;
  }
};

struct LESData {
  Graded A, B, C;  // A_n -> B_n -> C_n -> A_{n-1}
};

struct LESResult {
  bool feasible = false;
  i64 failing_degree = 0;
  std::map<i64, std::array<i64, 3>> ranks;  // n -> (A->B, B->C, C->A[n-1])
};

/**
 * Exactness of A_n -> B_n -> C_n -> A_{n-1} -> ... given only dimensions.
 * Below the range everything is zero; the rank of the top map A_hi -> B_hi
 * is free (the sequence may continue above the range), every other rank is
 * then forced.
 */
inline LESResult les_feasible(const LESData& data) {
  i64 lo = std::min({data.A.lo, data.B.lo, data.C.lo});
  i64 hi = std::max({data.A.hi(), data.B.hi(), data.C.hi()});
  LESResult best;
  best.failing_degree = hi;
  i64 top = std::min(data.A.at(hi), data.B.at(hi));
  for (i64 a0 = top; a0 >= 0; --a0) {
    LESResult res;
    i64 a = a0;
    bool ok = true;
    i64 fail = lo;
    for (i64 n = hi; n >= lo && ok; --n) {
      i64 An = data.A.at(n), Bn = data.B.at(n), Cn = data.C.at(n), Anext = data.A.at(n - 1);
      i64 b = Bn - a;
      i64 c = Cn - b;
      i64 an = Anext - c;  // rank of A_{n-1} -> B_{n-1}
      if (a < 0 || a > std::min(An, Bn) || b < 0 || b > std::min(Bn, Cn) || c < 0 || c > std::min(Cn, Anext) ||
          an < 0 || (n - 1 >= lo && an > std::min(Anext, data.B.at(n - 1)))) {
        ok = false;
        fail = n;
        break;
      }
      if (n - 1 < lo && an != 0) {
        ok = false;
        fail = n;
        break;
      }
      res.ranks[n] = {a, b, c};
      a = an;
    }
    if (ok) {
      res.feasible = true;
      return res;
    }
    if (fail < best.failing_degree || a0 == top) best.failing_degree = fail;
  }
  return best;
}

/** H_* with the dual operation (P^1)^* lowering degree by 2p-2. */
struct GradedOperator {
  std::map<i64, std::size_t> dims;
  std::map<i64, FpMatrix> op;  // op[n]: H_n -> H_{n-2p+2}
};

/**
 * V(1)-homotopy read off the two-line Atiyah-Hirzebruch page
 * H_* {1, alpha_1} with d(z) = (P^1)^*(z) alpha_1.
 */
inline std::map<i64, i64> two_line_ah(const GradedOperator& h, u32 p, i64 cutoff) {
  const i64 limit = 2 * i64(p) * p - 2 * p - 3;
  if (cutoff >= limit)
    throw CutoffTooLarge("two-line page is only valid below degree " + std::to_string(limit));
  const i64 alpha = 2 * i64(p) - 3;
  auto dim = [&](i64 n) -> i64 {
    auto it = h.dims.find(n);
    return it == h.dims.end() ? 0 : i64(it->second);
  };
  auto rk = [&](i64 n) -> i64 {
    auto it = h.op.find(n);
    if (it == h.op.end()) return 0;
    return i64(rank(it->second));
  };
  std::map<i64, i64> out;
  i64 lo = h.dims.empty() ? 0 : h.dims.begin()->first;
  for (i64 n = lo; n <= cutoff; ++n) {
    i64 ker = dim(n) - rk(n);
    i64 cok = dim(n - alpha) - rk(n + 1);
    out[n] = ker + cok;
  }
  return out;
}

}  // namespace ssr
