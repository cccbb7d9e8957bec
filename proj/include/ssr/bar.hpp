#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <vector>

#include "ssr/algebra.hpp"
#include "ssr/fp.hpp"
#include "ssr/report.hpp"

namespace ssr {

/**
 * A connected graded algebra of finite type with augmentation sending every
 * generator to zero. The augmentation ideal basis and the product table are
 * cached up to t_max.
 */
class AugmentedAlgebra {
 public:
  AugmentedAlgebra(RingPtr R, i64 t_max) : R_(std::move(R)), t_max_(t_max) {
    for (std::size_t i = 0; i < R_->size(); ++i) {
      const auto& g = R_->gen(i);
      if (g.kind == Kind::Laurent || R_->tri(R_->gen_mono(g.name)).n() <= 0)
        throw ConfigError("augmented algebra needs generators of positive degree: " + g.name);
    }
    R_->enumerate_normal(Window::degrees(1, t_max), [&](const Monomial& m, const Tri& t) {
      if (m.is_one()) return;
      elems_.push_back({m, t.n()});
    });
    std::sort(elems_.begin(), elems_.end(), [](const Elem& a, const Elem& b) {
      return a.deg != b.deg ? a.deg < b.deg : a.mono < b.mono;
    });
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      index_[elems_[i].mono] = i;
      by_degree_[elems_[i].deg].push_back(i);
    }
  }

  struct Elem {
    Monomial mono;
    i64 deg;
  };

  const RingSpec& ring() const { return *R_; }
  i64 t_max() const { return t_max_; }
  std::size_t size() const { return elems_.size(); }
  const Elem& elem(std::size_t i) const { return elems_[i]; }
  const std::vector<std::size_t>& in_degree(i64 t) const {
    static const std::vector<std::size_t> none;
    auto it = by_degree_.find(t);
    return it == by_degree_.end() ? none : it->second;
  }
  i64 dim(i64 t) const { return i64(in_degree(t).size()); }

  /** a_i a_j in the augmentation ideal basis. */
  const std::vector<std::pair<std::size_t, u32>>& product(std::size_t i, std::size_t j) const {
    auto key = std::make_pair(i, j);
    auto it = products_.find(key);
    if (it != products_.end()) return it->second;
    std::vector<std::pair<std::size_t, u32>> out;
    if (elems_[i].deg + elems_[j].deg <= t_max_) {
      Element e = R_->mul(elems_[i].mono, elems_[j].mono);
      for (const auto& [m, c] : e.terms) {
        auto f = index_.find(m);
        if (f == index_.end()) throw TargetOutsideBasis("product leaves the cached basis: " + R_->str(m));
        out.push_back({f->second, c});
      }
    }
    return products_.emplace(key, std::move(out)).first->second;
  }

 private:
  RingPtr R_;
  i64 t_max_;
  std::vector<Elem> elems_;
  std::map<Monomial, std::size_t> index_;
  std::map<i64, std::vector<std::size_t>> by_degree_;
  mutable std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, u32>>> products_;
};

/** (s, t) -> dimension. */
using BarBigrading = std::map<std::pair<i64, i64>, i64>;

namespace detail {

/** Bases of the reduced bar complex [a_1|...|a_s] with internal degree t. */
class BarBasis {
 public:
  BarBasis(const AugmentedAlgebra& A, std::size_t budget) : A_(A), budget_(budget) {}

  const std::vector<std::vector<std::size_t>>& get(i64 s, i64 t) {
    auto key = std::make_pair(s, t);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<std::vector<std::size_t>> out;
    if (s == 0) {
      if (t == 0) out.push_back({});
    } else {
      for (i64 d = 1; d <= t; ++d) {
        const auto& first = A_.in_degree(d);
        if (first.empty()) continue;
        const auto rest = get(s - 1, t - d);
        for (std::size_t a : first)
          for (const auto& r : rest) {
            std::vector<std::size_t> v{a};
            v.insert(v.end(), r.begin(), r.end());
            out.push_back(std::move(v));
            if (out.size() > budget_)
              throw BudgetExceeded("bar complex in bidegree (" + std::to_string(s) + "," + std::to_string(t) +
                                   ") exceeds the budget");
          }
      }
    }
    return cache_.emplace(key, std::move(out)).first->second;
  }

 private:
  const AugmentedAlgebra& A_;
  std::size_t budget_;
  std::map<std::pair<i64, i64>, std::vector<std::vector<std::size_t>>> cache_;
};

/** d[a_1|...|a_s] = sum_i (-1)^{e_i} [a_1|...|a_i a_{i+1}|...|a_s], e_i = sum_{j<=i} (|a_j| + 1). */
inline FpMatrix bar_differential(const AugmentedAlgebra& A, const std::vector<std::vector<std::size_t>>& src,
                                 const std::vector<std::vector<std::size_t>>& tgt) {
  const u32 p = A.ring().prime();
  std::map<std::vector<std::size_t>, std::size_t> row;
  for (std::size_t i = 0; i < tgt.size(); ++i) row[tgt[i]] = i;
  FpMatrix M(tgt.size(), src.size(), p);
  for (std::size_t col = 0; col < src.size(); ++col) {
    const auto& x = src[col];
    i64 e = 0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      e += A.elem(x[i]).deg + 1;
      for (const auto& [k, c] : A.product(x[i], x[i + 1])) {
        std::vector<std::size_t> y(x.begin(), x.begin() + i);
        y.push_back(k);
        y.insert(y.end(), x.begin() + i + 2, x.end());
        auto r = row.find(y);
        if (r == row.end()) throw TargetOutsideBasis("bar face leaves the basis");
        u32 v = e % 2 ? (p - c) % p : c;
        M.add(r->second, col, v);
      }
    }
  }
  return M;
}

}  // namespace detail

/**
 * Tor over A of (F_p, F_p) from the reduced bar complex, for s <= s_max and
 * t <= t_max. Throws CompositionNonzero if d o d fails and BudgetExceeded
 * on oversized bidegrees.
 */
inline BarBigrading bar_tor_dims(const AugmentedAlgebra& A, i64 s_max, i64 t_max, std::size_t budget = 400000) {
  if (t_max > A.t_max()) throw ConfigError("bar window exceeds the cached algebra");
  detail::BarBasis basis(A, budget);
  BarBigrading out;
  for (i64 t = 0; t <= t_max; ++t)
    for (i64 s = 0; s <= std::min(s_max, t); ++s) {
      const auto& here = basis.get(s, t);
      if (here.empty()) continue;
      const u32 p = A.ring().prime();
      FpMatrix in = s + 1 <= t ? detail::bar_differential(A, basis.get(s + 1, t), here) : FpMatrix(here.size(), 0, p);
      FpMatrix outm = s >= 1 ? detail::bar_differential(A, here, basis.get(s - 1, t)) : FpMatrix(0, here.size(), p);
      i64 d = i64(subquotient_dim(here.size(), in, outm));
      if (d) out[{s, t}] = d;
    }
  return out;
}

/** Sizes of the bar complex, for the Euler characteristic identity. */
inline BarBigrading bar_chain_dims(const AugmentedAlgebra& A, i64 s_max, i64 t_max, std::size_t budget = 400000) {
  detail::BarBasis basis(A, budget);
  BarBigrading out;
  for (i64 t = 0; t <= t_max; ++t)
    for (i64 s = 0; s <= std::min(s_max, t); ++s) {
      auto n = i64(basis.get(s, t).size());
      if (n) out[{s, t}] = n;
    }
  return out;
}

}  // namespace ssr
