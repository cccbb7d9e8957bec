#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ssr/errors.hpp"

namespace ssr {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

inline bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/** Reduces an arbitrary integer into [0, p). */
inline u32 mod_p(long long x, u32 p) {
  long long r = x % static_cast<long long>(p);
  return static_cast<u32>(r < 0 ? r + p : r);
}

inline u32 fp_mul(u32 a, u32 b, u32 p) { return static_cast<u32>(u64(a) * b % p); }
inline u32 fp_add(u32 a, u32 b, u32 p) { u32 s = a + b; return s >= p ? s - p : s; }
inline u32 fp_sub(u32 a, u32 b, u32 p) { return a >= b ? a - b : a + p - b; }
inline u32 fp_neg(u32 a, u32 p) { return a == 0 ? 0 : p - a; }

inline u32 fp_pow(u32 a, u64 e, u32 p) {
  u64 r = 1, b = a % p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<u32>(r);
}

inline u32 fp_inv(u32 a, u32 p) {
  if (a % p == 0) throw Error("inverse of zero in F_" + std::to_string(p));
  return fp_pow(a, p - 2, p);
}

/** An element of F_p carrying its prime. */
class Fp {
 public:
  Fp(long long value, u32 prime) : p_(prime) {
    if (prime < 3 || !is_prime(prime))
      throw ConfigError("F_p requires an odd prime, got " + std::to_string(prime));
    v_ = mod_p(value, prime);
  }

  u32 value() const { return v_; }
  u32 prime() const { return p_; }

  Fp operator+(const Fp& o) const { check(o); return raw(fp_add(v_, o.v_, p_)); }
  Fp operator-(const Fp& o) const { check(o); return raw(fp_sub(v_, o.v_, p_)); }
  Fp operator*(const Fp& o) const { check(o); return raw(fp_mul(v_, o.v_, p_)); }
  Fp operator-() const { return raw(fp_neg(v_, p_)); }
  Fp inverse() const { return raw(fp_inv(v_, p_)); }
  Fp operator/(const Fp& o) const { return *this * o.inverse(); }
  bool operator==(const Fp& o) const { return v_ == o.v_ && p_ == o.p_; }
  bool is_zero() const { return v_ == 0; }

 private:
  Fp() = default;
  Fp raw(u32 v) const { Fp r; r.v_ = v; r.p_ = p_; return r; }
  void check(const Fp& o) const {
    if (o.p_ != p_) throw Error("mixed primes in F_p arithmetic");
  }
  u32 v_ = 0;
  u32 p_ = 3;
};

using SparseRow = std::vector<std::pair<u32, u32>>;  // (column, nonzero value), sorted

/**
 * Sparse matrix over F_p. Rows are kept sorted by column and never hold
 * a stored zero.
 */
class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(std::size_t rows, std::size_t cols, u32 p) : rows_(rows), cols_(cols), p_(p), data_(rows) {}

  static FpMatrix identity(std::size_t n, u32 p) {
    FpMatrix m(n, n, p);
    for (std::size_t i = 0; i < n; ++i) m.data_[i].emplace_back(u32(i), 1);
    return m;
  }

  static FpMatrix from_dense(const std::vector<std::vector<long long>>& d, u32 p, std::size_t cols = 0) {
    std::size_t c = d.empty() ? cols : d.front().size();
    FpMatrix m(d.size(), c, p);
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = 0; j < c; ++j) m.set(i, j, mod_p(d[i][j], p));
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  u32 prime() const { return p_; }
  const SparseRow& row(std::size_t i) const { return data_[i]; }

  u32 at(std::size_t r, std::size_t c) const {
    const auto& row = data_.at(r);
    auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(u32(c), u32(0)));
    return (it != row.end() && it->first == c) ? it->second : 0;
  }

  void set(std::size_t r, std::size_t c, u32 v) {
    bounds(r, c);
    v %= p_;
    auto& row = data_[r];
    auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(u32(c), u32(0)));
    bool present = it != row.end() && it->first == c;
    if (v == 0) {
      if (present) row.erase(it);
    } else if (present) {
      it->second = v;
    } else {
      row.insert(it, {u32(c), v});
    }
  }

  void add(std::size_t r, std::size_t c, u32 v) { set(r, c, fp_add(at(r, c), v % p_, p_)); }

  void set_row(std::size_t r, SparseRow row) {
    std::sort(row.begin(), row.end());
    SparseRow clean;
    for (auto [c, v] : row) {
      bounds(r, c);
      v %= p_;
      if (!clean.empty() && clean.back().first == c) {
        clean.back().second = fp_add(clean.back().second, v, p_);
      } else {
        clean.emplace_back(c, v);
      }
    }
    std::erase_if(clean, [](auto& e) { return e.second == 0; });
    data_[r] = std::move(clean);
  }

  std::size_t nnz() const {
    std::size_t n = 0;
    for (const auto& r : data_) n += r.size();
    return n;
  }

  double density() const {
    if (rows_ == 0 || cols_ == 0) return 0.0;
    return double(nnz()) / (double(rows_) * double(cols_));
  }

  bool is_zero() const { return nnz() == 0; }

  FpMatrix transpose() const {
    FpMatrix t(cols_, rows_, p_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (auto [c, v] : data_[i]) t.data_[c].emplace_back(u32(i), v);
    return t;
  }

  FpMatrix operator*(const FpMatrix& o) const {
    if (cols_ != o.rows_) throw Error("matrix product dimension mismatch");
    FpMatrix r(rows_, o.cols_, p_);
    std::vector<u32> acc(o.cols_, 0);
    std::vector<u32> touched;
    for (std::size_t i = 0; i < rows_; ++i) {
      touched.clear();
      for (auto [k, v] : data_[i])
        for (auto [j, w] : o.data_[k]) {
          if (acc[j] == 0) touched.push_back(j);
          acc[j] = fp_add(acc[j], fp_mul(v, w, p_), p_);
        }
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (u32 j : touched) {
        if (acc[j]) r.data_[i].emplace_back(j, acc[j]);
        acc[j] = 0;
      }
    }
    return r;
  }

  bool operator==(const FpMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && p_ == o.p_ && data_ == o.data_;
  }

  std::vector<std::vector<u32>> dense() const {
    std::vector<std::vector<u32>> d(rows_, std::vector<u32>(cols_, 0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (auto [c, v] : data_[i]) d[i][c] = v;
    return d;
  }

 private:
  void bounds(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw Error("matrix index out of bounds");
  }

  std::size_t rows_ = 0, cols_ = 0;
  u32 p_ = 3;
  std::vector<SparseRow> data_;
};

struct RowReduced {
  FpMatrix reduced;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
};

namespace detail {

/** row -= c * pivot, both sparse and sorted. */
inline void axpy(SparseRow& row, u32 c, const SparseRow& pivot, u32 p) {
  SparseRow out;
  out.reserve(row.size() + pivot.size());
  std::size_t i = 0, j = 0;
  while (i < row.size() || j < pivot.size()) {
    if (j == pivot.size() || (i < row.size() && row[i].first < pivot[j].first)) {
      out.push_back(row[i++]);
    } else if (i == row.size() || pivot[j].first < row[i].first) {
      out.emplace_back(pivot[j].first, fp_neg(fp_mul(c, pivot[j].second, p), p));
      ++j;
    } else {
      u32 v = fp_sub(row[i].second, fp_mul(c, pivot[j].second, p), p);
      if (v) out.emplace_back(row[i].first, v);
      ++i, ++j;
    }
  }
  row.swap(out);
}

inline void scale(SparseRow& row, u32 c, u32 p) {
  for (auto& e : row) e.second = fp_mul(e.second, c, p);
}

/** Sparse echelon form: pivot rows indexed by their leading column, leading entry 1. */
inline std::vector<std::pair<u32, SparseRow>> sparse_echelon(const FpMatrix& m) {
  const u32 p = m.prime();
  std::vector<int> pivot_of(m.cols(), -1);
  std::vector<std::pair<u32, SparseRow>> pivots;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    SparseRow row = m.row(r);
    std::size_t pos = 0;
    while (pos < row.size()) {
      u32 c = row[pos].first;
      int pi = pivot_of[c];
      if (pi < 0) { ++pos; continue; }
      detail::axpy(row, row[pos].second, pivots[pi].second, p);
    }
    if (row.empty()) continue;
    u32 lead = row.front().first;
    scale(row, fp_inv(row.front().second, p), p);
    pivot_of[lead] = int(pivots.size());
    pivots.emplace_back(lead, std::move(row));
  }
  return pivots;
}

inline RowReduced dense_rref(const FpMatrix& m) {
  const u32 p = m.prime();
  auto a = m.dense();
  std::size_t rank = 0;
  std::vector<std::size_t> piv;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t sel = rank;
    while (sel < m.rows() && a[sel][c] == 0) ++sel;
    if (sel == m.rows()) continue;
    std::swap(a[sel], a[rank]);
    u32 inv = fp_inv(a[rank][c], p);
    for (auto& x : a[rank]) x = fp_mul(x, inv, p);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == rank || a[r][c] == 0) continue;
      u32 f = a[r][c];
      for (std::size_t k = c; k < m.cols(); ++k)
        if (a[rank][k]) a[r][k] = fp_sub(a[r][k], fp_mul(f, a[rank][k], p), p);
    }
    piv.push_back(c);
    ++rank;
  }
  RowReduced out{FpMatrix(m.rows(), m.cols(), p), rank, piv};
  for (std::size_t r = 0; r < rank; ++r) {
    SparseRow row;
    for (std::size_t k = 0; k < m.cols(); ++k)
      if (a[r][k]) row.emplace_back(u32(k), a[r][k]);
    out.reduced.set_row(r, std::move(row));
  }
  return out;
}

inline RowReduced sparse_rref(const FpMatrix& m) {
  const u32 p = m.prime();
  auto pivots = sparse_echelon(m);
  std::sort(pivots.begin(), pivots.end(), [](auto& x, auto& y) { return x.first < y.first; });
  std::vector<int> pivot_of(m.cols(), -1);
  for (std::size_t i = 0; i < pivots.size(); ++i) pivot_of[pivots[i].first] = int(i);
  // back substitution, last pivot first
  for (std::size_t ii = pivots.size(); ii-- > 0;) {
    auto& row = pivots[ii].second;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t k = 1; k < row.size(); ++k) {
        int pi = pivot_of[row[k].first];
        if (pi >= 0 && std::size_t(pi) != ii) {
          detail::axpy(row, row[k].second, pivots[pi].second, p);
          changed = true;
          break;
        }
      }
    }
  }
  RowReduced out{FpMatrix(m.rows(), m.cols(), p), pivots.size(), {}};
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    out.pivot_cols.push_back(pivots[i].first);
    out.reduced.set_row(i, pivots[i].second);
  }
  return out;
}

}  // namespace detail

/** Reduced row-echelon form; dense elimination above 25% density. */
inline RowReduced row_reduce(const FpMatrix& m) {
  if (m.density() > 0.25) return detail::dense_rref(m);
  return detail::sparse_rref(m);
}

inline std::size_t rank(const FpMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (m.density() > 0.25) return detail::dense_rref(m).rank;
  return detail::sparse_echelon(m).size();
}

using FpVector = std::vector<u32>;

inline std::vector<FpVector> kernel_basis(const FpMatrix& m) {
  const u32 p = m.prime();
  RowReduced rr = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : rr.pivot_cols) is_pivot[c] = true;
  std::vector<FpVector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    FpVector v(m.cols(), 0);
    v[f] = 1;
    for (std::size_t i = 0; i < rr.rank; ++i) {
      u32 x = rr.reduced.at(i, f);
      if (x) v[rr.pivot_cols[i]] = fp_neg(x, p);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

inline FpVector apply(const FpMatrix& m, const FpVector& v) {
  FpVector out(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (auto [c, x] : m.row(i)) out[i] = fp_add(out[i], fp_mul(x, v.at(c), m.prime()), m.prime());
  return out;
}

/**
 * dim ker(survivors) / im(killers) at one ambient space.
 * killers: ambient x k, survivors: m x ambient.
 */
inline std::size_t subquotient_dim(std::size_t ambient_dim, const FpMatrix& killers, const FpMatrix& survivors) {
  if (killers.rows() != ambient_dim || survivors.cols() != ambient_dim)
    throw Error("subquotient_dim: shape mismatch with ambient dimension");
  if (killers.cols() > 0 && survivors.rows() > 0 && !(survivors * killers).is_zero())
    throw CompositionNonzero("survivors o killers != 0");
  std::size_t ker = ambient_dim - rank(survivors);
  return ker - rank(killers);
}

}  // namespace ssr
