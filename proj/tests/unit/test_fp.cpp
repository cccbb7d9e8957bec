#include <random>
#include <set>

#include "doctest.h"
#include "ssr/fp.hpp"
#include "ssr/lattice.hpp"

using namespace ssr;

namespace {

// Oracle: the row space of a small matrix has exactly p^rank elements.
std::size_t span_rank(const std::vector<std::vector<u32>>& rows, std::size_t cols, u32 p) {
  std::set<std::vector<u32>> span{std::vector<u32>(cols, 0)};
  for (const auto& r : rows) {
    std::set<std::vector<u32>> next;
    for (const auto& v : span)
      for (u32 c = 0; c < p; ++c) {
        auto w = v;
        for (std::size_t i = 0; i < cols; ++i) w[i] = (w[i] + c * r[i]) % p;
        next.insert(w);
      }
    span = std::move(next);
  }
  std::size_t k = 0, n = 1;
  while (n < span.size()) n *= p, ++k;
  return k;
}

FpMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, u32 p, double fill) {
  std::uniform_real_distribution<double> coin(0, 1);
  std::uniform_int_distribution<u32> val(1, p - 1);
  FpMatrix m(r, c, p);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (coin(rng) < fill) m.set(i, j, val(rng));
  return m;
}

}  // namespace

TEST_SUITE("fp") {
  TEST_CASE("field arithmetic") {
    CHECK(fp_inv(2, 5) == 3);
    CHECK(fp_mul(fp_inv(6, 7), 6, 7) == 1);
    CHECK(mod_p(-1, 5) == 4);
    CHECK(fp_pow(3, 4, 5) == 1);
    CHECK(is_prime(5));
    CHECK_FALSE(is_prime(9));
  }

  TEST_CASE("rank agrees with span enumeration, sparse and dense paths") {
    std::mt19937 rng(7);
    for (u32 p : {3u, 5u}) {
      for (int trial = 0; trial < 60; ++trial) {
        std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
        double fill = trial % 2 ? 0.15 : 0.7;
        FpMatrix m = random_matrix(rng, r, c, p, fill);
        CHECK(rank(m) == span_rank(m.dense(), c, p));
        CHECK(rank(m.transpose()) == rank(m));
      }
    }
  }

  TEST_CASE("kernel basis vectors are killed and independent") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
      FpMatrix m = random_matrix(rng, 3 + rng() % 4, 4 + rng() % 5, 5, 0.4);
      auto ker = kernel_basis(m);
      CHECK(ker.size() == m.cols() - rank(m));
      for (const auto& v : ker)
        for (u32 x : ssr::apply(m, v)) CHECK(x == 0);
      if (!ker.empty()) {
        std::vector<std::vector<u32>> rows(ker.begin(), ker.end());
        CHECK(span_rank(rows, m.cols(), 5) == ker.size());
      }
    }
  }

  TEST_CASE("subquotient dimension against brute force") {
    // a chain C2 -> C1 -> C0 with d o d = 0 built from a random map and a kernel
    std::mt19937 rng(3);
    const u32 p = 3;
    for (int trial = 0; trial < 30; ++trial) {
      FpMatrix s = random_matrix(rng, 2, 4, p, 0.5);  // C1 -> C0
      auto ker = kernel_basis(s);
      FpMatrix k(4, ker.size(), p);  // C2 -> C1 with image inside ker s
      for (std::size_t j = 0; j < ker.size(); ++j)
        for (std::size_t i = 0; i < 4; ++i) k.set(i, j, ker[j][i]);
      if (ker.size() > 1 && trial % 2) {
        // drop one generator so that homology is nonzero
        FpMatrix k2(4, ker.size() - 1, p);
        for (std::size_t j = 0; j + 1 < ker.size(); ++j)
          for (std::size_t i = 0; i < 4; ++i) k2.set(i, j, ker[j][i]);
        k = k2;
      }
      std::size_t ker_dim = 4 - span_rank(s.dense(), 4, p);
      std::size_t im_dim = span_rank(k.transpose().dense(), 4, p);
      CHECK(subquotient_dim(4, k, s) == ker_dim - im_dim);
    }
  }

  TEST_CASE("nonzero composite is rejected") {
    FpMatrix a = FpMatrix::identity(2, 5);
    CHECK_THROWS_AS(subquotient_dim(2, a, a), CompositionNonzero);
  }

  TEST_CASE("matrix product") {
    auto a = FpMatrix::from_dense({{1, 2}, {0, 1}}, 5);
    auto b = FpMatrix::from_dense({{1, 3}, {0, 1}}, 5);
    CHECK(a * b == FpMatrix::from_dense({{1, 0}, {0, 1}}, 5));
  }
}

TEST_SUITE("lattice") {
  TEST_CASE("enumeration matches a bounded brute force") {
    // x: (0,2) polynomial, y: (-2,0) Laurent, z: (1,3) exterior
    std::vector<LatticeItem> items{{0, 2, 0, kInf, nullptr}, {-2, 0, -kInf, kInf, nullptr}, {1, 3, 0, 1, nullptr}};
    Window win{-10, 6, -8, 12};
    std::set<std::vector<i64>> got;
    enumerate_lattice(items, 0, 0, win, [&](const std::vector<i64>& m, i64, i64) { got.insert(m); });
    std::set<std::vector<i64>> want;
    for (i64 x = 0; x < 40; ++x)
      for (i64 y = -40; y < 40; ++y)
        for (i64 z = 0; z <= 1; ++z) {
          i64 s = -2 * y + z, n = 2 * x - 2 * y + 4 * z;
          if (win.contains(s, n)) want.insert({x, y, z});
        }
    CHECK(got == want);
  }

  TEST_CASE("filters and unbounded fibers") {
    std::vector<LatticeItem> items{{0, 2, 0, kInf, [](i64 j) { return j % 3 == 0; }}};
    std::size_t k = 0;
    enumerate_lattice(items, 0, 0, Window::degrees(0, 30), [&](auto&, i64, i64) { ++k; });
    CHECK(k == 6);  // 0, 6, ..., 30
    std::vector<LatticeItem> free{{0, 2, 0, kInf, nullptr}, {0, -2, 0, kInf, nullptr}};
    CHECK_THROWS_AS(enumerate_lattice(free, 0, 0, Window::degrees(0, 4), [](auto&, i64, i64) {}), InfiniteFiber);
  }

  TEST_CASE("valuations") {
    CHECK(vp(50, 5) == 2);
    CHECK(vp(-25, 5) == 2);
    CHECK(vp(7, 5) == 0);
    CHECK(vp(0, 5) == kInf);
  }
}
