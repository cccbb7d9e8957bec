#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "ssr/errors.hpp"
#include "ssr/fp.hpp"
#include "ssr/lattice.hpp"

namespace ssr {

enum class Kind { Exterior, Polynomial, Truncated, Laurent };

inline std::string kind_name(Kind k) {
  switch (k) {
    case Kind::Exterior: return "exterior";
    case Kind::Polynomial: return "poly";
    case Kind::Truncated: return "truncated";
    case Kind::Laurent: return "laurent";
  }
  return "?";
}

struct GeneratorSpec {
  std::string name;
  Kind kind = Kind::Polynomial;
  int height = 0;  // Truncated only
  i64 s = 0;       // filtration
  i64 t = 0;       // internal degree
  int w = 0;       // weight mod (p-1)

  i64 total() const { return s + t; }
};

/** Filtration, internal degree and weight of a homogeneous object. */
struct Tri {
  i64 s = 0, t = 0;
  int w = 0;
  i64 n() const { return s + t; }
  bool operator==(const Tri&) const = default;
  auto operator<=>(const Tri&) const = default;
};

/** Exponent vector over the generators of one ring, in name order. */
struct Monomial {
  std::vector<int> e;

  Monomial() = default;
  explicit Monomial(std::size_t n) : e(n, 0) {}
  bool operator==(const Monomial&) const = default;
  bool operator<(const Monomial& o) const { return e < o.e; }
  bool is_one() const {
    return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
  }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (int x : m.e) {
      h ^= std::size_t(std::uint32_t(x));
      h *= 1099511628211ULL;
    }
    return h;
  }
};

/** Finite F_p-combination of monomials; stored coefficients are nonzero. */
struct Element {
  std::map<Monomial, u32> terms;

  bool is_zero() const { return terms.empty(); }
  void add(const Monomial& m, u32 c, u32 p) {
    c %= p;
    if (c == 0) return;
    auto [it, fresh] = terms.emplace(m, c);
    if (!fresh) {
      it->second = fp_add(it->second, c, p);
      if (it->second == 0) terms.erase(it);
    }
  }
  void add(const Element& o, u32 c, u32 p) {
    for (const auto& [m, x] : o.terms) add(m, fp_mul(x, c, p), p);
  }
  static Element mono(const Monomial& m, u32 c = 1) {
    Element e;
    if (c) e.terms.emplace(m, c);
    return e;
  }
  bool operator==(const Element&) const = default;
};

struct RewriteRule {
  Monomial lhs;
  Element rhs;
  std::string source;  // text the rule was built from, if any
};

class RingSpec;
using RingPtr = std::shared_ptr<const RingSpec>;

/**
 * Graded-commutative F_p-algebra on named generators modulo monomial
 * rewrite rules. Koszul signs use the parity of s + t.
 */
class RingSpec {
 public:
  RingSpec(u32 p, std::vector<GeneratorSpec> gens) : p_(p) {
    if (p < 3 || !is_prime(p)) throw ConfigError("prime must be an odd prime, got " + std::to_string(p));
    std::sort(gens.begin(), gens.end(), [](auto& a, auto& b) { return a.name < b.name; });
    for (std::size_t i = 0; i < gens.size(); ++i) {
      auto& g = gens[i];
      if (g.name.empty()) throw ConfigError("generator with empty name");
      if (i && gens[i - 1].name == g.name) throw ConfigError("duplicate generator " + g.name);
      if (g.kind == Kind::Truncated && g.height < 2) throw ConfigError("truncation height must be >= 2 for " + g.name);
      g.w = int(mod_pos(g.w, p - 1));
      index_[g.name] = i;
      if (mod_pos(g.total(), 2) == 1) odd_.push_back(i);
    }
    gens_ = std::move(gens);
    is_odd_.assign(gens_.size(), false);
    for (auto i : odd_) is_odd_[i] = true;
  }

  u32 prime() const { return p_; }
  std::size_t size() const { return gens_.size(); }
  const std::vector<GeneratorSpec>& generators() const { return gens_; }
  const GeneratorSpec& gen(std::size_t i) const { return gens_.at(i); }
  const std::vector<RewriteRule>& rules() const { return rules_; }
  bool is_odd(std::size_t i) const { return is_odd_[i]; }

  bool has(const std::string& name) const { return index_.count(name) > 0; }
  std::size_t index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ConfigError("unknown generator '" + name + "'");
    return it->second;
  }

  Monomial one() const { return Monomial(gens_.size()); }
  Monomial gen_mono(const std::string& name, int exp = 1) const {
    Monomial m = one();
    m.e[index(name)] = exp;
    return m;
  }

  /** Parses "u^2*a_1*t^-5"; "1" is the unit. */
  Monomial parse(const std::string& text) const {
    Monomial m = one();
    std::string s;
    for (char c : text)
      if (!isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty() || s == "1") return m;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, '*')) {
      auto caret = part.find('^');
      std::string name = part.substr(0, caret);
      int exp = 1;
      if (caret != std::string::npos) {
        std::string es = part.substr(caret + 1);
        if (!es.empty() && es.front() == '(' && es.back() == ')') es = es.substr(1, es.size() - 2);
        exp = std::stoi(es);
      }
      m.e[index(name)] += exp;
    }
    return m;
  }

  Tri tri(const Monomial& m) const {
    Tri r;
    i64 w = 0;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (!m.e[i]) continue;
      r.s += gens_[i].s * m.e[i];
      r.t += gens_[i].t * m.e[i];
      w += i64(gens_[i].w) * m.e[i];
    }
    r.w = int(mod_pos(w, p_ - 1));
    return r;
  }

  bool is_odd(const Monomial& m) const {
    int par = 0;
    for (auto i : odd_) par ^= (m.e[i] & 1);
    return par;
  }

  std::string str(const Monomial& m) const {
    std::string out;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (!m.e[i]) continue;
      if (!out.empty()) out += "*";
      out += gens_[i].name;
      if (m.e[i] != 1) out += "^" + std::to_string(m.e[i]);
    }
    return out.empty() ? "1" : out;
  }

  std::string str(const Element& e) const {
    if (e.is_zero()) return "0";
    std::string out;
    for (const auto& [m, c] : e.terms) {
      if (!out.empty()) out += " + ";
      if (c != 1) out += std::to_string(c) + "*";
      out += str(m);
    }
    return out;
  }

  /** True if the monomial is zero for structural reasons (exterior, odd squares, truncation). */
  bool structurally_zero(const Monomial& m) const {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      int x = m.e[i];
      const auto& g = gens_[i];
      if (x < 0 && g.kind != Kind::Laurent)
        throw InvalidLabel("negative exponent on non-Laurent generator " + g.name);
      if (x >= 2 && (is_odd_[i] || g.kind == Kind::Exterior)) return true;
      if (g.kind == Kind::Truncated && x >= g.height) return true;
    }
    return false;
  }

  /** Sign (as 1 or p-1) of a*b relative to the sorted monomial, or nullopt if zero. */
  std::optional<std::pair<u32, Monomial>> mono_mul(const Monomial& a, const Monomial& b) const {
    Monomial r(gens_.size());
    for (std::size_t i = 0; i < gens_.size(); ++i) r.e[i] = a.e[i] + b.e[i];
    if (structurally_zero(r)) return std::nullopt;
    int swaps = 0, a_odd_after = 0;
    for (std::size_t k = odd_.size(); k-- > 0;) {
      auto i = odd_[k];
      if (b.e[i] & 1) swaps += a_odd_after;
      if (a.e[i] & 1) ++a_odd_after;
    }
    return std::make_pair(u32((swaps & 1) ? p_ - 1 : 1), std::move(r));
  }

  std::optional<std::pair<u32, Monomial>> mono_pow(const Monomial& u, i64 m) const {
    Monomial r(gens_.size());
    for (std::size_t i = 0; i < gens_.size(); ++i) r.e[i] = int(u.e[i] * m);
    if (m >= 2 && is_odd(u)) return std::nullopt;
    if (structurally_zero(r)) return std::nullopt;
    // u^m for even u has no sign; odd u only enters with m in {0,1}
    return std::make_pair(u32(1), std::move(r));
  }

  void add_rule(const Monomial& lhs, const Element& rhs, const std::string& source = "") {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (lhs.e[i] != 0 && gens_[i].kind == Kind::Laurent)
        throw ConfigError("rule lhs may not involve Laurent generator " + gens_[i].name);
    if (lhs.is_one()) throw ConfigError("rule with unit lhs");
    for (const auto& [m, c] : rhs.terms)
      if (m == lhs) throw ConfigError("rule lhs appears on its rhs: " + str(lhs));
    rules_.push_back({lhs, rhs, source});
    std::lock_guard<std::mutex> lock(*cache_mutex_);
    cache_.clear();
  }

  void set_step_budget(std::size_t b) { budget_ = b; }

  bool divides(const Monomial& d, const Monomial& m) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (d.e[i] > 0 && d.e[i] > m.e[i]) return false;
    return true;
  }

  bool is_normal(const Monomial& m) const {
    if (structurally_zero(m)) return false;
    for (const auto& r : rules_)
      if (divides(r.lhs, m)) return false;
    return true;
  }

  /** Rewrites a monomial to its normal form. */
  Element normal_form(const Monomial& m) const {
    std::size_t steps = 0;
    return nf(m, steps, 0);
  }

  /** Same as normal_form but forcing the first reduction step through rule k. */
  Element normal_form_via(const Monomial& m, std::size_t k) const {
    const auto& r = rules_.at(k);
    if (!divides(r.lhs, m)) throw Error("rule does not apply");
    std::size_t steps = 0;
    return apply_rule(m, r, steps, 0);
  }

  Element normalize(const Element& e) const {
    Element out;
    for (const auto& [m, c] : e.terms) out.add(normal_form(m), c, p_);
    return out;
  }

  Element mul(const Element& x, const Element& y) const {
    Element out;
    for (const auto& [a, c] : x.terms)
      for (const auto& [b, d] : y.terms) {
        auto prod = mono_mul(a, b);
        if (!prod) continue;
        out.add(normal_form(prod->second), fp_mul(fp_mul(c, d, p_), prod->first, p_), p_);
      }
    return out;
  }

  Element mul(const Monomial& a, const Monomial& b) const { return mul(Element::mono(a), Element::mono(b)); }

  /** Largest exponent of generator i in a normal monomial, from the generator kind and pure-power rules. */
  i64 normal_bound(std::size_t i) const {
    const auto& g = gens_[i];
    i64 hi = kInf;
    switch (g.kind) {
      case Kind::Exterior: hi = 1; break;
      case Kind::Truncated: hi = g.height - 1; break;
      case Kind::Polynomial: hi = is_odd_[i] ? 1 : kInf; break;
      case Kind::Laurent: return kInf;
    }
    for (const auto& r : rules_) {
      bool pure = true;
      for (std::size_t k = 0; k < gens_.size() && pure; ++k)
        if (k != i && r.lhs.e[k] != 0) pure = false;
      if (pure && r.lhs.e[i] > 0) hi = std::min<i64>(hi, r.lhs.e[i] - 1);
    }
    return hi;
  }

  /** Lattice items for every generator; Laurent exponents limited to [-laurent, laurent] if given. */
  std::vector<LatticeItem> lattice_items(i64 laurent = kInf, bool normal_bounds = true) const {
    std::vector<LatticeItem> items;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      const auto& g = gens_[i];
      LatticeItem it;
      it.ds = g.s;
      it.dt = g.t;
      switch (g.kind) {
        case Kind::Exterior: it.lo = 0; it.hi = 1; break;
        case Kind::Truncated: it.lo = 0; it.hi = g.height - 1; break;
        case Kind::Polynomial: it.lo = 0; it.hi = is_odd_[i] ? 1 : kInf; break;
        case Kind::Laurent: it.lo = -laurent; it.hi = laurent; break;
      }
      if (normal_bounds && g.kind != Kind::Laurent) it.hi = std::min(it.hi, normal_bound(i));
      items.push_back(it);
    }
    return items;
  }

  /** Normal-form monomials inside the window; weight filtering is left to callers. */
  void enumerate_normal(const Window& win, const std::function<void(const Monomial&, const Tri&)>& emit,
                        i64 laurent = kInf) const {
    Monomial m = one();
    auto prune = [&](const std::vector<i64>& ex, const std::vector<bool>& assigned) {
      for (const auto& r : rules_) {
        bool hit = true;
        for (std::size_t i = 0; i < ex.size() && hit; ++i)
          if (r.lhs.e[i] > 0 && (!assigned[i] || ex[i] < r.lhs.e[i])) hit = false;
        if (hit) return true;
      }
      return false;
    };
    enumerate_lattice(
        lattice_items(laurent), 0, 0, win,
        [&](const std::vector<i64>& ex, i64, i64) {
          for (std::size_t i = 0; i < ex.size(); ++i) m.e[i] = int(ex[i]);
          if (!is_normal(m)) return;
          emit(m, tri(m));
        },
        prune);
  }

  /** Every exponent vector allowed by the generator kinds alone, normal or not. */
  void enumerate_raw(const Window& win, const std::function<void(const Monomial&, const Tri&)>& emit,
                     i64 laurent = kInf) const {
    Monomial m = one();
    enumerate_lattice(lattice_items(laurent, false), 0, 0, win, [&](const std::vector<i64>& ex, i64, i64) {
      for (std::size_t i = 0; i < ex.size(); ++i) m.e[i] = int(ex[i]);
      emit(m, tri(m));
    });
  }

 private:
  Element apply_rule(const Monomial& m, const RewriteRule& r, std::size_t& steps, int depth) const {
    Monomial q(gens_.size());
    for (std::size_t i = 0; i < gens_.size(); ++i) q.e[i] = m.e[i] - r.lhs.e[i];
    auto lq = mono_mul(r.lhs, q);
    // lhs*q = sign*m, so m = sign*lhs*q
    u32 sign = lq ? lq->first : 1;
    Element out;
    for (const auto& [rm, c] : r.rhs.terms) {
      auto prod = mono_mul(rm, q);
      if (!prod) continue;
      u32 coef = fp_mul(fp_mul(c, sign, p_), prod->first, p_);
      out.add(nf(prod->second, steps, depth + 1), coef, p_);
    }
    return out;
  }

  Element nf(const Monomial& m, std::size_t& steps, int depth) const {
    if (++steps > budget_ || depth > int(budget_))
      throw NonTerminating("rewriting exceeded the step budget at " + str(m));
    {
      std::lock_guard<std::mutex> lock(*cache_mutex_);
      auto it = cache_.find(m);
      if (it != cache_.end()) return it->second;
    }
    Element out;
    if (!structurally_zero(m)) {
      const RewriteRule* hit = nullptr;
      for (const auto& r : rules_)
        if (divides(r.lhs, m)) {
          hit = &r;
          break;
        }
      out = hit ? apply_rule(m, *hit, steps, depth) : Element::mono(m);
    }
    std::lock_guard<std::mutex> lock(*cache_mutex_);
    cache_.emplace(m, out);
    return out;
  }

  u32 p_;
  std::vector<GeneratorSpec> gens_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> odd_;
  std::vector<bool> is_odd_;
  std::vector<RewriteRule> rules_;
  std::size_t budget_ = 100000;
  mutable std::unordered_map<Monomial, Element, MonomialHash> cache_;
  std::shared_ptr<std::mutex> cache_mutex_ = std::make_shared<std::mutex>();
};

}  // namespace ssr
