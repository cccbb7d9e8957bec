#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssr/algebra.hpp"
#include "ssr/errors.hpp"

namespace ssr {

/**
 * Integer expressions over named variables: + - * / % ^, comparisons,
 * && and ||, parentheses, and juxtaposition "2p" for 2*p.
 */
class Expr {
 public:
  using Env = std::map<std::string, i64>;

  static i64 eval(const std::string& text, const Env& env) {
    Expr e(text, env);
    i64 v = e.parse_or();
    e.skip();
    if (e.pos_ != e.s_.size()) e.error("trailing input");
    return v;
  }

 private:
  Expr(const std::string& s, const Env& env) : s_(s), env_(env) {}

  [[noreturn]] void error(const std::string& what) const {
    throw ConfigError("expression '" + s_ + "': " + what + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(const std::string& tok) {
    skip();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  i64 parse_or() {
    i64 v = parse_and();
    while (eat("||")) v = (parse_and() || v) ? 1 : 0;
    return v;
  }
  i64 parse_and() {
    i64 v = parse_cmp();
    while (eat("&&")) {
      i64 w = parse_cmp();
      v = (v && w) ? 1 : 0;
    }
    return v;
  }
  i64 parse_cmp() {
    i64 v = parse_add();
    if (eat("<=")) return v <= parse_add();
    if (eat(">=")) return v >= parse_add();
    if (eat("==")) return v == parse_add();
    if (eat("!=")) return v != parse_add();
    if (eat("<")) return v < parse_add();
    if (eat(">")) return v > parse_add();
    return v;
  }
  i64 parse_add() {
    i64 v = parse_mul();
    for (;;) {
      if (eat("+")) v += parse_mul();
      else if (eat("-")) v -= parse_mul();
      else return v;
    }
  }
  i64 parse_mul() {
    i64 v = parse_unary();
    for (;;) {
      skip();
      if (eat("*")) v *= parse_unary();
      else if (eat("/")) {
        i64 d = parse_unary();
        if (d == 0) error("division by zero");
        v /= d;
      } else if (eat("%")) {
        i64 d = parse_unary();
        if (d == 0) error("division by zero");
        v = mod_pos(v, d);
      } else if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '(')) {
        v *= parse_unary();  // juxtaposition
      } else {
        return v;
      }
    }
  }
  i64 parse_unary() {
    if (eat("-")) return -parse_unary();
    if (eat("+")) return parse_unary();
    return parse_pow();
  }
  i64 parse_pow() {
    i64 b = parse_atom();
    if (eat("^")) {
      i64 e = parse_unary();
      if (e < 0) error("negative exponent");
      return ipow(b, e);
    }
    return b;
  }
  i64 parse_atom() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      i64 v = parse_or();
      if (!eat(")")) error("missing ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      i64 v = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) v = v * 10 + (s_[pos_++] - '0');
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) id += s_[pos_++];
      auto it = env_.find(id);
      if (it == env_.end()) error("unknown variable '" + id + "'");
      return it->second;
    }
    error(std::string("unexpected '") + c + "'");
  }

  std::string s_;
  const Env& env_;
  std::size_t pos_ = 0;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

/** Splits at top-level occurrences of any char in seps (outside brackets). */
inline std::vector<std::pair<char, std::string>> split_top(const std::string& s, const std::string& seps, bool keep_sign) {
  std::vector<std::pair<char, std::string>> out;
  int depth = 0;
  std::string cur;
  char sign = '+';
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    bool sep = depth == 0 && seps.find(c) != std::string::npos;
    // a sign directly after '^' belongs to the exponent
    if (sep && keep_sign && i > 0 && s[i - 1] == '^') sep = false;
    if (sep && keep_sign && trim(cur).empty() && out.empty()) {
      sign = c;
      continue;
    }
    if (sep) {
      out.emplace_back(sign, trim(cur));
      cur.clear();
      sign = c;
    } else {
      cur += c;
    }
  }
  out.emplace_back(sign, trim(cur));
  return out;
}

inline std::string index_name(const std::string& base, i64 i) { return base + "_" + std::to_string(i); }

}  // namespace detail

/** One generator family line of a presentation config. */
struct GeneratorTemplate {
  std::string name;  // "a" with index variable, or a plain name
  std::string index; // variable name, empty for a single generator
  std::string lo, hi;
  std::string kind, height, s, t, w;
};

/**
 * Declarative presentation: generator families and rule templates such as
 * "b[i]*b[j] -> u*b[i+j] if i+j<=p-1". Aliases map instantiated names to
 * monomials (e.g. b_0 -> u).
 */
struct Presentation {
  std::string name;
  std::vector<GeneratorTemplate> generators;
  std::vector<std::string> rules;
  std::map<std::string, std::string> aliases;
  std::map<std::string, std::string> params;  // extra integer parameters as expressions in p

  static Presentation from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("presentation must be an object");
    if (j.value("schema_version", std::string()) != "1.0")
      throw ConfigError("unsupported presentation schema_version");
    Presentation pr;
    pr.name = j.value("name", std::string("ring"));
    for (const auto& g : j.at("generators")) {
      GeneratorTemplate t;
      std::string nm = g.at("name").get<std::string>();
      auto lb = nm.find('[');
      if (lb != std::string::npos) {
        t.name = nm.substr(0, lb);
        t.index = nm.substr(lb + 1, nm.find(']') - lb - 1);
        auto r = g.at("range");
        t.lo = r.at(0).get<std::string>();
        t.hi = r.at(1).get<std::string>();
      } else {
        t.name = nm;
      }
      auto str = [&](const char* key, const char* def) {
        if (!g.contains(key)) return std::string(def);
        const auto& v = g.at(key);
        return v.is_string() ? v.get<std::string>() : v.dump();
      };
      t.kind = str("kind", "poly");
      t.height = str("height", "0");
      t.s = str("s", "0");
      t.t = str("t", "0");
      t.w = str("w", "0");
      pr.generators.push_back(t);
    }
    if (j.contains("rules"))
      for (const auto& r : j.at("rules")) pr.rules.push_back(r.get<std::string>());
    if (j.contains("aliases"))
      for (auto it = j.at("aliases").begin(); it != j.at("aliases").end(); ++it)
        pr.aliases[it.key()] = it.value().get<std::string>();
    if (j.contains("params"))
      for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it)
        pr.params[it.key()] = it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    return pr;
  }

  static Presentation from_text(const std::string& text) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("presentation config: ") + e.what());
    }
    return from_json(j);
  }

  Expr::Env env(u32 p) const {
    Expr::Env e{{"p", i64(p)}};
    for (const auto& [k, v] : params) e[k] = Expr::eval(v, e);
    return e;
  }

  std::shared_ptr<RingSpec> build(u32 p) const {
    if (p < 3 || !is_prime(p)) throw ConfigError("prime must be an odd prime, got " + std::to_string(p));
    Expr::Env env = this->env(p);
    std::vector<GeneratorSpec> gens;
    std::map<std::string, std::pair<i64, i64>> ranges;
    for (const auto& t : generators) {
      auto make = [&](const std::string& nm, const Expr::Env& e) {
        GeneratorSpec g;
        g.name = nm;
        if (t.kind == "exterior") g.kind = Kind::Exterior;
        else if (t.kind == "poly") g.kind = Kind::Polynomial;
        else if (t.kind == "truncated") g.kind = Kind::Truncated;
        else if (t.kind == "laurent") g.kind = Kind::Laurent;
        else throw ConfigError("unknown generator kind '" + t.kind + "'");
        g.height = int(Expr::eval(t.height, e));
        g.s = Expr::eval(t.s, e);
        g.t = Expr::eval(t.t, e);
        g.w = int(Expr::eval(t.w, e));
        gens.push_back(g);
      };
      if (t.index.empty()) {
        make(t.name, env);
      } else {
        i64 lo = Expr::eval(t.lo, env), hi = Expr::eval(t.hi, env);
        ranges[t.name] = {lo, hi};
        for (i64 i = lo; i <= hi; ++i) {
          auto e = env;
          e[t.index] = i;
          make(detail::index_name(t.name, i), e);
        }
      }
    }
    auto ring = std::make_shared<RingSpec>(p, gens);
    for (const auto& r : rules) install(*ring, r, env, ranges);
    return ring;
  }

  /** Instantiated presentation with plain rules; parses back to the same ring. */
  static nlohmann::json serialize(const RingSpec& R, const std::string& name) {
    nlohmann::json j;
    j["schema_version"] = "1.0";
    j["name"] = name;
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : R.generators()) {
      nlohmann::json x = {{"name", g.name}, {"kind", kind_name(g.kind)}, {"s", g.s}, {"t", g.t}, {"w", g.w}};
      if (g.kind == Kind::Truncated) x["height"] = g.height;
      gens.push_back(x);
    }
    j["generators"] = gens;
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& r : R.rules()) rules.push_back(R.str(r.lhs) + " -> " + rhs_text(R, r.rhs));
    j["rules"] = rules;
    return j;
  }

 private:
  static std::string rhs_text(const RingSpec& R, const Element& e) {
    if (e.is_zero()) return "0";
    std::string out;
    for (const auto& [m, c] : e.terms) {
      if (!out.empty()) out += " + ";
      if (c != 1) out += std::to_string(c) + "*";
      out += R.str(m);
    }
    return out;
  }

  /** Resolves "b[i+j]" or "u" to a monomial, or nullopt if the name is outside its family. */
  std::optional<Monomial> atom(const RingSpec& R, const std::string& text, const Expr::Env& env) const {
    std::string name = text;
    auto lb = text.find('[');
    if (lb != std::string::npos) {
      i64 idx = Expr::eval(text.substr(lb + 1, text.rfind(']') - lb - 1), env);
      name = detail::index_name(text.substr(0, lb), idx);
    }
    auto al = aliases.find(name);
    if (al != aliases.end()) return R.parse(al->second);
    if (!R.has(name)) return std::nullopt;
    return R.gen_mono(name);
  }

  /** Parses a product "c*x[i]^e*y"; returns coefficient and monomial. */
  std::optional<std::pair<i64, Monomial>> product(const RingSpec& R, const std::string& text, const Expr::Env& env) const {
    i64 coef = 1;
    Monomial m = R.one();
    for (const auto& [sep, raw] : detail::split_top(text, "*", false)) {
      std::string f = detail::trim(raw);
      if (f.empty()) throw ConfigError("empty factor in '" + text + "'");
      if (std::isdigit(static_cast<unsigned char>(f[0])) || f[0] == '(') {
        coef *= Expr::eval(f, env);
        continue;
      }
      std::string base = f;
      i64 e = 1;
      int depth = 0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == '[') ++depth;
        if (f[i] == ']') --depth;
        if (f[i] == '^' && depth == 0) {
          base = f.substr(0, i);
          e = Expr::eval(f.substr(i + 1), env);
          break;
        }
      }
      auto a = atom(R, detail::trim(base), env);
      if (!a) return std::nullopt;
      for (i64 k = 0; k < e; ++k) {
        // written order carries the Koszul sign
        auto pr = R.mono_mul(m, *a);
        if (!pr) return std::make_pair(i64(0), m);
        if (pr->first != 1) coef = -coef;
        m = pr->second;
      }
    }
    return std::make_pair(coef, m);
  }

  void install(RingSpec& R, const std::string& rule, const Expr::Env& env0,
               const std::map<std::string, std::pair<i64, i64>>& ranges) const {
    auto arrow = rule.find("->");
    if (arrow == std::string::npos) throw ConfigError("rule without '->': " + rule);
    std::string lhs = detail::trim(rule.substr(0, arrow));
    std::string rest = rule.substr(arrow + 2);
    std::string cond;
    auto ifp = rest.find(" if ");
    if (ifp != std::string::npos) {
      cond = rest.substr(ifp + 4);
      rest = rest.substr(0, ifp);
    }
    std::string rhs = detail::trim(rest);

    // bound variables: bare identifiers inside the lhs index brackets
    std::vector<std::pair<std::string, std::pair<i64, i64>>> vars;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      if (lhs[i] != '[') continue;
      std::size_t k = i;
      while (k > 0 && (std::isalnum(static_cast<unsigned char>(lhs[k - 1])) || lhs[k - 1] == '_')) --k;
      std::string fam = lhs.substr(k, i - k);
      std::string v = detail::trim(lhs.substr(i + 1, lhs.find(']', i) - i - 1));
      auto rg = ranges.find(fam);
      if (rg == ranges.end()) throw ConfigError("unknown generator family '" + fam + "' in " + rule);
      bool ident = !v.empty() && std::all_of(v.begin(), v.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }) &&
                   std::isalpha(static_cast<unsigned char>(v[0]));
      if (!ident || env0.count(v)) continue;
      auto it = std::find_if(vars.begin(), vars.end(), [&](auto& x) { return x.first == v; });
      if (it == vars.end()) vars.push_back({v, rg->second});
      else it->second = {std::max(it->second.first, rg->second.first), std::min(it->second.second, rg->second.second)};
    }

    std::size_t installed = 0;
    std::function<void(std::size_t, Expr::Env&)> rec = [&](std::size_t d, Expr::Env& env) {
      if (d < vars.size()) {
        for (i64 v = vars[d].second.first; v <= vars[d].second.second; ++v) {
          env[vars[d].first] = v;
          rec(d + 1, env);
        }
        env.erase(vars[d].first);
        return;
      }
      if (!cond.empty() && !Expr::eval(cond, env)) return;
      auto l = product(R, lhs, env);
      if (!l) return;
      // x*x for an odd x is zero already; skip such instances
      if (l->first == 0 || R.structurally_zero(l->second)) return;
      if (l->first != 1 && l->first != -1) throw ConfigError("rule lhs may not carry a coefficient: " + rule);
      const i64 lsign = l->first;
      Element r;
      if (rhs != "0") {
        for (const auto& [sign, term] : detail::split_top(rhs, "+-", true)) {
          if (term.empty()) continue;
          auto t = product(R, term, env);
          if (!t) throw ConfigError("rule rhs names a missing generator: " + rule);
          i64 c = (sign == '-' ? -t->first : t->first) * lsign;
          r.add(t->second, mod_p(c, R.prime()), R.prime());
        }
      }
      std::string src = R.str(l->second) + " -> " + rhs_text(R, r);
      R.add_rule(l->second, r, src);
      ++installed;
    };
    Expr::Env env = env0;
    rec(0, env);
    if (installed == 0 && vars.empty()) throw ConfigError("rule installs nothing: " + rule);
  }
};

}  // namespace ssr
