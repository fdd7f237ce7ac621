#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wittgrass/errors.hpp"
#include "wittgrass/finite_field.hpp"

namespace wittgrass {

/// A ring variable. `weight` feeds the grading, `block` the elimination order
/// (larger blocks are compared first), and `laurent` allows negative powers.
struct Variable {
  std::string name;
  long weight = 1;
  int block = 0;
  bool laurent = false;
};

using Exponents = std::vector<int>;

struct ExponentsHash {
  std::size_t operator()(const Exponents& e) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int x : e) {
      h ^= static_cast<std::size_t>(static_cast<unsigned>(x)) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

struct Term {
  Exponents exps;
  FiniteField::Elem coeff;
  bool operator==(const Term&) const = default;
};

/// Sparse polynomial; terms are kept sorted by decreasing monomial order of the
/// owning PolyRing, so equality of normal forms is syntactic equality.
struct Polynomial {
  std::vector<Term> terms;
  bool operator==(const Polynomial&) const = default;
  bool is_zero() const { return terms.empty(); }
};

/// Polynomial ring F_q[vars] (with optional Laurent variables) under a fixed
/// monomial order: per block from the highest, weighted degree then total
/// degree; ties broken reverse-lexicographically.
class PolyRing {
 public:
  using Elem = Polynomial;

  PolyRing() : PolyRing(FiniteField(), {}) {}

  PolyRing(FiniteField field, std::vector<Variable> vars) {
    auto impl = std::make_shared<Impl>();
    impl->field = std::move(field);
    impl->vars = std::move(vars);
    for (std::size_t i = 0; i < impl->vars.size(); ++i) {
      if (!impl->index.emplace(impl->vars[i].name, i).second)
        throw InvalidArgument("duplicate variable name " + impl->vars[i].name);
      impl->max_block = std::max(impl->max_block, impl->vars[i].block);
      if (impl->vars[i].weight < 0) throw InvalidArgument("negative variable weight");
    }
    impl_ = std::move(impl);
  }

  const FiniteField& field() const { return impl_->field; }
  std::size_t num_vars() const { return impl_->vars.size(); }
  const Variable& var(std::size_t i) const { return impl_->vars[i]; }
  const std::vector<Variable>& vars() const { return impl_->vars; }
  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = impl_->index.find(std::string(name));
    if (it == impl_->index.end()) return std::nullopt;
    return it->second;
  }
  std::size_t require_index(std::string_view name) const {
    auto i = index_of(name);
    if (!i) throw InvalidArgument("unknown variable " + std::string(name));
    return *i;
  }
  bool same_variables(const PolyRing& o) const {
    if (num_vars() != o.num_vars()) return false;
    for (std::size_t i = 0; i < num_vars(); ++i)
      if (var(i).name != o.var(i).name) return false;
    return true;
  }

  unsigned characteristic() const { return field().characteristic(); }
  // Only the constant ring is perfect.
  bool is_perfect() const { return num_vars() == 0; }

  // ---- monomial order -------------------------------------------------

  /// Three-way comparison: positive when a > b.
  int compare(const Exponents& a, const Exponents& b) const {
    const auto& vars = impl_->vars;
    for (int blk = impl_->max_block; blk >= 0; --blk) {
      long wa = 0, wb = 0, da = 0, db = 0;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].block != blk) continue;
        wa += vars[i].weight * a[i];
        wb += vars[i].weight * b[i];
        da += a[i];
        db += b[i];
      }
      if (wa != wb) return wa > wb ? 1 : -1;
      if (da != db) return da > db ? 1 : -1;
    }
    for (std::size_t i = vars.size(); i-- > 0;) {
      if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    }
    return 0;
  }

  long weighted_degree(const Exponents& e) const {
    long w = 0;
    for (std::size_t i = 0; i < e.size(); ++i) w += impl_->vars[i].weight * e[i];
    return w;
  }

  /// Weighted degree if `f` is homogeneous (zero counts as homogeneous).
  std::optional<long> homogeneous_degree(const Polynomial& f) const {
    if (f.terms.empty()) return 0;
    long d = weighted_degree(f.terms.front().exps);
    for (const auto& t : f.terms)
      if (weighted_degree(t.exps) != d) return std::nullopt;
    return d;
  }

  // ---- construction ---------------------------------------------------

  Exponents unit_exponents() const { return Exponents(num_vars(), 0); }
  Polynomial zero() const { return {}; }
  Polynomial one() const { return constant(1); }
  Polynomial constant(FiniteField::Elem c) const {
    Polynomial r;
    if (c != 0) r.terms.push_back({unit_exponents(), c});
    return r;
  }
  Polynomial from_int(long long n) const { return constant(field().from_int(n)); }
  Polynomial variable(std::size_t i, int power = 1) const {
    Exponents e = unit_exponents();
    e[i] = power;
    return monomial(std::move(e), 1);
  }
  Polynomial variable(std::string_view name, int power = 1) const { return variable(require_index(name), power); }
  Polynomial monomial(Exponents e, FiniteField::Elem c) const {
    Polynomial r;
    if (c != 0) r.terms.push_back({std::move(e), c});
    return r;
  }

  /// Sorts, merges equal monomials and drops zero coefficients.
  Polynomial normalize(std::vector<Term> terms) const {
    std::sort(terms.begin(), terms.end(), [this](const Term& x, const Term& y) { return compare(x.exps, y.exps) > 0; });
    Polynomial r;
    for (auto& t : terms) {
      if (!r.terms.empty() && r.terms.back().exps == t.exps) {
        r.terms.back().coeff = field().add(r.terms.back().coeff, t.coeff);
        if (r.terms.back().coeff == 0) r.terms.pop_back();
      } else if (t.coeff != 0) {
        r.terms.push_back(std::move(t));
      }
    }
    return r;
  }

  // ---- arithmetic -----------------------------------------------------

  bool is_zero(const Polynomial& f) const { return f.terms.empty(); }
  bool equal(const Polynomial& a, const Polynomial& b) const { return a == b; }

  Polynomial add(const Polynomial& a, const Polynomial& b) const { return combine(a, b, false); }
  Polynomial sub(const Polynomial& a, const Polynomial& b) const { return combine(a, b, true); }

  Polynomial neg(const Polynomial& a) const {
    Polynomial r = a;
    for (auto& t : r.terms) t.coeff = field().neg(t.coeff);
    return r;
  }

  Polynomial scale(const Polynomial& a, FiniteField::Elem c) const {
    if (c == 0) return {};
    Polynomial r = a;
    for (auto& t : r.terms) t.coeff = field().mul(t.coeff, c);
    return r;
  }

  /// a * c * x^e; the order is multiplicative, so sortedness is preserved.
  Polynomial mul_term(const Polynomial& a, const Exponents& e, FiniteField::Elem c) const {
    if (c == 0) return {};
    Polynomial r;
    r.terms.reserve(a.terms.size());
    for (const auto& t : a.terms) {
      Term nt{t.exps, field().mul(t.coeff, c)};
      for (std::size_t i = 0; i < e.size(); ++i) nt.exps[i] += e[i];
      r.terms.push_back(std::move(nt));
    }
    return r;
  }

  Polynomial mul(const Polynomial& a, const Polynomial& b) const {
    if (a.terms.empty() || b.terms.empty()) return {};
    if (a.terms.size() == 1) return mul_term(b, a.terms[0].exps, a.terms[0].coeff);
    if (b.terms.size() == 1) return mul_term(a, b.terms[0].exps, b.terms[0].coeff);
    std::unordered_map<Exponents, FiniteField::Elem, ExponentsHash> acc;
    acc.reserve(a.terms.size() * b.terms.size());
    Exponents e(num_vars());
    for (const auto& x : a.terms) {
      for (const auto& y : b.terms) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = x.exps[i] + y.exps[i];
        auto c = field().mul(x.coeff, y.coeff);
        auto [it, inserted] = acc.try_emplace(e, c);
        if (!inserted) it->second = field().add(it->second, c);
      }
    }
    std::vector<Term> terms;
    terms.reserve(acc.size());
    for (auto& [k, v] : acc)
      if (v != 0) terms.push_back({k, v});
    return normalize(std::move(terms));
  }

  /// Termwise p-th power; valid because the characteristic is p.
  Polynomial frobenius(const Polynomial& a) const {
    Polynomial r;
    r.terms.reserve(a.terms.size());
    const unsigned p = characteristic();
    for (const auto& t : a.terms) {
      Term nt{t.exps, field().pow(t.coeff, p)};
      for (auto& x : nt.exps) x *= static_cast<int>(p);
      r.terms.push_back(std::move(nt));
    }
    return normalize(std::move(r.terms));
  }

  Polynomial pow(const Polynomial& a, long long k) const {
    if (k < 0) {
      auto inv = try_inverse(a);
      if (!inv) throw NonUnit("negative power of a non-unit polynomial");
      return pow(*inv, -k);
    }
    if (k == 0) return one();
    if (a.terms.size() == 1) {
      Term t = a.terms[0];
      for (auto& x : t.exps) x = static_cast<int>(x * k);
      t.coeff = field().pow(t.coeff, k);
      return normalize({std::move(t)});
    }
    // Base-p digits: a^k = prod (a^{p^i})^{d_i}, each a^{p^i} by Frobenius.
    const long long p = characteristic();
    Polynomial result = one();
    Polynomial base = a;
    while (k > 0) {
      long long d = k % p;
      for (long long i = 0; i < d; ++i) result = mul(result, base);
      k /= p;
      if (k > 0) base = frobenius(base);
    }
    return result;
  }

  /// Inverse of a unit: a single term whose non-zero exponents sit on Laurent variables.
  std::optional<Polynomial> try_inverse(const Polynomial& a) const {
    if (a.terms.size() != 1) return std::nullopt;
    const auto& t = a.terms[0];
    Term r{t.exps, field().inverse(t.coeff)};
    for (std::size_t i = 0; i < r.exps.size(); ++i) {
      if (r.exps[i] != 0 && !impl_->vars[i].laurent) return std::nullopt;
      r.exps[i] = -r.exps[i];
    }
    return Polynomial{{std::move(r)}};
  }

  /// p-th root when every exponent is divisible by p.
  std::optional<Polynomial> try_pth_root(const Polynomial& a) const {
    const int p = static_cast<int>(characteristic());
    std::vector<Term> out;
    out.reserve(a.terms.size());
    for (const auto& t : a.terms) {
      Term nt{t.exps, field().pth_root(t.coeff)};
      for (auto& x : nt.exps) {
        if (x % p != 0) return std::nullopt;
        x /= p;
      }
      out.push_back(std::move(nt));
    }
    return normalize(std::move(out));
  }

  // ---- substitution ---------------------------------------------------

  /// Image of `f` under x_i -> images[i], computed in `target`.
  Polynomial substitute(const Polynomial& f, const std::vector<Polynomial>& images, const PolyRing& target) const {
    if (images.size() != num_vars()) throw LengthMismatch("substitution needs one image per variable");
    std::vector<std::map<int, Polynomial>> cache(num_vars());
    auto power = [&](std::size_t i, int k) -> const Polynomial& {
      auto it = cache[i].find(k);
      if (it != cache[i].end()) return it->second;
      return cache[i].emplace(k, target.pow(images[i], k)).first->second;
    };
    std::vector<Term> acc;
    for (const auto& t : f.terms) {
      Polynomial m = target.constant(t.coeff);
      for (std::size_t i = 0; i < num_vars() && !m.is_zero(); ++i)
        if (t.exps[i] != 0) m = target.mul(m, power(i, t.exps[i]));
      for (auto& mt : m.terms) acc.push_back(std::move(mt));
    }
    return target.normalize(std::move(acc));
  }

  /// Maps variables by name into `target`; every variable of f must exist there.
  Polynomial rename_into(const Polynomial& f, const PolyRing& target) const {
    std::vector<std::size_t> map(num_vars());
    for (std::size_t i = 0; i < num_vars(); ++i) map[i] = target.require_index(var(i).name);
    return reindex_into(f, target, map);
  }

  Polynomial reindex_into(const Polynomial& f, const PolyRing& target, const std::vector<std::size_t>& map) const {
    std::vector<Term> out;
    out.reserve(f.terms.size());
    for (const auto& t : f.terms) {
      Term nt{target.unit_exponents(), t.coeff};
      for (std::size_t i = 0; i < num_vars(); ++i)
        if (t.exps[i] != 0) nt.exps[map[i]] += t.exps[i];
      out.push_back(std::move(nt));
    }
    return target.normalize(std::move(out));
  }

  FiniteField::Elem evaluate(const Polynomial& f, std::span<const FiniteField::Elem> values) const {
    if (values.size() != num_vars()) throw LengthMismatch("evaluation needs one value per variable");
    FiniteField::Elem acc = 0;
    for (const auto& t : f.terms) {
      auto m = t.coeff;
      for (std::size_t i = 0; i < num_vars() && m != 0; ++i)
        if (t.exps[i] != 0) m = field().mul(m, field().pow(values[i], t.exps[i]));
      acc = field().add(acc, m);
    }
    return acc;
  }

  /// Largest exponent of variable i (0 for the zero polynomial).
  int max_degree_in(const Polynomial& f, std::size_t i) const {
    int d = 0;
    for (const auto& t : f.terms) d = std::max(d, t.exps[i]);
    return d;
  }
  int min_degree_in(const Polynomial& f, std::size_t i) const {
    if (f.terms.empty()) return 0;
    int d = f.terms.front().exps[i];
    for (const auto& t : f.terms) d = std::min(d, t.exps[i]);
    return d;
  }
  bool involves(const Polynomial& f, std::size_t i) const {
    for (const auto& t : f.terms)
      if (t.exps[i] != 0) return true;
    return false;
  }

  /// Makes the leading coefficient 1.
  Polynomial monic(const Polynomial& f) const {
    if (f.terms.empty()) return f;
    return scale(f, field().inverse(f.terms.front().coeff));
  }

  // ---- text -----------------------------------------------------------

  std::string format(const Polynomial& f) const {
    if (f.terms.empty()) return "0";
    std::string out;
    for (const auto& t : f.terms) {
      if (!out.empty()) out += " + ";
      std::string mono;
      for (std::size_t i = 0; i < num_vars(); ++i) {
        if (t.exps[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += var(i).name;
        if (t.exps[i] != 1) mono += "^" + std::to_string(t.exps[i]);
      }
      std::string c = field().format(t.coeff);
      bool compound = c.find_first_of("+*u") != std::string::npos;
      if (mono.empty()) {
        out += c;
      } else if (t.coeff == 1) {
        out += mono;
      } else {
        out += (compound ? "(" + c + ")" : c) + "*" + mono;
      }
    }
    return out;
  }

  /// Parses expressions built from integers, the field generator `u`, ring
  /// variables (`x[1,0]`, `t`), `+ - * ^` and parentheses.
  Polynomial parse(std::string_view text) const {
    Parser ps{*this, std::string(text), 0};
    Polynomial r = ps.expr();
    ps.skip();
    if (ps.pos != ps.s.size()) ps.fail("unexpected '" + std::string(1, ps.s[ps.pos]) + "'");
    return r;
  }

 private:
  struct Impl {
    FiniteField field;
    std::vector<Variable> vars;
    std::unordered_map<std::string, std::size_t> index;
    int max_block = 0;
  };

  Polynomial combine(const Polynomial& a, const Polynomial& b, bool subtract) const {
    Polynomial r;
    r.terms.reserve(a.terms.size() + b.terms.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms.size() || j < b.terms.size()) {
      int c;
      if (i == a.terms.size()) c = -1;
      else if (j == b.terms.size()) c = 1;
      else c = compare(a.terms[i].exps, b.terms[j].exps);
      if (c > 0) {
        r.terms.push_back(a.terms[i++]);
      } else if (c < 0) {
        Term t = b.terms[j++];
        if (subtract) t.coeff = field().neg(t.coeff);
        r.terms.push_back(std::move(t));
      } else {
        auto cb = subtract ? field().neg(b.terms[j].coeff) : b.terms[j].coeff;
        auto s = field().add(a.terms[i].coeff, cb);
        if (s != 0) r.terms.push_back({a.terms[i].exps, s});
        ++i;
        ++j;
      }
    }
    return r;
  }

  struct Parser {
    const PolyRing& ring;
    std::string s;
    std::size_t pos;

    [[noreturn]] void fail(const std::string& msg) const {
      throw ParseError(msg + " in polynomial '" + s + "'");
    }
    void skip() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool accept(char c) {
      skip();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }
    long long integer() {
      skip();
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos) fail("expected an integer");
      return std::stoll(s.substr(start, pos - start));
    }
    Polynomial expr() {
      skip();
      bool negative = false;
      if (accept('-')) negative = true;
      else accept('+');
      Polynomial acc = term();
      if (negative) acc = ring.neg(acc);
      while (true) {
        if (accept('+')) acc = ring.add(acc, term());
        else if (accept('-')) acc = ring.sub(acc, term());
        else break;
      }
      return acc;
    }
    Polynomial term() {
      Polynomial acc = factor();
      while (accept('*')) acc = ring.mul(acc, factor());
      return acc;
    }
    Polynomial factor() {
      Polynomial b = base();
      if (accept('^')) {
        bool negative = accept('-');
        long long k = integer();
        b = ring.pow(b, negative ? -k : k);
      }
      return b;
    }
    Polynomial base() {
      skip();
      if (pos >= s.size()) fail("unexpected end");
      char c = s[pos];
      if (c == '(') {
        ++pos;
        Polynomial r = expr();
        if (!accept(')')) fail("missing ')'");
        return r;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) return ring.from_int(integer());
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string name;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '\''))
          name += s[pos++];
        if (pos < s.size() && s[pos] == '[') {
          while (pos < s.size() && s[pos] != ']') {
            if (!std::isspace(static_cast<unsigned char>(s[pos]))) name += s[pos];
            ++pos;
          }
          if (pos == s.size()) fail("missing ']'");
          name += s[pos++];
        }
        if (auto i = ring.index_of(name)) return ring.variable(*i);
        if (name == "u") return ring.constant(ring.field().generator());
        fail("unknown variable '" + name + "'");
      }
      fail("unexpected '" + std::string(1, c) + "'");
    }
  };

  std::shared_ptr<const Impl> impl_;
};

/// Name used for Witt coordinate variables throughout: x[i,j].
inline std::string coord_name(std::string_view base, int i, int j) {
  return std::string(base) + "[" + std::to_string(i) + "," + std::to_string(j) + "]";
}

/// Variables base[i,j] for 1 <= i <= n, 0 <= j < N with weight p^j.
inline std::vector<Variable> coordinate_variables(std::string_view base, int n, int N, unsigned p, int block = 0) {
  std::vector<Variable> vars;
  for (int i = 1; i <= n; ++i) {
    long w = 1;
    for (int j = 0; j < N; ++j) {
      vars.push_back({coord_name(base, i, j), w, block, false});
      w *= p;
    }
  }
  return vars;
}

}  // namespace wittgrass
