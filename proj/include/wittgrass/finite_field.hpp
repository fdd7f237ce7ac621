#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wittgrass/errors.hpp"

namespace wittgrass {

namespace detail {

// Monic irreducible polynomials over F_p, coefficients low to high without the
// leading 1. These are the Conway polynomials for the listed (p, e).
struct ModulusEntry {
  unsigned p;
  unsigned e;
  std::array<unsigned, 12> low;
};

inline constexpr ModulusEntry kModuli[] = {
    {2, 2, {1, 1}},
    {2, 3, {1, 1, 0}},
    {2, 4, {1, 1, 0, 0}},
    {2, 5, {1, 0, 1, 0, 0}},
    {2, 6, {1, 1, 0, 1, 1, 0}},
    {2, 7, {1, 1, 0, 0, 0, 0, 0}},
    {2, 8, {1, 0, 1, 1, 1, 0, 0, 0}},
    {2, 9, {1, 0, 0, 0, 1, 0, 0, 0, 0}},
    {2, 10, {1, 1, 1, 1, 0, 1, 1, 0, 0, 0}},
    {3, 2, {2, 2}},
    {3, 3, {1, 2, 0}},
    {3, 4, {2, 0, 0, 2}},
    {3, 5, {1, 2, 0, 0, 0}},
    {3, 6, {2, 2, 1, 0, 2, 0}},
    {5, 2, {2, 4}},
    {5, 3, {3, 3, 0}},
    {5, 4, {2, 4, 4, 0}},
    {7, 2, {3, 6}},
    {7, 3, {4, 0, 6}},
};

inline bool is_small_prime(unsigned p) {
  if (p < 2) return false;
  for (unsigned d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace detail

/// The finite field F_{p^e} = F_p[u]/(f) for a fixed shipped modulus f.
///
/// Elements are encoded as integers sum c_i p^i standing for sum c_i u^i, so
/// 0 and 1 are the additive and multiplicative identities and the prime field
/// is {0, ..., p-1}. Copies share their tables.
class FiniteField {
 public:
  using Elem = std::uint32_t;

  static constexpr unsigned kMaxOrder = 4096;

  FiniteField() : FiniteField(2, 1) {}

  FiniteField(unsigned p, unsigned e) {
    if (!detail::is_small_prime(p)) throw InvalidArgument("characteristic " + std::to_string(p) + " is not prime");
    if (e == 0) throw InvalidArgument("field degree must be positive");
    auto t = std::make_shared<Tables>();
    t->p = p;
    t->e = e;
    t->q = 1;
    for (unsigned i = 0; i < e; ++i) {
      t->q *= p;
      if (t->q > kMaxOrder) throw LimitError("field order p^e exceeds " + std::to_string(kMaxOrder));
    }
    t->modulus.assign(e, 0);
    if (e > 1) {
      bool found = false;
      for (const auto& m : detail::kModuli) {
        if (m.p == p && m.e == e) {
          for (unsigned i = 0; i < e; ++i) t->modulus[i] = m.low[i];
          found = true;
        }
      }
      if (!found) throw LimitError("no shipped modulus for F_" + std::to_string(p) + "^" + std::to_string(e));
    }
    build(*t);
    tables_ = std::move(t);
  }

  /// Field of the given order q = p^e.
  static FiniteField of_order(unsigned q) {
    if (q < 2) throw InvalidArgument("field order must be at least 2");
    unsigned p = 2;
    while (q % p != 0) ++p;
    unsigned e = 0;
    unsigned r = q;
    while (r % p == 0) {
      r /= p;
      ++e;
    }
    if (r != 1) throw InvalidArgument(std::to_string(q) + " is not a prime power");
    return FiniteField(p, e);
  }

  unsigned characteristic() const { return tables_->p; }
  unsigned degree() const { return tables_->e; }
  unsigned order() const { return tables_->q; }
  bool is_perfect() const { return true; }

  bool operator==(const FiniteField& o) const { return order() == o.order(); }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  bool is_zero(Elem a) const { return a == 0; }
  bool equal(Elem a, Elem b) const { return a == b; }

  Elem from_int(long long n) const {
    long long p = tables_->p;
    long long r = n % p;
    if (r < 0) r += p;
    return static_cast<Elem>(r);
  }

  Elem add(Elem a, Elem b) const {
    const auto& t = *tables_;
    if (t.p == 2) return a ^ b;
    Elem r = 0, scale = 1;
    for (unsigned i = 0; i < t.e; ++i) {
      r += ((a % t.p + b % t.p) % t.p) * scale;
      a /= t.p;
      b /= t.p;
      scale *= t.p;
    }
    return r;
  }

  Elem neg(Elem a) const {
    const auto& t = *tables_;
    if (t.p == 2) return a;
    Elem r = 0, scale = 1;
    for (unsigned i = 0; i < t.e; ++i) {
      r += ((t.p - a % t.p) % t.p) * scale;
      a /= t.p;
      scale *= t.p;
    }
    return r;
  }

  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    const auto& t = *tables_;
    std::uint32_t s = t.log[a] + t.log[b];
    if (s >= t.q - 1) s -= t.q - 1;
    return t.exp[s];
  }

  std::optional<Elem> try_inverse(Elem a) const {
    if (a == 0) return std::nullopt;
    const auto& t = *tables_;
    return t.exp[(t.q - 1 - t.log[a]) % (t.q - 1)];
  }

  Elem inverse(Elem a) const {
    auto r = try_inverse(a);
    if (!r) throw NonUnit("0 has no inverse in F_" + std::to_string(order()));
    return *r;
  }

  Elem pow(Elem a, long long k) const {
    const auto& t = *tables_;
    if (k < 0) {
      a = inverse(a);
      k = -k;
    }
    if (k == 0) return 1;
    if (a == 0) return 0;
    unsigned long long s = (static_cast<unsigned long long>(t.log[a]) * (k % (t.q - 1))) % (t.q - 1);
    return t.exp[s];
  }

  Elem frobenius(Elem a) const { return pow(a, tables_->p); }

  /// Unique p-th root a^{p^{e-1}}.
  Elem pth_root(Elem a) const {
    Elem r = a;
    for (unsigned i = 1; i < tables_->e; ++i) r = pow(r, tables_->p);
    return r;
  }
  std::optional<Elem> try_pth_root(Elem a) const { return pth_root(a); }

  /// The class of the adjoined root u (equals the prime element 1 when e = 1).
  Elem generator() const { return degree() == 1 ? 1 : tables_->p; }

  /// Coefficients of the element in the basis 1, u, ..., u^{e-1}.
  std::vector<unsigned> digits(Elem a) const {
    std::vector<unsigned> d(degree());
    for (auto& c : d) {
      c = a % tables_->p;
      a /= tables_->p;
    }
    return d;
  }

  std::string format(Elem a) const {
    if (a == 0) return "0";
    auto d = digits(a);
    std::string out;
    for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) {
      if (d[i] == 0) continue;
      if (!out.empty()) out += "+";
      if (i == 0) {
        out += std::to_string(d[i]);
        continue;
      }
      if (d[i] != 1) out += std::to_string(d[i]) + "*";
      out += "u";
      if (i > 1) out += "^" + std::to_string(i);
    }
    return out;
  }

  /// Parses sums of terms `c`, `u`, `c*u^k`, `u^k` (e.g. `u+1`, `2*u^2+1`).
  Elem parse(std::string_view s) const {
    std::string text;
    for (char ch : s)
      if (ch != ' ' && ch != '\t') text += ch;
    if (text.empty()) throw ParseError("empty field literal");
    Elem acc = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
      bool negative = false;
      if (text[pos] == '+' || text[pos] == '-') {
        negative = text[pos] == '-';
        ++pos;
      }
      long long coeff = 1;
      bool have_coeff = false;
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos > start) {
        coeff = std::stoll(text.substr(start, pos - start));
        have_coeff = true;
      }
      Elem term = from_int(coeff);
      if (pos < text.size() && text[pos] == '*') ++pos;
      if (pos < text.size() && text[pos] == 'u') {
        ++pos;
        long long k = 1;
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          std::size_t s2 = pos;
          while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
          if (pos == s2) throw ParseError("missing exponent in field literal '" + std::string(s) + "'");
          k = std::stoll(text.substr(s2, pos - s2));
        }
        term = mul(term, pow(generator(), k));
      } else if (!have_coeff) {
        throw ParseError("bad field literal '" + std::string(s) + "'");
      }
      if (pos < text.size() && text[pos] != '+' && text[pos] != '-')
        throw ParseError("bad field literal '" + std::string(s) + "'");
      acc = negative ? sub(acc, term) : add(acc, term);
    }
    return acc;
  }

 private:
  struct Tables {
    unsigned p = 2, e = 1, q = 2;
    std::vector<unsigned> modulus;  // low coefficients of the monic modulus
    std::vector<std::uint32_t> exp, log;
  };

  // Schoolbook product in F_p[u]/(f), used only while building tables.
  static Elem slow_mul(const Tables& t, Elem a, Elem b) {
    std::vector<unsigned> x(t.e), y(t.e), r(2 * t.e, 0);
    for (unsigned i = 0; i < t.e; ++i) {
      x[i] = a % t.p;
      a /= t.p;
      y[i] = b % t.p;
      b /= t.p;
    }
    for (unsigned i = 0; i < t.e; ++i)
      for (unsigned j = 0; j < t.e; ++j) r[i + j] = (r[i + j] + x[i] * y[j]) % t.p;
    for (int k = 2 * static_cast<int>(t.e) - 2; k >= static_cast<int>(t.e); --k) {
      unsigned c = r[k];
      if (c == 0) continue;
      r[k] = 0;
      // u^e = -sum modulus[i] u^i
      for (unsigned i = 0; i < t.e; ++i) r[k - t.e + i] = (r[k - t.e + i] + (t.p - c) * t.modulus[i]) % t.p;
    }
    Elem out = 0, scale = 1;
    for (unsigned i = 0; i < t.e; ++i) {
      out += r[i] * scale;
      scale *= t.p;
    }
    return out;
  }

  static void build(Tables& t) {
    t.exp.assign(t.q, 0);
    t.log.assign(t.q, 0);
    for (Elem cand = (t.q == 2 ? 1 : 2); cand < t.q; ++cand) {
      Elem x = 1;
      std::uint32_t k = 0;
      for (; k < t.q - 1; ++k) {
        if (k > 0 && x == 1) break;
        t.exp[k] = x;
        t.log[x] = k;
        x = slow_mul(t, x, cand);
      }
      if (k == t.q - 1 && x == 1) return;
    }
    throw Error("internal: shipped modulus is not irreducible for F_" + std::to_string(t.q));
  }

  std::shared_ptr<const Tables> tables_;
};

}  // namespace wittgrass
