#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "wittgrass/errors.hpp"
#include "wittgrass/finite_field.hpp"
#include "wittgrass/polynomial.hpp"
#include "wittgrass/structure_table.hpp"

namespace wittgrass {

/// Truncated Witt vector (a_0, ..., a_{L-1}) over a coefficient ring.
template <class Ring>
struct WittVector {
  std::vector<typename Ring::Elem> coords;

  int length() const { return static_cast<int>(coords.size()); }
  bool operator==(const WittVector&) const = default;
};

namespace detail {

template <class Ring>
typename Ring::Elem sum_elems(const Ring& ring, std::vector<typename Ring::Elem>& parts) {
  if constexpr (std::is_same_v<Ring, PolyRing>) {
    std::vector<Term> all;
    for (auto& f : parts)
      for (auto& t : f.terms) all.push_back(std::move(t));
    return ring.normalize(std::move(all));
  } else {
    auto acc = ring.zero();
    for (const auto& x : parts) acc = ring.add(acc, x);
    return acc;
  }
}

// Splits "a, (b,c), d" at top-level commas.
inline std::vector<std::string> split_top_level(std::string_view s, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace detail

/// W_N(A) for a coefficient ring A of characteristic p (FiniteField or PolyRing).
///
/// Vectors may be shorter than N; binary operations require equal lengths and
/// work at that length, since component n depends only on components <= n.
template <class Ring>
class WittRing {
 public:
  using Scalar = typename Ring::Elem;
  using Elem = WittVector<Ring>;

  WittRing(Ring ring, int N) : ring_(std::move(ring)), N_(N) {
    tables_ = structure_tables(ring_.characteristic(), N);
  }

  const Ring& scalars() const { return ring_; }
  int length() const { return N_; }
  unsigned prime() const { return ring_.characteristic(); }
  bool is_perfect() const { return ring_.is_perfect(); }

  Elem zero() const { return zero(N_); }
  Elem zero(int len) const { return Elem{std::vector<Scalar>(len, ring_.zero())}; }
  Elem one() const { return one(N_); }
  Elem one(int len) const { return teichmuller(ring_.one(), len); }

  Elem teichmuller(const Scalar& c) const { return teichmuller(c, N_); }
  Elem teichmuller(const Scalar& c, int len) const {
    check_len(len);
    Elem r = zero(len);
    if (len > 0) r.coords[0] = c;
    return r;
  }

  Elem make(std::vector<Scalar> coords) const {
    check_len(static_cast<int>(coords.size()));
    return Elem{std::move(coords)};
  }

  Elem from_int(long long k) const { return from_int(k, N_); }
  Elem from_int(long long k, int len) const {
    bool negative = k < 0;
    unsigned long long m = negative ? -static_cast<unsigned long long>(k) : static_cast<unsigned long long>(k);
    Elem acc = zero(len), base = one(len);
    while (m > 0) {
      if (m & 1u) acc = add(acc, base);
      m >>= 1;
      if (m > 0) base = add(base, base);
    }
    return negative ? neg(acc) : acc;
  }

  bool is_zero(const Elem& a) const {
    for (const auto& c : a.coords)
      if (!ring_.is_zero(c)) return false;
    return true;
  }
  bool equal(const Elem& a, const Elem& b) const {
    if (a.length() != b.length()) return false;
    for (int i = 0; i < a.length(); ++i)
      if (!ring_.equal(a.coords[i], b.coords[i])) return false;
    return true;
  }

  Elem add(const Elem& a, const Elem& b) const { return binary(WittOp::Add, a, b); }
  Elem mul(const Elem& a, const Elem& b) const { return binary(WittOp::Mul, a, b); }
  Elem neg(const Elem& a) const {
    check_len(a.length());
    Elem r = zero(a.length());
    for (int n = 0; n < a.length(); ++n) r.coords[n] = component(WittOp::Neg, n, a, nullptr);
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

  Elem pow(const Elem& a, unsigned long long k) const {
    Elem result = one(a.length()), base = a;
    while (k > 0) {
      if (k & 1u) result = mul(result, base);
      k >>= 1;
      if (k > 0) base = mul(base, base);
    }
    return result;
  }

  bool is_unit(const Elem& a) const { return a.length() > 0 && ring_.try_inverse(a.coords[0]).has_value(); }

  /// Inverse by solving mul(a, b) = 1 one component at a time: the n-th product
  /// component is a_0^{p^n} b_n plus terms in b_0..b_{n-1}.
  std::optional<Elem> try_inverse(const Elem& a) const {
    check_len(a.length());
    if (a.length() == 0) return a;
    auto a0_inv = ring_.try_inverse(a.coords[0]);
    if (!a0_inv) return std::nullopt;
    Elem b = zero(a.length());
    Scalar lead_inv = *a0_inv;
    for (int n = 0; n < a.length(); ++n) {
      Scalar rest = component(WittOp::Mul, n, a, &b);
      Scalar want = n == 0 ? ring_.one() : ring_.zero();
      b.coords[n] = ring_.mul(ring_.sub(want, rest), lead_inv);
      lead_inv = ring_.pow(lead_inv, static_cast<long long>(prime()));
    }
    return b;
  }

  Elem inverse(const Elem& a) const {
    auto r = try_inverse(a);
    if (!r) throw NonUnit("Witt vector " + format(a) + " has a non-unit leading component");
    return *r;
  }

  Elem frobenius(const Elem& a) const {
    require_perfect("Frobenius");
    Elem r = a;
    for (auto& c : r.coords) c = ring_.pow(c, static_cast<long long>(prime()));
    return r;
  }

  Elem verschiebung(const Elem& a) const {
    Elem r = zero(a.length());
    for (int i = 1; i < a.length(); ++i) r.coords[i] = a.coords[i - 1];
    return r;
  }

  /// Multiplication by p, as (0, a_0^p, ..., a_{L-2}^p).
  Elem p_shift(const Elem& a) const {
    require_perfect("p_shift");
    return verschiebung(frobenius(a));
  }

  /// Multiplication by the integer p through the structure polynomials; valid over any ring.
  Elem times_p(const Elem& a) const { return mul(from_int(prime(), a.length()), a); }

  /// First `len` components.
  Elem truncate(const Elem& a, int len) const {
    if (len > a.length()) throw LengthMismatch("cannot truncate to a longer length");
    return Elem{std::vector<Scalar>(a.coords.begin(), a.coords.begin() + len)};
  }
  /// Extends by zero components.
  Elem pad(const Elem& a, int len) const {
    check_len(len);
    Elem r = a;
    while (r.length() < len) r.coords.push_back(ring_.zero());
    return r;
  }

  std::string format(const Elem& a) const {
    std::string out = "(";
    for (int i = 0; i < a.length(); ++i) {
      if (i) out += ",";
      out += ring_.format(a.coords[i]);
    }
    return out + ")";
  }

  /// Parses `(a0,a1,...)`; the length must not exceed N.
  Elem parse(std::string_view text) const {
    std::string s = detail::trim(text);
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') throw ParseError("Witt vector must be written (a0,a1,...): " + s);
    Elem r;
    for (const auto& part : detail::split_top_level(std::string_view(s).substr(1, s.size() - 2), ','))
      r.coords.push_back(ring_.parse(detail::trim(part)));
    check_len(r.length());
    return r;
  }

  /// n-th component of op(a, b) (b ignored for Neg; nullptr only for Neg).
  Scalar component(WittOp op, int n, const Elem& a, const Elem* b) const {
    const ModPoly& f = tables_->reduced.of(op)[n];
    // Lazy power cache per variable.
    std::vector<std::map<int, Scalar>> cache(IntPoly::kMaxVars);
    auto value = [&](int var) -> const Scalar& {
      return var < 8 ? a.coords[var] : b->coords[var - 8];
    };
    auto power = [&](int var, int e) -> const Scalar& {
      auto it = cache[var].find(e);
      if (it != cache[var].end()) return it->second;
      return cache[var].emplace(e, ring_.pow(value(var), e)).first->second;
    };
    std::vector<Scalar> parts;
    for (const auto& t : f) {
      bool vanishes = false;
      for (int v = 0; v < IntPoly::kMaxVars && !vanishes; ++v)
        if (t.exps[v] != 0 && ring_.is_zero(value(v))) vanishes = true;
      if (vanishes) continue;
      Scalar m = ring_.from_int(t.coeff);
      for (int v = 0; v < IntPoly::kMaxVars; ++v)
        if (t.exps[v] != 0) m = ring_.mul(m, power(v, t.exps[v]));
      parts.push_back(std::move(m));
    }
    return detail::sum_elems(ring_, parts);
  }

 private:
  void check_len(int len) const {
    if (len < 0 || len > N_)
      throw LengthMismatch("Witt vector length " + std::to_string(len) + " exceeds the ring length " + std::to_string(N_));
  }

  void require_perfect(const char* what) const {
    if (!ring_.is_perfect())
      throw NotPerfect(std::string(what) + " needs a perfect coefficient ring; multiply by the constant p instead");
  }

  Elem binary(WittOp op, const Elem& a, const Elem& b) const {
    if (a.length() != b.length())
      throw LengthMismatch("operands have lengths " + std::to_string(a.length()) + " and " + std::to_string(b.length()));
    check_len(a.length());
    Elem r = zero(a.length());
    for (int n = 0; n < a.length(); ++n) r.coords[n] = component(op, n, a, &b);
    return r;
  }

  Ring ring_;
  int N_;
  std::shared_ptr<const structure::Cache::Entry> tables_;
};

}  // namespace wittgrass
