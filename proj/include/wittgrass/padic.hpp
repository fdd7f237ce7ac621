#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "wittgrass/errors.hpp"
#include "wittgrass/matrix.hpp"
#include "wittgrass/witt.hpp"

namespace wittgrass {

/// Valuation used for an exact zero; any valuation at or above it is treated as infinite.
inline constexpr long kExactZero = 1L << 40;

/// p^valuation * mantissa in W(A)[1/p], known modulo p^{valuation + mantissa length}.
///
/// A nonzero value has a mantissa with nonzero leading component. An empty
/// mantissa means "zero at precision": the value is divisible by p^valuation.
template <class Ring>
struct PadicNumber {
  long valuation = kExactZero;
  WittVector<Ring> mantissa;

  bool is_zero() const { return mantissa.coords.empty(); }
  bool is_exact_zero() const { return is_zero() && valuation >= kExactZero; }
  /// Absolute precision.
  long precision() const { return valuation + mantissa.length(); }
  bool operator==(const PadicNumber&) const = default;
};

/// Fixed-precision arithmetic in W(A)[1/p]; mantissas never exceed the Witt length N.
template <class Ring>
class PadicField {
 public:
  using Elem = PadicNumber<Ring>;
  using Scalar = typename Ring::Elem;

  explicit PadicField(WittRing<Ring> W) : W_(std::move(W)) {}

  const WittRing<Ring>& witt() const { return W_; }
  const Ring& scalars() const { return W_.scalars(); }
  int length() const { return W_.length(); }
  unsigned prime() const { return W_.prime(); }

  Elem exact_zero() const { return Elem{kExactZero, W_.zero(0)}; }
  Elem zero_at(long precision) const { return Elem{std::min(precision, kExactZero), W_.zero(0)}; }
  Elem zero() const { return exact_zero(); }
  Elem one() const { return one(length()); }
  Elem one(int len) const { return Elem{0, W_.one(len)}; }

  /// p^v * mantissa, normalized (leading zero components are divided out).
  Elem make(long v, WittVector<Ring> mantissa) const { return normalize(v, std::move(mantissa)); }
  Elem from_witt(const WittVector<Ring>& a) const { return make(0, a); }
  Elem from_int(long long k) const { return from_int(k, length()); }
  Elem from_int(long long k, int len) const {
    if (k == 0) return exact_zero();
    return make(0, W_.from_int(k, len));
  }
  Elem power_of_p(long v) const { return power_of_p(v, length()); }
  Elem power_of_p(long v, int len) const { return Elem{v, W_.one(len)}; }
  Elem teichmuller(const Scalar& c, long v = 0) const {
    if (scalars().is_zero(c)) return exact_zero();
    return Elem{v, W_.teichmuller(c, length())};
  }

  bool is_zero(const Elem& a) const { return a.is_zero(); }
  long valuation(const Elem& a) const { return a.valuation; }

  Elem neg(const Elem& a) const {
    if (a.is_zero()) return a;
    return Elem{a.valuation, W_.neg(a.mantissa)};
  }

  Elem add(const Elem& a, const Elem& b) const {
    if (a.is_exact_zero()) return b;
    if (b.is_exact_zero()) return a;
    const long prec = std::min(a.precision(), b.precision());
    const long m = std::min(a.valuation, b.valuation);
    if (prec <= m) return zero_at(prec);
    const int L = static_cast<int>(prec - m);
    return normalize(m, W_.add(aligned(a, m, L), aligned(b, m, L)));
  }
  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

  Elem mul(const Elem& a, const Elem& b) const {
    if (a.is_exact_zero() || b.is_exact_zero()) return exact_zero();
    if (a.is_zero() || b.is_zero()) return zero_at(a.valuation + b.valuation);
    const int L = std::min(a.mantissa.length(), b.mantissa.length());
    return Elem{a.valuation + b.valuation, W_.mul(W_.truncate(a.mantissa, L), W_.truncate(b.mantissa, L))};
  }

  Elem inverse(const Elem& a) const {
    if (a.is_zero()) throw ZeroAtPrecision("cannot invert a value that is zero modulo p^" + std::to_string(a.valuation));
    return Elem{-a.valuation, W_.inverse(a.mantissa)};
  }
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inverse(b)); }

  /// Equality at the common precision.
  bool equal(const Elem& a, const Elem& b) const { return sub(a, b).is_zero(); }

  /// Multiplication by p^k (k may be negative).
  Elem shift(const Elem& a, long k) const {
    if (a.is_exact_zero()) return a;
    Elem r = a;
    r.valuation += k;
    return r;
  }

  /// Same value with absolute precision `prec`: truncates, or pads with zero
  /// components (which asserts the extra digits are zero).
  Elem with_precision(const Elem& a, long prec) const {
    if (a.is_exact_zero()) return a;
    if (a.is_zero()) return zero_at(prec);
    if (prec <= a.valuation) return zero_at(prec);
    const long len = prec - a.valuation;
    if (len > length()) throw LengthMismatch("requested precision exceeds the Witt length");
    if (len <= a.mantissa.length()) return Elem{a.valuation, W_.truncate(a.mantissa, static_cast<int>(len))};
    return Elem{a.valuation, W_.pad(a.mantissa, static_cast<int>(len))};
  }

  /// The value as an element of W_len when it is integral, padded or truncated.
  WittVector<Ring> to_witt(const Elem& a, int len) const {
    if (a.is_zero()) {
      if (a.valuation < len) throw PrecisionLoss("value is only known modulo p^" + std::to_string(a.valuation));
      return W_.zero(len);
    }
    if (a.valuation < 0) throw InvalidArgument("value " + format(a) + " is not integral");
    if (a.precision() < len) throw PrecisionLoss("value " + format(a) + " is not known modulo p^" + std::to_string(len));
    return aligned(a, 0, len);
  }

  std::string format(const Elem& a) const {
    if (a.is_exact_zero()) return "0";
    if (a.is_zero()) return "O(p^" + std::to_string(a.valuation) + ")";
    std::string m = W_.format(a.mantissa);
    if (a.valuation == 0) return m;
    return "p^" + std::to_string(a.valuation) + "*" + m;
  }

  /// Accepts `0`, `O(p^k)`, `(a0,...)`, `[c]`, integers, `p`, `p^v`, and
  /// `p^v*X` for X one of the mantissa forms.
  Elem parse(std::string_view text) const {
    std::string s = detail::trim(text);
    if (s.empty()) throw ParseError("empty p-adic literal");
    if (s == "0") return exact_zero();
    if (s.rfind("O(p^", 0) == 0 && s.back() == ')') return zero_at(std::stol(s.substr(4, s.size() - 5)));
    long v = 0;
    std::string rest = s;
    if (s[0] == 'p') {
      std::size_t pos = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        std::size_t end = pos;
        if (end < s.size() && s[end] == '-') ++end;
        while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
        if (end == pos) throw ParseError("bad exponent in '" + s + "'");
        v = std::stol(s.substr(pos, end - pos));
        pos = end;
      } else {
        v = 1;
      }
      if (pos == s.size()) return power_of_p(v);
      if (s[pos] != '*') throw ParseError("expected '*' in '" + s + "'");
      rest = detail::trim(s.substr(pos + 1));
    }
    Elem m;
    if (!rest.empty() && rest[0] == '(') {
      m = make(0, W_.parse(rest));
    } else if (!rest.empty() && rest[0] == '[' && rest.back() == ']') {
      m = teichmuller(scalars().parse(rest.substr(1, rest.size() - 2)));
    } else {
      try {
        std::size_t used = 0;
        long long k = std::stoll(rest, &used);
        if (used != rest.size()) throw ParseError("bad p-adic literal '" + s + "'");
        m = from_int(k);
      } catch (const std::logic_error&) {
        throw ParseError("bad p-adic literal '" + s + "'");
      }
    }
    return shift(m, v);
  }

  /// Rows separated by ';', entries by top-level ','.
  Matrix<Elem> parse_matrix(std::string_view text) const {
    Matrix<Elem> M;
    for (const auto& row : detail::split_top_level(text, ';')) {
      if (detail::trim(row).empty()) continue;
      std::vector<Elem> r;
      for (const auto& e : detail::split_top_level(row, ',')) r.push_back(parse(e));
      M.push_back(std::move(r));
    }
    for (const auto& r : M)
      if (r.size() != M.front().size()) throw ParseError("matrix rows have different lengths");
    return M;
  }

  std::string format_matrix(const Matrix<Elem>& M) const {
    std::string out;
    for (std::size_t i = 0; i < M.size(); ++i) {
      if (i) out += "; ";
      for (std::size_t j = 0; j < M[i].size(); ++j) {
        if (j) out += ", ";
        out += format(M[i][j]);
      }
    }
    return out;
  }

 private:
  // a / p^m as a length-L Witt vector (exact below level L), assuming v(a) >= m.
  WittVector<Ring> aligned(const Elem& a, long m, int L) const {
    if (a.is_zero()) return W_.zero(L);
    const long k = a.valuation - m;
    if (k >= L) return W_.zero(L);
    const int keep = static_cast<int>(L - k);
    if (keep > a.mantissa.length()) throw Error("internal: alignment beyond the known precision");
    WittVector<Ring> x = W_.pad(W_.truncate(a.mantissa, keep), L);
    for (long i = 0; i < k; ++i) x = W_.is_perfect() ? W_.p_shift(x) : W_.times_p(x);
    return x;
  }

  // Strips leading zero components: (0, a_1, ..., a_{L-1}) = p * (a_1^{1/p}, ..., a_{L-1}^{1/p}).
  Elem normalize(long v, WittVector<Ring> a) const {
    while (!a.coords.empty() && scalars().is_zero(a.coords[0])) {
      WittVector<Ring> b;
      for (std::size_t i = 1; i < a.coords.size(); ++i) {
        auto r = scalars().try_pth_root(a.coords[i]);
        if (!r) throw NotPerfect("dividing by p needs a p-th root of " + scalars().format(a.coords[i]));
        b.coords.push_back(*r);
      }
      a = std::move(b);
      ++v;
    }
    if (a.coords.empty()) return zero_at(v);
    return Elem{v, std::move(a)};
  }

  WittRing<Ring> W_;
};

}  // namespace wittgrass
