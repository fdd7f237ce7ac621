#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wittgrass/errors.hpp"

namespace wittgrass {

/// Integer-coefficient polynomial in up to 16 variables with exponents below 256.
///
/// Monomials are packed one byte per variable into a 128-bit key, so monomial
/// multiplication is key addition. Variables 0..7 print as X0..X7 and 8..15 as
/// Y0..Y7, matching the Witt structure polynomials' two argument vectors.
class IntPoly {
 public:
  using Key = unsigned __int128;
  static constexpr int kMaxVars = 16;
  static constexpr int kMaxExponent = 255;

  struct KeyHash {
    std::size_t operator()(Key k) const noexcept {
      auto lo = static_cast<std::uint64_t>(k);
      auto hi = static_cast<std::uint64_t>(k >> 64);
      return std::hash<std::uint64_t>{}(lo * 0x9e3779b97f4a7c15ull ^ (hi + 0x632be59bd9b4e019ull));
    }
  };
  using Map = std::unordered_map<Key, mpz_class, KeyHash>;

  static int x_var(int i) { return i; }
  static int y_var(int i) { return 8 + i; }

  static int exponent(Key k, int var) { return static_cast<int>((k >> (8 * var)) & 0xff); }
  static Key unit_key(int var, int e) {
    if (e < 0 || e > kMaxExponent) throw LimitError("exponent outside the packed monomial range");
    return static_cast<Key>(e) << (8 * var);
  }

  IntPoly() = default;

  static IntPoly constant(const mpz_class& c) {
    IntPoly r;
    if (c != 0) r.terms_.emplace(0, c);
    return r;
  }
  static IntPoly variable(int var, int e = 1) {
    IntPoly r;
    r.terms_.emplace(unit_key(var, e), 1);
    return r;
  }

  const Map& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  bool operator==(const IntPoly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (const auto& [k, c] : terms_) {
      auto it = o.terms_.find(k);
      if (it == o.terms_.end() || it->second != c) return false;
    }
    return true;
  }

  IntPoly& operator+=(const IntPoly& o) { return accumulate(o, 1); }
  IntPoly& operator-=(const IntPoly& o) { return accumulate(o, -1); }

  IntPoly& scale(const mpz_class& c) {
    if (c == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, v] : terms_) v *= c;
    return *this;
  }

  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    IntPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    check_no_overflow(a, b);
    r.terms_.reserve(std::max(a.size(), b.size()) * 2);
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        auto& acc = r.terms_[ka + kb];
        mpz_addmul(acc.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
      }
    }
    std::erase_if(r.terms_, [](const auto& kv) { return kv.second == 0; });
    return r;
  }

  IntPoly pow(unsigned k) const {
    IntPoly result = constant(1);
    IntPoly base = *this;
    while (k > 0) {
      if (k & 1u) result = result * base;
      k >>= 1;
      if (k > 0) base = base * base;
    }
    return result;
  }

  /// Exact division by d; returns false (leaving *this unspecified) on a remainder.
  bool divide_exact(const mpz_class& d) {
    for (auto& [k, v] : terms_) {
      if (!mpz_divisible_p(v.get_mpz_t(), d.get_mpz_t())) return false;
      mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), d.get_mpz_t());
    }
    return true;
  }

  /// Largest variable index that occurs, or -1 for constants.
  int max_var_index(int var_base, int count) const {
    int best = -1;
    for (const auto& [k, c] : terms_)
      for (int i = 0; i < count; ++i)
        if (exponent(k, var_base + i) != 0) best = std::max(best, i);
    return best;
  }

  /// Terms sorted by descending key, for deterministic output.
  std::vector<std::pair<Key, mpz_class>> sorted_terms() const {
    std::vector<std::pair<Key, mpz_class>> v(terms_.begin(), terms_.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    return v;
  }

  static std::string var_name(int var) {
    return (var < 8 ? "X" : "Y") + std::to_string(var % 8);
  }

  std::string format() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : sorted_terms()) {
      std::string mono;
      for (int v = 0; v < kMaxVars; ++v) {
        int e = exponent(k, v);
        if (e == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += var_name(v);
        if (e != 1) mono += "^" + std::to_string(e);
      }
      mpz_class a = abs(c);
      std::string body;
      if (mono.empty()) body = a.get_str();
      else if (a == 1) body = mono;
      else body = a.get_str() + "*" + mono;
      if (first) out += (c < 0 ? "-" : "") + body;
      else out += (c < 0 ? " - " : " + ") + body;
      first = false;
    }
    return out;
  }

  /// Parses the output of format(): signed sums of `c*X0^a*Y1^b` terms.
  static IntPoly parse(std::string_view text) {
    IntPoly r;
    std::string s;
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw ParseError("empty integer polynomial");
    if (s == "0") return r;
    std::size_t pos = 0;
    auto fail = [&](const char* why) { throw ParseError(std::string(why) + " in '" + std::string(text) + "'"); };
    auto read_uint = [&]() {
      std::size_t st = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (st == pos) fail("expected digits");
      return s.substr(st, pos - st);
    };
    while (pos < s.size()) {
      int sign = 1;
      if (s[pos] == '+' || s[pos] == '-') {
        sign = s[pos] == '-' ? -1 : 1;
        ++pos;
      } else if (pos != 0) {
        fail("expected sign");
      }
      mpz_class coeff = 1;
      Key key = 0;
      bool have_factor = false;
      while (pos < s.size() && s[pos] != '+' && s[pos] != '-') {
        if (have_factor) {
          if (s[pos] != '*') fail("expected '*'");
          ++pos;
        }
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
          coeff *= mpz_class(read_uint());
        } else if (pos < s.size() && (s[pos] == 'X' || s[pos] == 'Y')) {
          int base = s[pos] == 'X' ? 0 : 8;
          ++pos;
          int idx = std::stoi(read_uint());
          if (idx > 7) fail("variable index out of range");
          int e = 1;
          if (pos < s.size() && s[pos] == '^') {
            ++pos;
            e = std::stoi(read_uint());
          }
          int var = base + idx;
          int cur = exponent(key, var);
          if (cur + e > kMaxExponent) fail("exponent too large");
          key += static_cast<Key>(e) << (8 * var);
        } else {
          fail("unexpected character");
        }
        have_factor = true;
      }
      if (!have_factor) fail("empty term");
      coeff *= sign;
      auto [it, inserted] = r.terms_.try_emplace(key, coeff);
      if (!inserted) it->second += coeff;
    }
    std::erase_if(r.terms_, [](const auto& kv) { return kv.second == 0; });
    return r;
  }

 private:
  std::array<int, kMaxVars> max_exponents() const {
    std::array<int, kMaxVars> m{};
    for (const auto& [k, c] : terms_)
      for (int v = 0; v < kMaxVars; ++v) m[v] = std::max(m[v], exponent(k, v));
    return m;
  }

  // Per-byte sums must stay below 256 or keys would carry into the next variable.
  static void check_no_overflow(const IntPoly& a, const IntPoly& b) {
    auto ma = a.max_exponents();
    auto mb = b.max_exponents();
    for (int v = 0; v < kMaxVars; ++v)
      if (ma[v] + mb[v] > kMaxExponent) throw LimitError("monomial exponent overflow");
  }

  IntPoly& accumulate(const IntPoly& o, int sign) {
    for (const auto& [k, c] : o.terms_) {
      auto [it, inserted] = terms_.try_emplace(k, sign > 0 ? c : mpz_class(-c));
      if (!inserted) {
        if (sign > 0) it->second += c;
        else it->second -= c;
        if (it->second == 0) terms_.erase(it);
      }
    }
    return *this;
  }

  Map terms_;
};

}  // namespace wittgrass
