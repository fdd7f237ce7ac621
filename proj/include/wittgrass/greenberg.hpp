#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wittgrass/errors.hpp"
#include "wittgrass/matrix.hpp"
#include "wittgrass/polynomial.hpp"
#include "wittgrass/witt.hpp"

namespace wittgrass {

/// Polynomial in T_1..T_d with coefficients in W_N(A).
template <class Ring>
struct WittPolynomial {
  int arity = 0;
  std::map<std::vector<int>, WittVector<Ring>> terms;  // zero coefficients never stored
  bool operator==(const WittPolynomial&) const = default;
};

/// Arithmetic on WittPolynomial over a fixed W_N(A) and arity.
template <class Ring>
class WittPolyAlgebra {
 public:
  using Poly = WittPolynomial<Ring>;

  WittPolyAlgebra(WittRing<Ring> coefficients, int arity) : W_(std::move(coefficients)), d_(arity) {}

  const WittRing<Ring>& coefficients() const { return W_; }
  int arity() const { return d_; }

  Poly zero() const { return Poly{d_, {}}; }
  Poly constant(const WittVector<Ring>& c) const {
    Poly r = zero();
    if (!W_.is_zero(c)) r.terms.emplace(std::vector<int>(d_, 0), c);
    return r;
  }
  Poly from_int(long long k) const { return constant(W_.from_int(k)); }
  Poly one() const { return from_int(1); }
  /// T_l for 1 <= l <= d.
  Poly variable(int l) const {
    if (l < 1 || l > d_) throw InvalidArgument("variable T" + std::to_string(l) + " outside arity " + std::to_string(d_));
    std::vector<int> e(d_, 0);
    e[l - 1] = 1;
    Poly r = zero();
    r.terms.emplace(std::move(e), W_.one());
    return r;
  }

  Poly add(const Poly& a, const Poly& b) const {
    Poly r = a;
    for (const auto& [e, c] : b.terms) accumulate(r, e, c);
    return r;
  }
  Poly neg(const Poly& a) const {
    Poly r = a;
    for (auto& [e, c] : r.terms) c = W_.neg(c);
    return r;
  }
  Poly sub(const Poly& a, const Poly& b) const { return add(a, neg(b)); }
  Poly mul(const Poly& a, const Poly& b) const {
    Poly r = zero();
    for (const auto& [ea, ca] : a.terms)
      for (const auto& [eb, cb] : b.terms) {
        std::vector<int> e(d_);
        for (int i = 0; i < d_; ++i) e[i] = ea[i] + eb[i];
        accumulate(r, e, W_.mul(ca, cb));
      }
    return r;
  }
  Poly pow(const Poly& a, unsigned k) const {
    Poly r = one(), base = a;
    while (k) {
      if (k & 1u) r = mul(r, base);
      k >>= 1;
      if (k) base = mul(base, base);
    }
    return r;
  }

  /// f(images_1, ..., images_d); images live in `target` (possibly another arity).
  Poly substitute(const Poly& f, const std::vector<Poly>& images, const WittPolyAlgebra& target) const {
    if (static_cast<int>(images.size()) != d_) throw LengthMismatch("substitution needs one image per variable");
    Poly r = target.zero();
    for (const auto& [e, c] : f.terms) {
      Poly m = target.constant(c);
      for (int i = 0; i < d_; ++i)
        if (e[i]) m = target.mul(m, target.pow(images[i], e[i]));
      r = target.add(r, m);
    }
    return r;
  }

  /// f(a_1, ..., a_d) in W_N(A).
  WittVector<Ring> evaluate(const Poly& f, const std::vector<WittVector<Ring>>& point) const {
    if (static_cast<int>(point.size()) != d_) throw LengthMismatch("point has the wrong arity");
    auto acc = W_.zero();
    for (const auto& [e, c] : f.terms) {
      auto m = c;
      for (int i = 0; i < d_; ++i)
        if (e[i]) m = W_.mul(m, W_.pow(point[i], e[i]));
      acc = W_.add(acc, m);
    }
    return acc;
  }

  std::string format(const Poly& f) const {
    if (f.terms.empty()) return "0";
    std::string out;
    for (auto it = f.terms.rbegin(); it != f.terms.rend(); ++it) {
      if (!out.empty()) out += " + ";
      out += "<" + W_.format(it->second).substr(1);
      out.back() = '>';
      for (int i = 0; i < d_; ++i) {
        if (it->first[i] == 0) continue;
        out += "*T" + std::to_string(i + 1);
        if (it->first[i] != 1) out += "^" + std::to_string(it->first[i]);
      }
    }
    return out;
  }

  /// Grammar: sums/products/powers of integers, `p`, `T<l>`, Teichmueller
  /// constants `[c]`, Witt constants `<a0,a1,...>` and parentheses.
  Poly parse(std::string_view text) const {
    Parser ps{*this, std::string(text), 0};
    Poly r = ps.expr();
    ps.skip();
    if (ps.pos != ps.s.size()) ps.fail("unexpected trailing input");
    return r;
  }

  /// Several polynomials separated by ';'.
  std::vector<Poly> parse_list(std::string_view text) const {
    std::vector<Poly> out;
    for (const auto& part : detail::split_top_level(text, ';')) {
      auto t = detail::trim(part);
      if (!t.empty()) out.push_back(parse(t));
    }
    if (out.empty()) throw ParseError("empty polynomial list");
    return out;
  }

 private:
  void accumulate(Poly& r, const std::vector<int>& e, const WittVector<Ring>& c) const {
    auto it = r.terms.find(e);
    if (it == r.terms.end()) {
      if (!W_.is_zero(c)) r.terms.emplace(e, c);
      return;
    }
    it->second = W_.add(it->second, c);
    if (W_.is_zero(it->second)) r.terms.erase(it);
  }

  struct Parser {
    const WittPolyAlgebra& A;
    std::string s;
    std::size_t pos;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg + " in '" + s + "'"); }
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
      std::size_t st = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (st == pos) fail("expected an integer");
      return std::stoll(s.substr(st, pos - st));
    }
    std::string until(char close) {
      std::size_t st = pos;
      int depth = 0;
      while (pos < s.size() && !(s[pos] == close && depth == 0)) {
        if (s[pos] == '(' || s[pos] == '[') ++depth;
        if (s[pos] == ')' || s[pos] == ']') --depth;
        ++pos;
      }
      if (pos == s.size()) fail(std::string("missing '") + close + "'");
      return s.substr(st, pos++ - st);
    }
    Poly expr() {
      bool negative = accept('-');
      if (!negative) accept('+');
      Poly acc = term();
      if (negative) acc = A.neg(acc);
      while (true) {
        if (accept('+')) acc = A.add(acc, term());
        else if (accept('-')) acc = A.sub(acc, term());
        else return acc;
      }
    }
    Poly term() {
      Poly acc = factor();
      while (accept('*')) acc = A.mul(acc, factor());
      return acc;
    }
    Poly factor() {
      Poly b = base();
      if (accept('^')) b = A.pow(b, static_cast<unsigned>(integer()));
      return b;
    }
    Poly base() {
      skip();
      if (pos >= s.size()) fail("unexpected end");
      char c = s[pos];
      const auto& W = A.coefficients();
      if (c == '(') {
        ++pos;
        Poly r = expr();
        if (!accept(')')) fail("missing ')'");
        return r;
      }
      if (c == '[') {
        ++pos;
        return A.constant(W.teichmuller(W.scalars().parse(until(']'))));
      }
      if (c == '<') {
        ++pos;
        auto v = W.parse("(" + until('>') + ")");
        return A.constant(W.pad(v, W.length()));
      }
      if (std::isdigit(static_cast<unsigned char>(c))) return A.from_int(integer());
      if (c == 'p') {
        ++pos;
        return A.from_int(W.prime());
      }
      if (c == 'T') {
        ++pos;
        return A.variable(static_cast<int>(integer()));
      }
      fail("unexpected '" + std::string(1, c) + "'");
    }
  };

  WittRing<Ring> W_;
  int d_;
};

/// Coordinate-wise polynomial map: comps[i][j] is the j-th Witt component of
/// output i, a polynomial in base[l,m] (1 <= l <= d, 0 <= m < N) over the scalars.
struct RealizedMap {
  PolyRing ring;
  int d = 0, e = 0, N = 0;
  std::string base = "x";
  std::vector<std::vector<Polynomial>> comps;

  std::size_t coord_index(int l, int m) const { return static_cast<std::size_t>((l - 1) * N + m); }

  /// Applies the map to a point of W_N(F_q)^d given as d coordinate vectors.
  std::vector<std::vector<FiniteField::Elem>> apply(const std::vector<std::vector<FiniteField::Elem>>& point) const {
    if (static_cast<int>(point.size()) != d) throw LengthMismatch("point has the wrong arity");
    if (static_cast<int>(ring.num_vars()) != d * N) throw InvalidArgument("map has non-coordinate variables");
    std::vector<FiniteField::Elem> flat;
    for (const auto& v : point) {
      if (static_cast<int>(v.size()) != N) throw LengthMismatch("point coordinate has the wrong length");
      flat.insert(flat.end(), v.begin(), v.end());
    }
    std::vector<std::vector<FiniteField::Elem>> out(e, std::vector<FiniteField::Elem>(N));
    for (int i = 0; i < e; ++i)
      for (int j = 0; j < N; ++j) out[i][j] = ring.evaluate(comps[i][j], flat);
    return out;
  }

  /// Comorphism images: variable base[i,j] of the target maps to comps[i-1][j].
  std::vector<Polynomial> images() const {
    std::vector<Polynomial> out;
    for (const auto& row : comps)
      for (const auto& c : row) out.push_back(c);
    return out;
  }

  /// Lines `COMP i j: <poly>`.
  std::string format_lines() const {
    std::string out;
    for (int i = 0; i < e; ++i)
      for (int j = 0; j < N; ++j)
        out += "COMP " + std::to_string(i + 1) + " " + std::to_string(j) + ": " + ring.format(comps[i][j]) + "\n";
    return out;
  }
  std::string format_text() const {
    std::string out;
    for (int i = 0; i < e; ++i)
      for (int j = 0; j < N; ++j)
        out += "q[" + std::to_string(i + 1) + "," + std::to_string(j) + "] = " + ring.format(comps[i][j]) + "\n";
    return out;
  }
};

/// Ideal generated by all Witt components of some Witt-polynomial generators.
struct RealizedIdeal {
  PolyRing ring;
  int n = 0, N = 0;
  std::vector<Polynomial> gens;
};

namespace greenberg {

/// Polynomial ring over the scalars' field with coordinates base[l,m] followed
/// by the scalar ring's own variables (if any).
template <class Ring>
PolyRing coordinate_ring(const Ring& scalars, int d, int N, std::string_view base = "x") {
  if constexpr (std::is_same_v<Ring, PolyRing>) {
    auto vars = coordinate_variables(base, d, N, scalars.characteristic());
    for (const auto& v : scalars.vars()) vars.push_back(v);
    return PolyRing(scalars.field(), std::move(vars));
  } else {
    return PolyRing(scalars, coordinate_variables(base, d, N, scalars.characteristic()));
  }
}

template <class Ring>
Polynomial embed_scalar(const Ring& scalars, const typename Ring::Elem& c, const PolyRing& target) {
  if constexpr (std::is_same_v<Ring, PolyRing>) return scalars.rename_into(c, target);
  else return target.constant(c);
}

template <class Ring>
WittVector<PolyRing> embed_vector(const Ring& scalars, const WittVector<Ring>& v, const PolyRing& target) {
  WittVector<PolyRing> r;
  for (const auto& c : v.coords) r.coords.push_back(embed_scalar(scalars, c, target));
  return r;
}

/// Generic Witt vectors (base[l,0], ..., base[l,N-1]) for l = 1..d.
inline std::vector<WittVector<PolyRing>> generic_vectors(const PolyRing& ring, int d, int N, std::string_view base = "x") {
  std::vector<WittVector<PolyRing>> out;
  for (int l = 1; l <= d; ++l) {
    WittVector<PolyRing> v;
    for (int m = 0; m < N; ++m) v.coords.push_back(ring.variable(coord_name(base, l, m)));
    out.push_back(std::move(v));
  }
  return out;
}

/// Witt components of each P_i evaluated at generic vectors, in W_N(k[x_{l,m}]).
template <class Ring>
RealizedMap realize_poly_map(const std::vector<WittPolynomial<Ring>>& P, const WittRing<Ring>& W, std::string_view base = "x") {
  if (P.empty()) throw InvalidArgument("no polynomials to realize");
  const int d = P.front().arity;
  const int N = W.length();
  for (const auto& f : P) {
    if (f.arity != d) throw LengthMismatch("polynomials have different arities");
    for (const auto& [e, c] : f.terms)
      if (c.length() != N) throw LengthMismatch("coefficient length differs from the Witt length");
  }
  RealizedMap out;
  out.ring = coordinate_ring(W.scalars(), d, N, base);
  out.d = d;
  out.e = static_cast<int>(P.size());
  out.N = N;
  out.base = std::string(base);
  WittRing<PolyRing> big(out.ring, N);
  auto gens = generic_vectors(out.ring, d, N, base);
  std::vector<std::map<int, WittVector<PolyRing>>> powers(d);
  auto power = [&](int l, int k) -> const WittVector<PolyRing>& {
    auto it = powers[l].find(k);
    if (it != powers[l].end()) return it->second;
    return powers[l].emplace(k, big.pow(gens[l], k)).first->second;
  };
  for (const auto& f : P) {
    auto acc = big.zero();
    for (const auto& [e, c] : f.terms) {
      auto m = embed_vector(W.scalars(), c, out.ring);
      for (int l = 0; l < d; ++l)
        if (e[l]) m = big.mul(m, power(l, e[l]));
      acc = big.add(acc, m);
    }
    out.comps.push_back(acc.coords);
  }
  return out;
}

/// All nonzero Witt components of the generators.
template <class Ring>
RealizedIdeal realize_ideal(const std::vector<WittPolynomial<Ring>>& gens, const WittRing<Ring>& W, std::string_view base = "x") {
  auto m = realize_poly_map(gens, W, base);
  RealizedIdeal I;
  I.ring = m.ring;
  I.n = m.d;
  I.N = m.N;
  for (const auto& row : m.comps)
    for (const auto& c : row)
      if (!c.is_zero()) I.gens.push_back(c);
  return I;
}

/// Point map (a_0, ..., a_{N-1}) -> (0, a_0^p, ..., a_{N-2}^p) on W_N^n, i.e.
/// x_{i,j} -> x_{i,j-1}^p and x_{i,0} -> 0.
template <class Ring>
RealizedMap localized_transition(const Ring& scalars, int n, int N, std::string_view base = "x") {
  if (!scalars.is_perfect()) throw NotPerfect("transition maps need a perfect scalar ring");
  RealizedMap out;
  out.ring = coordinate_ring(scalars, n, N, base);
  out.d = out.e = n;
  out.N = N;
  out.base = std::string(base);
  const int p = static_cast<int>(scalars.characteristic());
  for (int i = 1; i <= n; ++i) {
    std::vector<Polynomial> row;
    for (int j = 0; j < N; ++j)
      row.push_back(j == 0 ? out.ring.zero() : out.ring.variable(coord_name(base, i, j - 1), p));
    out.comps.push_back(std::move(row));
  }
  return out;
}

/// Coordinates of v -> g v on W_N^n: x_{i,j} -> j-th component of (g x)_i.
template <class Ring>
RealizedMap realize_action(const Matrix<WittVector<Ring>>& g, const WittRing<Ring>& W, std::string_view base = "x") {
  const int n = static_cast<int>(g.size());
  for (const auto& row : g)
    if (static_cast<int>(row.size()) != n) throw LengthMismatch("action matrix must be square");
  if (!W.is_unit(mat_det(W, g))) throw NonUnit("action matrix is not invertible over W_N");
  const int N = W.length();
  RealizedMap out;
  out.ring = coordinate_ring(W.scalars(), n, N, base);
  out.d = out.e = n;
  out.N = N;
  out.base = std::string(base);
  WittRing<PolyRing> big(out.ring, N);
  auto x = generic_vectors(out.ring, n, N, base);
  for (int i = 0; i < n; ++i) {
    auto acc = big.zero();
    for (int k = 0; k < n; ++k) {
      if (W.is_zero(g[i][k])) continue;
      acc = big.add(acc, big.mul(embed_vector(W.scalars(), g[i][k], out.ring), x[k]));
    }
    out.comps.push_back(acc.coords);
  }
  return out;
}

/// Point-map composition g o f (f applied first), in f's coordinate ring.
inline RealizedMap compose(const RealizedMap& g, const RealizedMap& f) {
  if (g.d != f.e || g.N != f.N) throw LengthMismatch("maps do not compose");
  std::vector<Polynomial> images;
  for (std::size_t v = 0; v < g.ring.num_vars(); ++v) {
    if (static_cast<int>(v) < g.d * g.N) images.push_back(f.comps[v / g.N][v % g.N]);
    else images.push_back(f.ring.variable(g.ring.var(v).name));
  }
  RealizedMap out;
  out.ring = f.ring;
  out.d = f.d;
  out.e = g.e;
  out.N = f.N;
  out.base = f.base;
  for (const auto& row : g.comps) {
    std::vector<Polynomial> r;
    for (const auto& c : row) r.push_back(g.ring.substitute(c, images, f.ring));
    out.comps.push_back(std::move(r));
  }
  return out;
}

}  // namespace greenberg

}  // namespace wittgrass
