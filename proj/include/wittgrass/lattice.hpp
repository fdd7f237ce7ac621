#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "wittgrass/errors.hpp"
#include "wittgrass/finite_field.hpp"
#include "wittgrass/matrix.hpp"
#include "wittgrass/padic.hpp"
#include "wittgrass/witt.hpp"

namespace wittgrass {

/// Integer n-vector; dominant when weakly decreasing. SL_n cocharacters sum to 0.
struct Cocharacter {
  std::vector<int> v;

  int size() const { return static_cast<int>(v.size()); }
  int operator[](int i) const { return v[i]; }
  bool operator==(const Cocharacter&) const = default;
  auto operator<=>(const Cocharacter&) const = default;

  long sum() const { return std::accumulate(v.begin(), v.end(), 0L); }
  bool is_dominant() const { return std::is_sorted(v.begin(), v.end(), std::greater<int>()); }
  /// lambda~_i = lambda_i - lambda_n.
  std::vector<int> tilde() const {
    std::vector<int> t(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) t[i] = v[i] - v.back();
    return t;
  }
  /// Lambda = sum lambda~_i.
  long big_lambda() const {
    auto t = tilde();
    return std::accumulate(t.begin(), t.end(), 0L);
  }

  std::string format() const {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out + ")";
  }
  /// Accepts `1,-1` or `(1,-1)`.
  static Cocharacter parse(std::string_view text) {
    std::string s = detail::trim(text);
    if (!s.empty() && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    Cocharacter c;
    for (const auto& part : detail::split_top_level(s, ',')) {
      auto t = detail::trim(part);
      try {
        std::size_t used = 0;
        c.v.push_back(std::stoi(t, &used));
        if (used != t.size()) throw ParseError("bad cocharacter entry '" + t + "'");
      } catch (const std::logic_error&) {
        throw ParseError("bad cocharacter entry '" + t + "'");
      }
    }
    return c;
  }
};

/// Dominance order: all partial sums of lambda are <= those of mu.
inline bool bruhat_leq(const Cocharacter& lambda, const Cocharacter& mu) {
  if (!lambda.is_dominant()) throw NotDominant(lambda.format() + " is not dominant");
  if (!mu.is_dominant()) throw NotDominant(mu.format() + " is not dominant");
  if (lambda.size() != mu.size() || lambda.sum() != mu.sum())
    throw InvalidArgument("cocharacters " + lambda.format() + " and " + mu.format() + " are not comparable");
  long a = 0, b = 0;
  for (int i = 0; i < lambda.size(); ++i) {
    a += lambda[i];
    b += mu[i];
    if (a > b) return false;
  }
  return true;
}

/// All dominant mu <= lambda (same size and sum).
inline std::vector<Cocharacter> dominant_below(const Cocharacter& lambda) {
  std::vector<Cocharacter> out;
  const int n = lambda.size();
  std::vector<int> cur(n);
  auto rec = [&](auto&& self, int i, int prev, long remaining) -> void {
    if (i == n - 1) {
      if (remaining <= prev) {
        cur[i] = static_cast<int>(remaining);
        Cocharacter c{cur};
        if (bruhat_leq(c, lambda)) out.push_back(c);
      }
      return;
    }
    for (int x = std::min(prev, lambda[0]); x >= lambda[n - 1]; --x) {
      cur[i] = x;
      self(self, i + 1, x, remaining - x);
    }
  };
  rec(rec, 0, lambda[0], lambda.sum());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

template <class Ring>
using PadicMatrix = Matrix<PadicNumber<Ring>>;

template <class Ring>
struct SmithForm {
  PadicMatrix<Ring> U;
  std::vector<long> mu;  // decreasing
  PadicMatrix<Ring> V;
};

namespace lattice {

template <class Ring>
PadicMatrix<Ring> diagonal_powers(const PadicField<Ring>& K, const std::vector<long>& exps) {
  const int n = static_cast<int>(exps.size());
  PadicMatrix<Ring> D(n, std::vector<PadicNumber<Ring>>(n, K.exact_zero()));
  for (int i = 0; i < n; ++i) D[i][i] = K.power_of_p(exps[i]);
  return D;
}

/// A = U diag(p^mu) V with U, V invertible over W and mu decreasing.
/// Pivots are entries of minimal valuation, ties broken in row-major order.
template <class Ring>
SmithForm<Ring> smith_normal_form(const PadicField<Ring>& K, const PadicMatrix<Ring>& A) {
  const int n = static_cast<int>(A.size());
  for (const auto& row : A)
    if (static_cast<int>(row.size()) != n) throw LengthMismatch("Smith normal form needs a square matrix");
  auto M = A;
  auto U = mat_identity(K, n);
  auto V = mat_identity(K, n);
  std::vector<long> mu(n);
  for (int k = 0; k < n; ++k) {
    int pi = -1, pj = -1;
    for (int i = k; i < n; ++i)
      for (int j = k; j < n; ++j)
        if (!M[i][j].is_zero() && (pi < 0 || M[i][j].valuation < M[pi][pj].valuation)) {
          pi = i;
          pj = j;
        }
    if (pi < 0) throw PrecisionLoss("matrix is singular at the working precision");
    const long v = M[pi][pj].valuation;
    for (int i = k; i < n; ++i)
      for (int j = k; j < n; ++j)
        if (M[i][j].is_zero() && M[i][j].valuation < v)
          throw PrecisionLoss("entry known only modulo p^" + std::to_string(M[i][j].valuation) +
                              " cannot be separated from a pivot of valuation " + std::to_string(v));
    // Permutations are their own inverses: rows of M <-> columns of U, columns of M <-> rows of V.
    if (pi != k) {
      std::swap(M[pi], M[k]);
      for (auto& row : U) std::swap(row[pi], row[k]);
    }
    if (pj != k) {
      for (auto& row : M) std::swap(row[pj], row[k]);
      std::swap(V[pj], V[k]);
    }
    const auto pivot_inv = K.inverse(M[k][k]);
    for (int r = k + 1; r < n; ++r) {
      if (M[r][k].is_exact_zero()) continue;
      auto f = K.mul(M[r][k], pivot_inv);
      for (int c = k; c < n; ++c) M[r][c] = K.sub(M[r][c], K.mul(f, M[k][c]));
      for (int i = 0; i < n; ++i) U[i][k] = K.add(U[i][k], K.mul(f, U[i][r]));
    }
    for (int c = k + 1; c < n; ++c) {
      if (M[k][c].is_exact_zero()) continue;
      auto g = K.mul(pivot_inv, M[k][c]);
      for (int r = k; r < n; ++r) M[r][c] = K.sub(M[r][c], K.mul(M[r][k], g));
      for (int j = 0; j < n; ++j) V[k][j] = K.add(V[k][j], K.mul(g, V[c][j]));
    }
    // Absorb the unit part of the pivot into U.
    PadicNumber<Ring> unit{0, M[k][k].mantissa};
    for (int i = 0; i < n; ++i) U[i][k] = K.mul(U[i][k], unit);
    mu[k] = v;
  }
  // Pivots come out in increasing valuation; reverse to make mu decreasing.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return mu[a] > mu[b]; });
  SmithForm<Ring> out;
  out.U.assign(n, std::vector<PadicNumber<Ring>>(n));
  out.V.assign(n, {});
  for (int t = 0; t < n; ++t) {
    out.mu.push_back(mu[order[t]]);
    for (int i = 0; i < n; ++i) out.U[i][t] = U[i][order[t]];
    out.V[t] = V[order[t]];
  }
  return out;
}

template <class Ring>
void require_det_one(const PadicField<Ring>& K, const PadicMatrix<Ring>& g) {
  auto d = mat_det(K, g);
  if (!K.equal(d, K.one())) throw InvalidArgument("determinant " + K.format(d) + " is not 1 at the working precision");
}

/// The dominant lambda with g W^n in the cell of lambda.
template <class Ring>
Cocharacter classify_cell(const PadicField<Ring>& K, const PadicMatrix<Ring>& g) {
  require_det_one(K, g);
  auto snf = smith_normal_form(K, g);
  Cocharacter c;
  for (long m : snf.mu) c.v.push_back(static_cast<int>(m));
  return c;
}

/// True iff g and g^{-1} are integral.
template <class Ring>
bool stabilizes_standard(const PadicField<Ring>& K, const PadicMatrix<Ring>& g) {
  require_det_one(K, g);
  auto integral = [](const PadicMatrix<Ring>& M) {
    for (const auto& row : M)
      for (const auto& x : row) {
        if (x.is_zero() && x.valuation < 0) throw PrecisionLoss("entry only known modulo p^" + std::to_string(x.valuation));
        if (!x.is_zero() && x.valuation < 0) return false;
      }
    return true;
  };
  return integral(g) && integral(mat_adjugate(K, g));
}

/// Rescales a basis of determinant valuation Lambda by p^{-Lambda/n} and
/// divides the first column by the resulting unit determinant.
template <class Ring>
PadicMatrix<Ring> normalize_basis(const PadicField<Ring>& K, PadicMatrix<Ring> g, long Lambda) {
  const int n = static_cast<int>(g.size());
  if (n == 0 || Lambda % n != 0) throw InvalidArgument("Lambda must be a multiple of the rank");
  auto d = mat_det(K, g);
  if (d.is_zero() || d.valuation != Lambda) {
    std::string got = d.is_zero() ? ">= " + std::to_string(d.valuation) : std::to_string(d.valuation);
    throw DetValuationMismatch("determinant valuation " + got + ", expected " + std::to_string(Lambda));
  }
  const long shift = -Lambda / n;
  for (auto& row : g)
    for (auto& x : row) x = K.shift(x, shift);
  auto inv = K.inverse(mat_det(K, g));
  for (int i = 0; i < n; ++i) g[i][0] = K.mul(g[i][0], inv);
  return g;
}

/// Embeds a matrix over W_N (zero-padded to the working precision), rescales
/// by p^{-Lambda/n} so the determinant becomes a unit and divides the first
/// column by that unit. The result has determinant exactly 1 at precision.
template <class Ring>
PadicMatrix<Ring> normalize_basis(const PadicField<Ring>& K, const Matrix<WittVector<Ring>>& M, long Lambda) {
  const int n = static_cast<int>(M.size());
  if (n == 0 || Lambda % n != 0) throw InvalidArgument("Lambda must be a multiple of the rank");
  const int N = M[0][0].length();
  // Determinant valuation is decided at the input precision N.
  PadicMatrix<Ring> raw(n), padded(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      raw[i].push_back(K.make(0, M[i][j]));
      padded[i].push_back(K.make(0, K.witt().pad(M[i][j], K.length())));
    }
  auto d = mat_det(K, raw);
  if (d.is_zero() || d.valuation != Lambda) {
    std::string got = d.is_zero() ? ">= " + std::to_string(d.valuation) : std::to_string(d.valuation);
    throw DetValuationMismatch("determinant valuation " + got + " (at precision " + std::to_string(N) +
                               "), expected " + std::to_string(Lambda));
  }
  return normalize_basis(K, std::move(padded), Lambda);
}

/// The matrices of the degeneration identity A * diag(p^e, p^d) * C = R.
template <class Ring>
struct DegenerationFamily {
  PadicMatrix<Ring> A, D, C, rhs, product;
  bool verified = false;
};

/// Over W(F_p[t, t^{-1}]) with [t] the Teichmueller lift of t:
/// A = [[0, [t]], [-[t^{-1}], p[t^{-1}]]], C = [[[t^{-1}], 0], [[t^{-1}] p^{e-d-1}, [t]]],
/// R = [[p^{e-1}, [t^2] p^d], [0, p^{d+1}]].
inline DegenerationFamily<PolyRing> degeneration_family(const PadicField<PolyRing>& K, int e, int d) {
  if (e <= d) throw InvalidArgument("degeneration family needs e > d");
  if (K.length() < e - d + 2)
    throw PrecisionLoss("degeneration family needs Witt length >= e-d+2 = " + std::to_string(e - d + 2));
  const auto& L = K.scalars();
  auto ti = L.index_of("t");
  if (!ti || !L.var(*ti).laurent) throw InvalidArgument("scalar ring needs a Laurent variable t");
  auto tau = [&](int k, long v) { return K.teichmuller(L.variable(*ti, k), v); };
  auto zero = K.exact_zero();
  DegenerationFamily<PolyRing> F;
  F.A = {{zero, tau(1, 0)}, {K.neg(tau(-1, 0)), tau(-1, 1)}};
  F.D = diagonal_powers(K, {e, d});
  F.C = {{tau(-1, 0), zero}, {tau(-1, e - d - 1), tau(1, 0)}};
  F.rhs = {{K.power_of_p(e - 1), tau(2, d)}, {zero, K.power_of_p(d + 1)}};
  F.product = mat_mul(K, mat_mul(K, F.A, F.D), F.C);
  F.verified = mat_equal(K, F.product, F.rhs);
  return F;
}

// ---- lattices in a window ------------------------------------------------

/// A special or non-special lattice L with p^w W^n <= L <= p^{-w} W^n, stored
/// through the canonical column echelon form H of p^w L / p^{2w} W^n over
/// W_{2w}: H is lower triangular, H[i][i] = p^{diag[i]} (diag[i] = 2w means
/// the column is zero mod p^{2w}), and entries left of the diagonal in row i
/// have Witt components >= diag[i] equal to zero.
struct Lattice {
  int n = 0;
  int window = 0;
  std::vector<int> diag;
  Matrix<std::vector<FiniteField::Elem>> H;  // H[i][j] as Witt coordinates of length 2w

  bool operator==(const Lattice&) const = default;
  auto operator<=>(const Lattice&) const = default;

  bool is_special() const { return std::accumulate(diag.begin(), diag.end(), 0) == n * window; }

  std::string format(const FiniteField& F) const {
    std::string out = "{";
    for (int j = 0; j < n; ++j) {
      out += j ? ", [" : "[";
      for (int i = 0; i < n; ++i) {
        if (i) out += ", ";
        out += "(";
        for (std::size_t k = 0; k < H[i][j].size(); ++k) out += (k ? "," : "") + F.format(H[i][j][k]);
        out += ")";
      }
      out += "]";
    }
    return out + "} window " + std::to_string(window);
  }
};

/// Lower-triangular generators of a submodule of W_m(F_q)^n: column j has
/// entry exactly p^{diag[j]} in row j (diag[j] = m: zero column) and zeros above.
struct Echelon {
  std::vector<int> diag;
  std::vector<std::vector<WittVector<FiniteField>>> columns;
};

/// Canonical echelon form of the submodule of W_m^n spanned by `columns`.
inline Echelon column_echelon(const WittRing<FiniteField>& Wm, int n, std::vector<std::vector<WittVector<FiniteField>>> columns) {
  const int m = Wm.length();
  const auto& F = Wm.scalars();
  auto valuation = [&](const WittVector<FiniteField>& x) {
    for (int i = 0; i < m; ++i)
      if (x.coords[i] != 0) return i;
    return m;
  };
  // x = p^v * u: returns u as a length-m vector (components beyond m - v are set to zero).
  auto unit_part = [&](const WittVector<FiniteField>& x, int v) {
    WittVector<FiniteField> u = Wm.zero(m);
    for (int i = v; i < m; ++i) {
      auto c = x.coords[i];
      for (int k = 0; k < v; ++k) c = F.pth_root(c);
      u.coords[i - v] = c;
    }
    return u;
  };
  Echelon L;
  L.diag.assign(n, m);
  std::vector<std::vector<WittVector<FiniteField>>> basis(n, std::vector<WittVector<FiniteField>>(n, Wm.zero(m)));
  for (int row = 0; row < n; ++row) {
    int best = -1, best_v = m;
    for (int c = 0; c < static_cast<int>(columns.size()); ++c) {
      int v = valuation(columns[c][row]);
      if (v < best_v) {
        best_v = v;
        best = c;
      }
    }
    if (best < 0) continue;  // row contributes p^m = 0; column stays zero
    auto pivot = columns[best];
    columns.erase(columns.begin() + best);
    // Normalize the pivot entry to exactly p^v.
    auto u_inv = Wm.inverse(unit_part(pivot[row], best_v));
    for (auto& x : pivot) x = Wm.mul(x, u_inv);
    for (auto& col : columns) {
      int v = valuation(col[row]);
      if (v >= m) continue;
      auto f = unit_part(col[row], best_v);  // col[row] = p^{best_v} * f
      for (int i = 0; i < n; ++i) col[i] = Wm.sub(col[i], Wm.mul(f, pivot[i]));
    }
    // p^{m - v} * pivot has a zero entry in this row but may be nonzero below.
    auto scaled = pivot;
    bool nonzero = false;
    for (auto& x : scaled) {
      for (int k = 0; k < m - best_v; ++k) x = Wm.p_shift(x);
      nonzero = nonzero || !Wm.is_zero(x);
    }
    if (nonzero) columns.push_back(std::move(scaled));
    std::erase_if(columns, [&](const auto& col) {
      for (const auto& x : col)
        if (!Wm.is_zero(x)) return false;
      return true;
    });
    L.diag[row] = best_v;
    basis[row] = std::move(pivot);
  }
  // Reduce row i entries of earlier columns modulo p^{diag[i]}.
  for (int i = 0; i < n; ++i) {
    const int a = L.diag[i];
    if (a >= m) continue;
    for (int j = 0; j < i; ++j) {
      auto& x = basis[j][i];
      if (valuation(x) >= m) continue;
      // x = trunc_a(x) + p^a * y with y read off the components >= a.
      WittVector<FiniteField> t = Wm.zero(m);
      for (int k = 0; k < a; ++k) t.coords[k] = x.coords[k];
      auto rest = Wm.sub(x, t);
      auto y = unit_part(rest, a);
      for (int r = 0; r < n; ++r) basis[j][r] = Wm.sub(basis[j][r], Wm.mul(y, basis[i][r]));
    }
  }
  L.columns = std::move(basis);
  return L;
}

/// Canonical form of the lattice whose p^w-multiple mod p^{2w} is spanned by `columns`.
inline Lattice echelon(const WittRing<FiniteField>& Wm, int n, int window, std::vector<std::vector<WittVector<FiniteField>>> columns) {
  if (Wm.length() != 2 * window) throw LengthMismatch("echelon form needs Witt length 2*window");
  auto E = column_echelon(Wm, n, std::move(columns));
  Lattice L;
  L.n = n;
  L.window = window;
  L.diag = E.diag;
  L.H.assign(n, std::vector<std::vector<FiniteField::Elem>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) L.H[i][j] = E.columns[j][i].coords;
  return L;
}

/// Lattice of the columns of g (entries in p^{-w} W with enough precision).
inline Lattice lattice_from_basis(const PadicField<FiniteField>& K, const PadicMatrix<FiniteField>& g, int window) {
  const int n = static_cast<int>(g.size());
  const int m = 2 * window;
  auto adj = mat_adjugate(K, g);
  auto det = mat_det(K, g);
  if (det.is_zero()) throw PrecisionLoss("basis is singular at the working precision");
  // p^w g^{-1} must be integral for p^w W^n to lie in L.
  for (const auto& row : adj)
    for (const auto& x : row) {
      auto y = K.mul(x, K.shift(K.inverse(det), window));
      if (!y.is_zero() && y.valuation < 0) throw InvalidArgument("lattice does not contain p^w W^n for window " + std::to_string(window));
    }
  WittRing<FiniteField> Wm(K.scalars(), std::max(m, 1));
  if (m == 0) {
    Lattice L;
    L.n = n;
    L.window = 0;
    L.diag.assign(n, 0);
    L.H.assign(n, std::vector<std::vector<FiniteField::Elem>>(n));
    return L;
  }
  std::vector<std::vector<WittVector<FiniteField>>> cols(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      auto x = K.shift(g[i][j], window);
      if (!x.is_zero() && x.valuation < 0) throw InvalidArgument("lattice is not inside p^{-w} W^n for window " + std::to_string(window));
      cols[j].push_back(x.is_zero() && x.valuation >= m ? Wm.zero(m) : K.to_witt(x, m));
    }
  return echelon(Wm, n, window, std::move(cols));
}

/// p^{-w} H lifted to W, taking the digits above level 2w to be zero.
inline PadicMatrix<FiniteField> lattice_basis(const PadicField<FiniteField>& K, const Lattice& L) {
  const int n = L.n;
  const int m = 2 * L.window;
  PadicMatrix<FiniteField> g(n, std::vector<PadicNumber<FiniteField>>(n, K.exact_zero()));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (i == j) {
        g[i][j] = K.power_of_p(L.diag[i] - L.window);
      } else if (i > j && m > 0) {
        WittVector<FiniteField> x{L.H[i][j]};
        g[i][j] = K.shift(K.make(0, K.witt().pad(x, K.length())), -L.window);
      }
    }
  return g;
}

inline Cocharacter classify_lattice(const PadicField<FiniteField>& K, const Lattice& L) {
  if (!L.is_special()) throw InvalidArgument("lattice is not special");
  return classify_cell(K, lattice_basis(K, L));
}

/// All special lattices in the window, each with its cell, sorted canonically.
/// Submodules of W_{2w}(F_q)^n are generated by n elements, so spans of
/// nondecreasing n-tuples of module elements cover them all.
inline std::vector<std::pair<Lattice, Cocharacter>> enumerate_lattices(int n, unsigned q, int window, int jobs = 1) {
  if (n < 1 || window < 0) throw InvalidArgument("need n >= 1 and window >= 0");
  FiniteField F = FiniteField::of_order(q);
  const int m = 2 * window;
  if (m == 0) {
    WittRing<FiniteField> W1(F, 1);
    PadicField<FiniteField> K(W1);
    Lattice L = lattice_from_basis(K, mat_identity(K, n), 0);
    return {{L, Cocharacter{std::vector<int>(n, 0)}}};
  }
  WittRing<FiniteField> Wm(F, m);
  // Elements of W_m indexed by base-q digits of their coordinates.
  double ring_size_d = std::pow(static_cast<double>(q), m);
  double module_size_d = std::pow(ring_size_d, n);
  double tuples = 1;
  for (int k = 0; k < n; ++k) tuples *= module_size_d;
  if (ring_size_d > 4096 || module_size_d > 1 << 20 || tuples > static_cast<double>(1 << 24))
    throw SizeGuard("enumeration of W_" + std::to_string(m) + "(F_" + std::to_string(q) + ")^" + std::to_string(n) +
                    " submodules exceeds the 2^24 candidate guard");
  const std::size_t R = static_cast<std::size_t>(ring_size_d);
  const std::size_t M = static_cast<std::size_t>(module_size_d);
  auto decode = [&](std::size_t idx) {
    WittVector<FiniteField> x = Wm.zero(m);
    for (int k = 0; k < m; ++k) {
      x.coords[k] = static_cast<FiniteField::Elem>(idx % q);
      idx /= q;
    }
    return x;
  };
  auto encode = [&](const WittVector<FiniteField>& x) {
    std::size_t idx = 0;
    for (int k = m - 1; k >= 0; --k) idx = idx * q + x.coords[k];
    return idx;
  };
  std::vector<std::uint32_t> add_t(R * R), mul_t(R * R);
  for (std::size_t a = 0; a < R; ++a)
    for (std::size_t b = 0; b < R; ++b) {
      add_t[a * R + b] = static_cast<std::uint32_t>(encode(Wm.add(decode(a), decode(b))));
      mul_t[a * R + b] = static_cast<std::uint32_t>(encode(Wm.mul(decode(a), decode(b))));
    }
  // Module elements: n ring indices packed base R.
  auto component = [&](std::size_t v, int i) {
    for (int k = 0; k < i; ++k) v /= R;
    return v % R;
  };
  std::vector<std::vector<std::uint32_t>> comps(M, std::vector<std::uint32_t>(n));
  for (std::size_t v = 0; v < M; ++v)
    for (int i = 0; i < n; ++i) comps[v][i] = static_cast<std::uint32_t>(component(v, i));
  auto pack = [&](const std::vector<std::uint32_t>& c) {
    std::size_t v = 0;
    for (int i = n - 1; i >= 0; --i) v = v * R + c[i];
    return v;
  };
  const std::size_t target = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(q), n * window)));
  const std::size_t words = (M + 63) / 64;

  // Span of generators: closure under addition and scalar multiples.
  auto span = [&](const std::vector<std::size_t>& gens, std::vector<std::uint64_t>& bits, std::vector<std::size_t>& elems) {
    std::fill(bits.begin(), bits.end(), 0);
    elems.assign(1, 0);
    bits[0] |= 1;
    std::vector<std::uint32_t> tmp(n);
    for (std::size_t g : gens) {
      if (bits[g / 64] >> (g % 64) & 1) continue;
      std::vector<std::size_t> multiples;
      for (std::size_t r = 0; r < R; ++r) {
        for (int i = 0; i < n; ++i) tmp[i] = mul_t[r * R + comps[g][i]];
        multiples.push_back(pack(tmp));
      }
      std::sort(multiples.begin(), multiples.end());
      multiples.erase(std::unique(multiples.begin(), multiples.end()), multiples.end());
      const std::size_t before = elems.size();
      for (std::size_t e = 0; e < before; ++e)
        for (std::size_t s : multiples) {
          for (int i = 0; i < n; ++i) tmp[i] = add_t[comps[elems[e]][i] * R + comps[s][i]];
          std::size_t v = pack(tmp);
          if (!(bits[v / 64] >> (v % 64) & 1)) {
            bits[v / 64] |= std::uint64_t{1} << (v % 64);
            elems.push_back(v);
          }
        }
      if (elems.size() > target) return;
    }
  };

  std::mutex mu;
  std::map<std::vector<std::uint64_t>, std::vector<std::size_t>> found;
  auto worker = [&](std::size_t first_begin, std::size_t first_step) {
    std::vector<std::uint64_t> bits(words);
    std::vector<std::size_t> elems;
    std::vector<std::size_t> gens(n);
    std::map<std::vector<std::uint64_t>, std::vector<std::size_t>> local;
    auto rec = [&](auto&& self, int k, std::size_t start) -> void {
      if (k == n) {
        span(gens, bits, elems);
        if (elems.size() == target) local.emplace(bits, gens);
        return;
      }
      for (std::size_t g = start; g < M; ++g) {
        gens[k] = g;
        self(self, k + 1, g);
      }
    };
    for (std::size_t g0 = first_begin; g0 < M; g0 += first_step) {
      gens[0] = g0;
      rec(rec, 1, g0);
    }
    std::lock_guard lock(mu);
    for (auto& [k, v] : local) found.emplace(k, v);
  };
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker, static_cast<std::size_t>(j), static_cast<std::size_t>(jobs));
    for (auto& t : pool) t.join();
  }

  WittRing<FiniteField> Wp(F, m + 2);
  PadicField<FiniteField> K(Wp);
  std::vector<std::pair<Lattice, Cocharacter>> out;
  for (const auto& [bits, gens] : found) {
    std::vector<std::vector<WittVector<FiniteField>>> cols;
    for (std::size_t g : gens) {
      std::vector<WittVector<FiniteField>> col;
      for (int i = 0; i < n; ++i) col.push_back(decode(comps[g][i]));
      cols.push_back(std::move(col));
    }
    Lattice L = echelon(Wm, n, window, std::move(cols));
    out.emplace_back(L, classify_lattice(K, L));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lattice

}  // namespace wittgrass
