#include <gtest/gtest.h>

#include <map>
#include <random>

#include "oracles.hpp"
#include "wittgrass/greenberg.hpp"
#include "wittgrass/lattice.hpp"

using namespace wittgrass;

namespace {

using W = WittRing<FiniteField>;
using K = PadicField<FiniteField>;
using PM = PadicMatrix<FiniteField>;

K field(unsigned q, int N) { return K(W(FiniteField::of_order(q), N)); }

PM diag_p(const K& k, std::vector<long> e) { return lattice::diagonal_powers(k, e); }

// Random element of SL_n(W_N(F_q)), as Witt coordinate rows.
Matrix<WittVector<FiniteField>> random_sl(const W& R, int n, std::mt19937_64& rng) {
  const auto& F = R.scalars();
  while (true) {
    Matrix<WittVector<FiniteField>> u(n);
    for (auto& row : u)
      for (int j = 0; j < n; ++j) row.push_back(R.make(oracle::random_coords(F, R.length(), rng)));
    auto d = mat_det(R, u);
    if (!R.is_unit(d)) continue;
    auto inv = R.inverse(d);
    for (auto& row : u) row[0] = R.mul(row[0], inv);
    return u;
  }
}

PM embed(const K& k, const Matrix<WittVector<FiniteField>>& u) {
  PM g(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (const auto& x : u[i]) g[i].push_back(k.make(0, x));
  return g;
}

// Elementary divisors from determinantal divisors over Z_q / p^M, on a
// matrix already scaled to be integral.
long zq_valuation(const oracle::Zq::Elem& x, unsigned p, int M) {
  long best = M;
  for (auto c : x) {
    if (c == 0) continue;
    long v = 0;
    while (c % p == 0) {
      c /= p;
      ++v;
    }
    best = std::min(best, v);
  }
  return best;
}

oracle::Zq::Elem zq_det(const oracle::Zq& Z, const std::vector<std::vector<oracle::Zq::Elem>>& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  auto acc = Z.zero();
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<oracle::Zq::Elem>> m;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<oracle::Zq::Elem> r;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) r.push_back(a[i][c]);
      m.push_back(r);
    }
    auto t = Z.mul(a[0][j], zq_det(Z, m));
    acc = j % 2 ? Z.add(acc, Z.neg(t)) : Z.add(acc, t);
  }
  return acc;
}

std::vector<long> oracle_divisors(const oracle::Zq& Z, const std::vector<std::vector<oracle::Zq::Elem>>& a, unsigned p, int M, long scale) {
  const int n = static_cast<int>(a.size());
  std::vector<long> d(n + 1, 0);
  std::vector<int> rows(n), cols(n);
  for (int k = 1; k <= n; ++k) {
    long best = M;
    // all k-subsets of rows and columns
    for (int rm = 0; rm < (1 << n); ++rm) {
      if (__builtin_popcount(rm) != k) continue;
      for (int cm = 0; cm < (1 << n); ++cm) {
        if (__builtin_popcount(cm) != k) continue;
        std::vector<std::vector<oracle::Zq::Elem>> sub;
        for (int i = 0; i < n; ++i) {
          if (!(rm >> i & 1)) continue;
          std::vector<oracle::Zq::Elem> r;
          for (int j = 0; j < n; ++j)
            if (cm >> j & 1) r.push_back(a[i][j]);
          sub.push_back(r);
        }
        best = std::min(best, zq_valuation(zq_det(Z, sub), p, M));
      }
    }
    d[k] = best - k * scale;
  }
  std::vector<long> mu;
  for (int k = n; k >= 1; --k) mu.push_back(d[k] - d[k - 1]);
  return mu;
}

}  // namespace

TEST(Padic, AlignedAddition) {
  auto k = field(2, 3);
  auto a = k.shift(k.from_witt(k.witt().parse("(1,0,0)")), -1);
  auto b = k.shift(k.from_witt(k.witt().parse("(1,0,0)")), 1);
  auto s = k.add(a, b);
  EXPECT_EQ(s.valuation, -1);
  EXPECT_EQ(k.witt().format(s.mantissa), "(1,0,1)");
  EXPECT_EQ(k.add(a, k.exact_zero()), a);
}

TEST(Padic, InverseOfShiftedUnit) {
  auto k = field(4, 3);
  auto u = k.witt().parse("(u,1,u+1)");
  auto x = k.shift(k.from_witt(u), 2);
  auto y = k.inverse(x);
  EXPECT_EQ(y.valuation, -2);
  EXPECT_TRUE(k.witt().equal(y.mantissa, k.witt().inverse(u)));
  EXPECT_TRUE(k.equal(k.mul(x, y), k.one()));
  EXPECT_THROW(k.inverse(k.zero_at(3)), ZeroAtPrecision);
}

TEST(Padic, MatchesIntegerOracle) {
  std::mt19937_64 rng(11);
  for (unsigned q : {2u, 3u, 4u}) {
    auto k = field(q, 4);
    auto F = k.scalars();
    const unsigned p = F.characteristic();
    oracle::Zq Z(F, 8);
    for (int trial = 0; trial < 40; ++trial) {
      auto a = oracle::random_coords(F, 4, rng), b = oracle::random_coords(F, 4, rng);
      std::uniform_int_distribution<int> sh(0, 2);
      int sa = sh(rng), sb = sh(rng);
      auto x = k.shift(k.make(0, W::Elem{a}), sa), y = k.shift(k.make(0, W::Elem{b}), sb);
      // Compare modulo p^4 where both sides are known.
      auto pw = [&](int e) {
        long long v = 1;
        for (int i = 0; i < e; ++i) v *= p;
        return Z.from_int(v);
      };
      auto X = Z.mul(pw(sa), Z.from_witt(a)), Y = Z.mul(pw(sb), Z.from_witt(b));
      auto check = [&](const PadicNumber<FiniteField>& r, const oracle::Zq::Elem& R) {
        auto coords = Z.to_witt(R);
        coords.resize(4);
        if (r.is_zero()) {
          ASSERT_GE(r.valuation, 0);
          return;
        }
        long prec = std::min<long>(r.precision(), 4);
        auto mine = k.to_witt(k.with_precision(r, prec), static_cast<int>(prec));
        coords.resize(prec);
        EXPECT_EQ(mine.coords, coords);
      };
      check(k.add(x, y), Z.add(X, Y));
      check(k.mul(x, y), Z.mul(X, Y));
      check(k.sub(x, y), Z.add(X, Z.neg(Y)));
    }
  }
}

TEST(Padic, LiteralRoundTrip) {
  auto k = field(4, 3);
  for (const char* s : {"0", "O(p^2)", "p^-1*(1,u,0)", "p^2*(u+1,0,1)", "(1,1,1)"}) EXPECT_EQ(k.format(k.parse(s)), s);
  EXPECT_EQ(k.format(k.parse("p")), "p^1*(1,0,0)");
  EXPECT_EQ(k.format(k.parse("[u]")), "(u,0,0)");
  EXPECT_THROW(k.parse("p^x"), ParseError);
  EXPECT_THROW(k.parse("hello"), ParseError);
  auto M = k.parse_matrix("p^1*(1,0,0), 0; 0, p^-1*(1,0,0)");
  EXPECT_EQ(M.size(), 2u);
  EXPECT_THROW(k.parse_matrix("1,0;1"), ParseError);
}

TEST(Padic, ToWittRequiresPrecision) {
  auto k = field(2, 3);
  EXPECT_THROW(k.to_witt(k.zero_at(1), 3), PrecisionLoss);
  EXPECT_THROW(k.to_witt(k.power_of_p(-1), 2), InvalidArgument);
  EXPECT_EQ(k.to_witt(k.power_of_p(1), 3).coords, (std::vector<FiniteField::Elem>{0, 1, 0}));
}

TEST(Cocharacter, Basics) {
  auto c = Cocharacter::parse("(2,0,-2)");
  EXPECT_TRUE(c.is_dominant());
  EXPECT_EQ(c.tilde(), (std::vector<int>{4, 2, 0}));
  EXPECT_EQ(c.big_lambda(), 6);
  EXPECT_EQ(Cocharacter::parse("1,-1").format(), "(1,-1)");
  EXPECT_THROW(Cocharacter::parse("1,x"), ParseError);
}

TEST(Cocharacter, BruhatExamples) {
  auto C = [](const char* s) { return Cocharacter::parse(s); };
  EXPECT_TRUE(bruhat_leq(C("0,0"), C("1,-1")));
  EXPECT_TRUE(bruhat_leq(C("1,-1"), C("2,-2")));
  EXPECT_FALSE(bruhat_leq(C("2,-2"), C("1,-1")));
  EXPECT_TRUE(bruhat_leq(C("1,1,-2"), C("2,0,-2")));
  EXPECT_FALSE(bruhat_leq(C("2,0,-2"), C("1,1,-2")));
  EXPECT_THROW(bruhat_leq(C("-1,1"), C("1,-1")), NotDominant);
}

TEST(Cocharacter, DominantBelowIsAnOrderIdeal) {
  auto top = Cocharacter::parse("2,0,-2");
  auto below = dominant_below(top);
  EXPECT_EQ(below.front(), top);
  EXPECT_EQ(below.back(), Cocharacter::parse("0,0,0"));
  for (const auto& a : below)
    for (const auto& b : below)
      if (bruhat_leq(a, b)) {
        for (const auto& c : dominant_below(a)) EXPECT_TRUE(bruhat_leq(c, b));
      }
  EXPECT_EQ(dominant_below(Cocharacter::parse("2,-2")).size(), 3u);
}

TEST(Smith, Examples) {
  auto k = field(2, 4);
  auto snf = lattice::smith_normal_form(k, diag_p(k, {1, -1}));
  EXPECT_EQ(snf.mu, (std::vector<long>{1, -1}));
  EXPECT_TRUE(mat_equal(k, snf.U, mat_identity(k, 2)));
  EXPECT_TRUE(mat_equal(k, snf.V, mat_identity(k, 2)));
  EXPECT_EQ(lattice::smith_normal_form(k, k.parse_matrix("1, p^-1; 0, 1")).mu, (std::vector<long>{1, -1}));
  auto A = k.parse_matrix("1, 1; 1, (1,1,0,0)");
  EXPECT_TRUE(k.equal(mat_det(k, A), k.power_of_p(1)));
  auto s = lattice::smith_normal_form(k, A);
  EXPECT_EQ(s.mu, (std::vector<long>{1, 0}));
  EXPECT_TRUE(mat_equal(k, mat_mul(k, mat_mul(k, s.U, diag_p(k, s.mu)), s.V), A));
}

TEST(Smith, PrecisionLossOnUnresolvedEntries) {
  auto k = field(2, 3);
  PM A = {{k.zero_at(0), k.one()}, {k.one(), k.zero_at(0)}};
  A[0][0] = k.zero_at(-1);
  EXPECT_THROW(lattice::smith_normal_form(k, A), PrecisionLoss);
  PM Z = {{k.zero_at(2), k.zero_at(2)}, {k.zero_at(2), k.zero_at(2)}};
  EXPECT_THROW(lattice::smith_normal_form(k, Z), PrecisionLoss);
}

TEST(Classify, Examples) {
  auto k = field(2, 4);
  EXPECT_EQ(lattice::classify_cell(k, mat_identity(k, 3)), Cocharacter::parse("0,0,0"));
  EXPECT_EQ(lattice::classify_cell(k, diag_p(k, {1, -1})), Cocharacter::parse("1,-1"));
  EXPECT_EQ(lattice::classify_cell(k, k.parse_matrix("1, p^-1; 0, 1")), Cocharacter::parse("1,-1"));
  EXPECT_THROW(lattice::classify_cell(k, diag_p(k, {1, 0})), InvalidArgument);
  EXPECT_TRUE(lattice::stabilizes_standard(k, mat_identity(k, 2)));
  EXPECT_FALSE(lattice::stabilizes_standard(k, diag_p(k, {1, -1})));
}

struct CellCase {
  unsigned q;
  int N;
  std::vector<long> lambda;
};

class CellInvariance : public ::testing::TestWithParam<CellCase> {};

// g = u diag(p^lambda) v with u, v in SL_n(W_N): the library's cell must
// match the determinantal divisors computed over Z_q / p^M.
TEST_P(CellInvariance, AgreesWithDeterminantalDivisors) {
  const auto& c = GetParam();
  const int n = static_cast<int>(c.lambda.size());
  auto k = field(c.q, c.N);
  const auto& R = k.witt();
  const auto& F = k.scalars();
  const unsigned p = F.characteristic();
  const long top = c.lambda.front(), low = c.lambda.back();
  const int M = c.N + static_cast<int>(top - low) + 2;
  oracle::Zq Z(F, M);
  std::mt19937_64 rng(c.q * 100 + n);
  for (int trial = 0; trial < 6; ++trial) {
    auto u = random_sl(R, n, rng), v = random_sl(R, n, rng);
    auto g = mat_mul(k, mat_mul(k, embed(k, u), diag_p(k, c.lambda)), embed(k, v));
    Cocharacter want;
    for (long x : c.lambda) want.v.push_back(static_cast<int>(x));
    EXPECT_EQ(lattice::classify_cell(k, g), want);
    EXPECT_EQ(lattice::stabilizes_standard(k, g), top == 0);

    // Oracle: p^{-low} g over Z_q, digits of u and v beyond N taken as zero.
    auto lift = [&](const Matrix<WittVector<FiniteField>>& m) {
      std::vector<std::vector<oracle::Zq::Elem>> r(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r[i].push_back(Z.from_witt(m[i][j].coords));
      return r;
    };
    auto U = lift(u), V = lift(v);
    std::vector<std::vector<oracle::Zq::Elem>> G(n, std::vector<oracle::Zq::Elem>(n, Z.zero()));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int t = 0; t < n; ++t) {
          long long pw = 1;
          for (long e = 0; e < c.lambda[t] - low; ++e) pw *= p;
          G[i][j] = Z.add(G[i][j], Z.mul(Z.mul(U[i][t], Z.from_int(pw)), V[t][j]));
        }
    EXPECT_EQ(oracle_divisors(Z, G, p, M, -low), std::vector<long>(c.lambda.begin(), c.lambda.end()));

    auto snf = lattice::smith_normal_form(k, g);
    EXPECT_TRUE(mat_equal(k, mat_mul(k, mat_mul(k, snf.U, diag_p(k, snf.mu)), snf.V), g));
    EXPECT_TRUE(R.is_unit(k.to_witt(mat_det(k, snf.U), 1)));
    EXPECT_TRUE(R.is_unit(k.to_witt(mat_det(k, snf.V), 1)));
  }
}

INSTANTIATE_TEST_SUITE_P(Lattice, CellInvariance,
                         ::testing::Values(CellCase{2, 5, {1, -1}}, CellCase{4, 5, {2, -2}}, CellCase{3, 4, {1, -1}},
                                           CellCase{2, 5, {1, 0, -1}}, CellCase{2, 5, {0, 0}}, CellCase{3, 4, {1, 1, -2}}),
                         [](const auto& info) { return "case" + std::to_string(info.index); });

TEST(Classify, StabilizerOfRandomIntegralMatrices) {
  auto k = field(4, 3);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = embed(k, random_sl(k.witt(), 2, rng));
    EXPECT_TRUE(lattice::stabilizes_standard(k, g));
    EXPECT_EQ(lattice::classify_cell(k, g), Cocharacter::parse("0,0"));
  }
}

// If A - B lies in p^{l+1} Mat(W) and p^l A^{-1} is integral then A^{-1} B is
// integral and congruent to 1 mod p.
TEST(Perturbation, GeometricSeries) {
  auto k = field(2, 6);
  std::mt19937_64 rng(17);
  for (std::vector<long> lambda : {std::vector<long>{1, -1}, std::vector<long>{2, -2}}) {
    const long l = lambda.front();
    for (int trial = 0; trial < 5; ++trial) {
      auto A = mat_mul(k, mat_mul(k, embed(k, random_sl(k.witt(), 2, rng)), diag_p(k, lambda)), embed(k, random_sl(k.witt(), 2, rng)));
      auto B = A;
      for (auto& row : B)
        for (auto& x : row) x = k.add(x, k.shift(k.make(0, W::Elem{oracle::random_coords(k.scalars(), 6, rng)}), l + 1));
      auto Ainv = mat_adjugate(k, A);  // det A = 1
      for (const auto& row : Ainv)
        for (const auto& x : row) EXPECT_TRUE(x.is_zero() || x.valuation >= -l);
      auto P = mat_mul(k, Ainv, B);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          auto d = k.sub(P[i][j], i == j ? k.one() : k.exact_zero());
          EXPECT_GE(d.valuation, 1) << k.format(d);
        }
    }
  }
}

TEST(Determinant, ShiftedBasisRealizesPowerOfP) {
  for (auto [p, lambda] : {std::pair<unsigned, std::vector<int>>{2, {1, -1}}, {3, {1, -1}}, {2, {2, 0, -2}}}) {
    Cocharacter c{lambda};
    const int n = c.size();
    const long Lambda = c.big_lambda();
    const int N = static_cast<int>(Lambda) + 1;
    if (N > 4) continue;
    W R(FiniteField(p, 1), N);
    WittPolyAlgebra<FiniteField> A(R, n * n);
    auto t = c.tilde();
    Matrix<WittPolynomial<FiniteField>> m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m[i].push_back(A.mul(A.pow(A.from_int(p), t[i]), A.variable(i * n + j + 1)));
    // Leibniz expansion of the determinant.
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    auto det = A.zero();
    do {
      int inv = 0;
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) inv += perm[a] > perm[b];
      auto term = A.one();
      for (int i = 0; i < n; ++i) term = A.mul(term, m[i][perm[i]]);
      det = inv % 2 ? A.sub(det, term) : A.add(det, term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    auto map = greenberg::realize_poly_map({det}, R);
    for (long j = 0; j < Lambda; ++j) EXPECT_TRUE(map.ring.is_zero(map.comps[0][j])) << "component " << j;
    EXPECT_FALSE(map.ring.is_zero(map.comps[0][Lambda]));
  }
}

TEST(NormalizeBasis, Examples) {
  auto k = field(2, 6);
  W R3(FiniteField(2, 1), 3);
  Matrix<WittVector<FiniteField>> M = {{R3.from_int(4), R3.zero()}, {R3.zero(), R3.one()}};
  auto g = lattice::normalize_basis(k, M, 2);
  EXPECT_TRUE(k.equal(mat_det(k, g), k.one()));
  EXPECT_EQ(lattice::classify_cell(k, g), Cocharacter::parse("1,-1"));
  EXPECT_TRUE(mat_equal(k, g, diag_p(k, {1, -1})));
  EXPECT_THROW(lattice::normalize_basis(k, M, 0), DetValuationMismatch);

  Matrix<WittVector<FiniteField>> I = {{R3.one(), R3.zero()}, {R3.zero(), R3.one()}};
  EXPECT_TRUE(mat_equal(k, lattice::normalize_basis(k, I, 0), mat_identity(k, 2)));
}

TEST(NormalizeBasis, PaddingDoesNotChangeTheCell) {
  auto k = field(2, 6);
  W R3(FiniteField(2, 1), 3), R6(FiniteField(2, 1), 6);
  std::mt19937_64 rng(23);
  int tested = 0;
  while (tested < 8) {
    Matrix<WittVector<FiniteField>> M(2), M2(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        auto base = oracle::random_coords(k.scalars(), 3, rng);
        if (i == 0) base[0] = 0;  // row 0 divisible by p
        auto ext = base;
        for (auto c : oracle::random_coords(k.scalars(), 3, rng)) ext.push_back(c);
        M[i].push_back(R3.make(base));
        M2[i].push_back(R6.make(ext));
      }
    auto d = mat_det(k, embed(k, M));
    if (d.is_zero() || d.valuation != 2) continue;
    ++tested;
    auto a = lattice::classify_cell(k, lattice::normalize_basis(k, M, 2));
    auto b = lattice::classify_cell(k, lattice::normalize_basis(k, M2, 2));
    EXPECT_EQ(a, b);
  }
}

TEST(Degeneration, IdentityHolds) {
  struct Case {
    unsigned p;
    int e, d, N;
  };
  for (auto c : {Case{2, 1, -1, 4}, Case{2, 1, 0, 3}, Case{3, 1, -1, 4}, Case{2, 2, -2, 6}, Case{2, 2, 1, 3}, Case{2, 3, 1, 4}}) {
    PolyRing L(FiniteField(c.p, 1), {Variable{"t", 0, 0, true}});
    PadicField<PolyRing> Kt(WittRing<PolyRing>(L, c.N));
    auto F = lattice::degeneration_family(Kt, c.e, c.d);
    EXPECT_TRUE(F.verified) << c.p << " " << c.e << " " << c.d;
    if (c.e == 1 && c.d == -1) {
      EXPECT_TRUE(Kt.equal(F.rhs[0][0], Kt.one()));
      EXPECT_TRUE(Kt.equal(F.rhs[1][1], Kt.one()));
    }
  }
  PolyRing L(FiniteField(2, 1), {Variable{"t", 0, 0, true}});
  PadicField<PolyRing> Kt(WittRing<PolyRing>(L, 3));
  EXPECT_THROW(lattice::degeneration_family(Kt, 1, -1), PrecisionLoss);
  EXPECT_THROW(lattice::degeneration_family(Kt, 0, 0), InvalidArgument);
  // (p, e, d) = (3, 2, -2) needs W_6 over F_3, beyond the structure-table limits.
  EXPECT_THROW(WittRing<PolyRing>(PolyRing(FiniteField(3, 1), {Variable{"t", 0, 0, true}}), 6), LimitError);
}

TEST(Enumerate, TrivialWindow) {
  auto all = lattice::enumerate_lattices(2, 2, 0);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0].second, Cocharacter::parse("0,0"));
}

// The (1,-1) lattices in window 1 are the vertices at distance 2 from the
// standard vertex of the Bruhat-Tits tree: q(q+1) of them.
TEST(Enumerate, RankTwoWindowOne) {
  for (unsigned q : {2u, 3u, 4u}) {
    auto all = lattice::enumerate_lattices(2, q, 1);
    std::map<Cocharacter, int> counts;
    for (const auto& [L, c] : all) ++counts[c];
    EXPECT_EQ(counts[Cocharacter::parse("0,0")], 1);
    EXPECT_EQ(counts[Cocharacter::parse("1,-1")], static_cast<int>(q * (q + 1)));
    EXPECT_EQ(counts.size(), 2u);
  }
}

TEST(Enumerate, CanonicalFormsAreStable) {
  auto k = field(2, 6);
  auto all = lattice::enumerate_lattices(2, 2, 2, 3);
  std::map<Cocharacter, int> counts;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& [L, c] = all[i];
    ++counts[c];
    EXPECT_TRUE(L.is_special());
    if (i) EXPECT_LT(all[i - 1].first, L);
    // Re-deriving the canonical form from the lifted basis, or from a basis
    // changed by a random element of SL_2(W), reproduces it.
    auto g = lattice::lattice_basis(k, L);
    EXPECT_EQ(lattice::lattice_from_basis(k, g, 2), L);
    std::mt19937_64 rng(i);
    auto h = mat_mul(k, g, embed(k, random_sl(k.witt(), 2, rng)));
    EXPECT_EQ(lattice::lattice_from_basis(k, h, 2), L);
    EXPECT_EQ(lattice::classify_cell(k, h), c);
  }
  // Tree vertices at distance 0, 2, 4 from the standard one.
  EXPECT_EQ(counts[Cocharacter::parse("0,0")], 1);
  EXPECT_EQ(counts[Cocharacter::parse("1,-1")], 6);
  EXPECT_EQ(counts[Cocharacter::parse("2,-2")], 24);
  EXPECT_EQ(lattice::enumerate_lattices(2, 2, 2, 1), all);
}

TEST(Enumerate, SizeGuard) { EXPECT_THROW(lattice::enumerate_lattices(3, 4, 2), SizeGuard); }
