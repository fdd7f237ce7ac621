#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wittgrass/hilbert.hpp"

using namespace wittgrass;

namespace {

using W = WittRing<FiniteField>;

Cocharacter C(const char* s) { return Cocharacter::parse(s); }

GradedIdeal ideal(const FiniteField& F, int n, int N, const std::vector<std::string>& gens) {
  auto R = hilbert::coordinate_ring(F, n, N);
  std::vector<Polynomial> g;
  for (const auto& s : gens) g.push_back(R.parse(s));
  return GradedIdeal(R, n, N, g);
}

Matrix<WittVector<FiniteField>> random_sl(const W& R, int n, std::mt19937_64& rng) {
  while (true) {
    Matrix<WittVector<FiniteField>> u(n);
    for (auto& row : u)
      for (int j = 0; j < n; ++j) row.push_back(R.make(oracle::random_coords(R.scalars(), R.length(), rng)));
    auto d = mat_det(R, u);
    if (!R.is_unit(d)) continue;
    auto inv = R.inverse(d);
    for (auto& row : u) row[0] = R.mul(row[0], inv);
    return u;
  }
}

// The (e, d) = (1, -1) family: A . I_{(1,-1)} over W_2(F_2[t, t^{-1}]).
GradedIdeal degeneration_family_ideal() {
  PolyRing L(FiniteField(2, 1), {Variable{"t", 0, 0, true}});
  WittRing<PolyRing> WL(L, 2);
  PadicField<PolyRing> K(WittRing<PolyRing>(L, 4));
  auto fam = lattice::degeneration_family(K, 1, -1);
  Matrix<WittVector<PolyRing>> A(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) A[i].push_back(K.to_witt(fam.A[i][j], 2));
  auto I = hilbert::ideal_I_lambda(FiniteField(2, 1), C("1,-1"), 2, true);
  return hilbert::act_on_ideal(A, I, WL);
}

}  // namespace

TEST(IdealILambda, Examples) {
  FiniteField F2(2, 1);
  EXPECT_TRUE(hilbert::ideal_I_lambda(F2, C("0,0"), 2).generators().empty());
  EXPECT_TRUE(hilbert::ideal_I_lambda(F2, C("1,-1"), 3).same_ideal(ideal(F2, 2, 3, {"x[1,0]", "x[1,1]"})));
  EXPECT_TRUE(hilbert::ideal_I_lambda(F2, C("1,0,-1"), 3).same_ideal(ideal(F2, 3, 3, {"x[1,0]", "x[1,1]", "x[2,0]"})));
  EXPECT_THROW(hilbert::ideal_I_lambda(F2, C("1,-1"), 2), WindowTooSmall);
  EXPECT_NO_THROW(hilbert::ideal_I_lambda(F2, C("1,-1"), 2, true));
  EXPECT_THROW(hilbert::ideal_I_lambda(F2, C("-1,1"), 3), NotDominant);
}

TEST(Groebner, Examples) {
  FiniteField F2(2, 1);
  auto I = ideal(F2, 2, 2, {"x[1,0] + x[2,0]", "x[2,0]^2"});
  const auto& R = I.ring();
  EXPECT_EQ(I.format_basis(), "<x[2,0]^2, x[1,0] + x[2,0]>");
  EXPECT_TRUE(I.contains(R.parse("x[1,0]^2")));
  EXPECT_FALSE(I.contains(R.parse("x[1,0]")));
  auto M = ideal(F2, 2, 2, {"x[2,0]^3", "x[1,0]*x[2,1]"});
  EXPECT_EQ(M.basis(), M.generators());
}

TEST(Groebner, RandomIdealsSatisfyBuchbergersCriterion) {
  std::mt19937_64 rng(3);
  for (unsigned q : {2u, 3u, 4u}) {
    auto F = FiniteField::of_order(q);
    auto R = hilbert::coordinate_ring(F, 2, 2);
    std::uniform_int_distribution<unsigned> coef(0, q - 1);
    for (int trial = 0; trial < 15; ++trial) {
      std::vector<Polynomial> gens;
      for (int k = 0; k < 3; ++k) {
        long deg = 2 + static_cast<long>(rng() % 3);
        std::vector<Exponents> mons;
        Exponents cur(R.num_vars(), 0);
        oracle::monomials(R, deg, 0, cur, mons);
        std::vector<Term> terms;
        for (auto& m : mons)
          if (rng() % 2) terms.push_back({m, coef(rng)});
        gens.push_back(R.normalize(terms));
      }
      GradedIdeal I(R, 2, 2, gens);
      EXPECT_TRUE(groebner::is_groebner(R, I.basis()));
      for (const auto& g : gens) EXPECT_TRUE(I.contains(g));
      std::shuffle(gens.begin(), gens.end(), rng);
      EXPECT_EQ(GradedIdeal(R, 2, 2, gens).basis(), I.basis());
      EXPECT_EQ(hilbert::hilbert_function(I, 8), oracle::linear_algebra_hf(I, 8));
    }
  }
}

TEST(Groebner, ResourceGuard) {
  auto I = ideal(FiniteField(2, 1), 2, 2, {"x[1,0]^3 + x[2,0]*x[1,1]", "x[2,0]^3 + x[1,0]*x[2,1]", "x[1,0]*x[2,0]^2 + x[1,1]*x[1,0]"});
  GroebnerLimits tiny{2, 2};
  EXPECT_THROW(groebner::basis(I.ring(), I.generators(), tiny), ResourceGuard);
}

TEST(HilbertFunction, Examples) {
  FiniteField F2(2, 1);
  EXPECT_EQ(hilbert::hilbert_function(ideal(F2, 2, 2, {}), 4), (HilbertFunction{1, 2, 5, 8, 14}));
  auto I = hilbert::ideal_I_lambda(F2, C("1,-1"), 3);
  EXPECT_EQ(hilbert::hilbert_function(I, 4), (HilbertFunction{1, 1, 2, 2, 5}));
  EXPECT_EQ(oracle::linear_algebra_hf(I, 4), (HilbertFunction{1, 1, 2, 2, 5}));
  EXPECT_EQ(hilbert::default_bound(2, 3), 16);
}

TEST(HilbertFunction, BoundaryIdealsShareTheCoordinateHilbertFunction) {
  auto F4 = FiniteField::of_order(4);
  auto ref = hilbert::hilbert_function(ideal(F4, 2, 2, {"x[2,0]", "x[2,1]"}), 12);
  for (FiniteField::Elem a = 0; a < 4; ++a) {
    auto R = hilbert::coordinate_ring(F4, 2, 2);
    auto f = R.add(R.variable("x[1,0]"), R.scale(R.variable("x[2,0]"), a));
    GradedIdeal I(R, 2, 2, {f, R.variable("x[2,0]", 2)});
    EXPECT_EQ(hilbert::hilbert_function(I, 12), ref);
    EXPECT_EQ(oracle::linear_algebra_hf(I, 12), ref);
  }
}

TEST(HilbertFunction, OrbitInvariance) {
  FiniteField F2(2, 1);
  W R(F2, 3);
  auto I = hilbert::ideal_I_lambda(F2, C("1,-1"), 3);
  auto ref = hilbert::hilbert_function(I, 16);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    auto J = hilbert::act_on_ideal(random_sl(R, 2, rng), I, R);
    EXPECT_EQ(hilbert::hilbert_function(J, 16), ref) << J.format();
  }
}

TEST(HilbertFunction, LargerCellHasLargerHilbertFunction) {
  FiniteField F2(2, 1);
  struct Pair {
    const char *small, *big;
  };
  for (auto [s, b] : {Pair{"1,-1", "2,-2"}, Pair{"0,0", "1,-1"}, Pair{"1,0,-1", "2,0,-2"}, Pair{"1,1,-2", "2,0,-2"}}) {
    auto lo = C(s), hi = C(b);
    ASSERT_TRUE(bruhat_leq(lo, hi));
    const int w = -hi.v.back();
    const int N = 2 * w + 1;
    auto hs = hilbert::hilbert_function(hilbert::shifted_ideal(F2, lo, w, N), hilbert::default_bound(2, N));
    auto hb = hilbert::hilbert_function(hilbert::shifted_ideal(F2, hi, w, N), hilbert::default_bound(2, N));
    EXPECT_EQ(hs[0], hb[0]);
    EXPECT_TRUE(hilbert::dominates(hb, hs)) << s << " " << b;
    EXPECT_NE(hs, hb);
  }
}

TEST(Stability, Examples) {
  FiniteField F2(2, 1);
  auto F4 = FiniteField::of_order(4);
  for (const char* l : {"0,0", "1,-1"}) EXPECT_TRUE(hilbert::is_module_stable(hilbert::ideal_I_lambda(F2, C(l), 3)));
  EXPECT_TRUE(hilbert::is_module_stable(hilbert::ideal_I_lambda(F2, C("1,0,-1"), 3)));
  EXPECT_TRUE(hilbert::is_module_stable(hilbert::ideal_I_lambda(FiniteField(3, 1), C("1,-1"), 3)));
  for (FiniteField::Elem a = 0; a < 4; ++a) {
    auto R = hilbert::coordinate_ring(F4, 2, 2);
    auto f = R.add(R.variable("x[1,0]"), R.scale(R.variable("x[2,0]"), a));
    EXPECT_TRUE(hilbert::is_module_stable(GradedIdeal(R, 2, 2, {f, R.variable("x[2,0]", 2)})));
  }
  auto bad = hilbert::module_stability(ideal(F2, 1, 2, {"x[1,1]"}));
  EXPECT_FALSE(bad.stable);
  EXPECT_NE(bad.failure.find("addition"), std::string::npos);
  EXPECT_FALSE(hilbert::is_module_stable(ideal(F2, 2, 2, {"x[1,0]^2 + x[2,1]"})));
}

TEST(Stability, OrbitInvariant) {
  FiniteField F2(2, 1);
  W R(F2, 3);
  std::mt19937_64 rng(21);
  auto I = hilbert::ideal_I_lambda(F2, C("1,-1"), 3);
  auto bad = ideal(F2, 2, 3, {"x[1,1]"});
  for (int trial = 0; trial < 4; ++trial) {
    auto g = random_sl(R, 2, rng);
    EXPECT_TRUE(hilbert::is_module_stable(hilbert::act_on_ideal(g, I, R)));
    EXPECT_FALSE(hilbert::is_module_stable(hilbert::act_on_ideal(g, bad, R)));
  }
}

TEST(Action, Examples) {
  FiniteField F2(2, 1);
  auto F4 = FiniteField::of_order(4);
  W R2(F2, 2), R4(F4, 3);
  auto I = hilbert::ideal_I_lambda(F4, C("1,-1"), 3);
  Matrix<WittVector<FiniteField>> id = {{R4.one(), R4.zero()}, {R4.zero(), R4.one()}};
  EXPECT_TRUE(hilbert::act_on_ideal(id, I, R4).same_ideal(I));
  auto c = R4.teichmuller(F4.generator());
  Matrix<WittVector<FiniteField>> dg = {{c, R4.zero()}, {R4.zero(), R4.inverse(c)}};
  auto J = hilbert::act_on_ideal(dg, I, R4);
  EXPECT_TRUE(J.same_ideal(I));
  auto K = ideal(F2, 2, 2, {"x[2,0]", "x[2,1]"});
  Matrix<WittVector<FiniteField>> u = {{R2.one(), R2.one()}, {R2.zero(), R2.one()}};
  auto Ku = hilbert::act_on_ideal(u, K, R2);
  EXPECT_TRUE(Ku.same_ideal(K));
  Matrix<WittVector<FiniteField>> sing = {{R2.one(), R2.one()}, {R2.one(), R2.one()}};
  EXPECT_THROW(hilbert::act_on_ideal(sing, K, R2), NonUnit);
}

TEST(FlatLimit, ConstantFamily) {
  auto F2 = FiniteField(2, 1);
  auto R = hilbert::coordinate_ring(F2, 2, 2, {Variable{"t", 0, 0, true}});
  GradedIdeal I(R, 2, 2, {R.parse("x[1,0]^2 + x[2,1]"), R.parse("x[2,0]")});
  auto L = hilbert::flat_limit(I);
  EXPECT_TRUE(L.same_ideal(ideal(F2, 2, 2, {"x[1,0]^2 + x[2,1]", "x[2,0]"})));
}

TEST(FlatLimit, DegenerationFamily) {
  auto F2 = FiniteField(2, 1);
  auto fam = degeneration_family_ideal();
  auto R = hilbert::coordinate_ring(F2, 2, 2, {Variable{"t", 0, 0, true}});
  GradedIdeal expected(R, 2, 2, {R.parse("x[2,0]"), R.parse("x[1,0]^2 + t^4*x[2,1]")});
  EXPECT_TRUE(hilbert::saturate_parameter(fam).same_ideal(hilbert::saturate_parameter(expected))) << fam.format();
  auto limit = hilbert::flat_limit(fam);
  auto want = ideal(F2, 2, 2, {"x[2,0]", "x[1,0]^2"});
  EXPECT_TRUE(limit.same_ideal(want)) << limit.format_basis();
  EXPECT_TRUE(hilbert::is_module_stable(limit));
  auto generic = hilbert::specialize(fam, 1);
  EXPECT_EQ(hilbert::hilbert_function(limit, 8), hilbert::hilbert_function(generic, 8));
  EXPECT_EQ(hilbert::hilbert_function(limit, 8), oracle::linear_algebra_hf(generic, 8));
  EXPECT_TRUE(hilbert::is_module_stable(generic));
}

TEST(FlatLimit, SaturationGuard) {
  auto fam = degeneration_family_ideal();
  EXPECT_THROW(hilbert::flat_limit(fam, "t", GroebnerLimits{1, 1}), SaturationGuard);
}

TEST(IdealText, RoundTrip) {
  auto I = hilbert::parse_ideal("# boundary ideal\nring p=2 q=4 n=2 N=2\nx[1,0] + u*x[2,0]\nx[2,0]^2\n");
  EXPECT_EQ(I.ring().field().order(), 4u);
  EXPECT_EQ(I.generators().size(), 2u);
  auto again = hilbert::parse_ideal(hilbert::format_ideal(I));
  EXPECT_TRUE(again.same_ideal(I));
  auto fam = hilbert::parse_ideal("ring p=2 n=2 N=2 param=t\nx[2,0]\nx[1,0]^2 + t^-4*x[2,1]\n");
  EXPECT_TRUE(fam.has_parameters());
  EXPECT_THROW(hilbert::parse_ideal("ring p=2 n=2\n"), ParseError);
  EXPECT_THROW(hilbert::parse_ideal("ring p=2 n=1 N=2\nx[1,0] + x[1,1]\n"), InvalidArgument);
  EXPECT_THROW(hilbert::parse_ideal("ring p=2 n=1 N=2\nx[1,0] + y\n"), ParseError);
}
