#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wittgrass/greenberg.hpp"

using namespace wittgrass;

namespace {

using W = WittRing<FiniteField>;
using Alg = WittPolyAlgebra<FiniteField>;

WittPolynomial<FiniteField> random_poly(const Alg& A, std::mt19937_64& rng) {
  const auto& R = A.coefficients();
  const auto& F = R.scalars();
  std::uniform_int_distribution<int> deg(0, 2), var(1, A.arity()), coin(0, 2);
  auto f = A.zero();
  int terms = 1 + coin(rng);
  for (int t = 0; t < terms; ++t) {
    auto m = A.constant(R.make(oracle::random_coords(F, R.length(), rng)));
    int k = deg(rng);
    for (int i = 0; i < k; ++i) m = A.mul(m, A.variable(var(rng)));
    f = A.add(f, m);
  }
  return f;
}

std::vector<std::vector<FiniteField::Elem>> random_point(const FiniteField& F, int d, int N, std::mt19937_64& rng) {
  std::vector<std::vector<FiniteField::Elem>> pt;
  for (int i = 0; i < d; ++i) pt.push_back(oracle::random_coords(F, N, rng));
  return pt;
}

TEST(Greenberg, SumOfTwoVariables) {
  W R(FiniteField(2, 1), 2);
  Alg A(R, 2);
  auto m = greenberg::realize_poly_map({A.parse("T1+T2")}, R, "t");
  EXPECT_EQ(m.comps[0][0], m.ring.parse("t[1,0] + t[2,0]"));
  EXPECT_EQ(m.comps[0][1], m.ring.parse("t[1,1] + t[2,1] + t[1,0]*t[2,0]"));
}

TEST(Greenberg, ConstantRealizesToItsCoordinates) {
  FiniteField F(2, 2);
  W R(F, 2);
  Alg A(R, 1);
  auto m = greenberg::realize_poly_map({A.parse("[u]")}, R);
  EXPECT_EQ(m.comps[0][0], m.ring.constant(F.generator()));
  EXPECT_TRUE(m.comps[0][1].is_zero());
}

TEST(Greenberg, DeterminantOfTwoByTwo) {
  FiniteField F(2, 2);
  W R(F, 2);
  Alg A(R, 4);
  // x, y, z, w = T1..T4 for the matrix [[x, y], [z, w]].
  auto m = greenberg::realize_poly_map({A.parse("T1*T4 - T2*T3")}, R);
  const auto& P = m.ring;
  // x_j = x[1,j], y_j = x[2,j], z_j = x[3,j], w_j = x[4,j]
  EXPECT_EQ(m.comps[0][0], P.parse("x[1,0]*x[4,0] + x[2,0]*x[3,0]"));
  EXPECT_EQ(m.comps[0][1], P.parse("x[1,0]^2*x[4,1] + x[1,1]*x[4,0]^2 + x[2,0]^2*x[3,1] + x[2,1]*x[3,0]^2"
                                   " + x[2,0]^2*x[3,0]^2 + x[1,0]*x[4,0]*x[2,0]*x[3,0]"));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto pt = random_point(F, 4, 2, rng);
    std::vector<WittVector<FiniteField>> v;
    for (auto& c : pt) v.push_back(R.make(c));
    Matrix<WittVector<FiniteField>> M = {{v[0], v[1]}, {v[2], v[3]}};
    EXPECT_EQ(m.apply(pt)[0], mat_det(R, M).coords);
  }
}

TEST(Greenberg, IdealExamples) {
  W R(FiniteField(2, 1), 2);
  Alg A1(R, 1), A2(R, 2);
  auto I = greenberg::realize_ideal({A1.parse("T1")}, R, "t");
  ASSERT_EQ(I.gens.size(), 2u);
  EXPECT_EQ(I.gens[0], I.ring.parse("t[1,0]"));
  EXPECT_EQ(I.gens[1], I.ring.parse("t[1,1]"));
  auto J = greenberg::realize_ideal({A1.parse("p*T1")}, R, "t");
  ASSERT_EQ(J.gens.size(), 1u);
  EXPECT_EQ(J.gens[0], J.ring.parse("t[1,0]^2"));
  auto K = greenberg::realize_ideal({A2.parse("T1+T2")}, R, "t");
  ASSERT_EQ(K.gens.size(), 2u);
  EXPECT_EQ(K.gens[1], K.ring.parse("t[1,1]+t[2,1]+t[1,0]*t[2,0]"));
}

TEST(Greenberg, DisjointSystemsRealizeToTheUnion) {
  W R(FiniteField(3, 1), 2);
  Alg A(R, 4);
  auto f = A.parse("T1*T2 - 1");
  auto g = A.parse("T3^2 + [2]*T4");
  auto both = greenberg::realize_ideal({f, g}, R);
  auto left = greenberg::realize_ideal({f}, R);
  auto right = greenberg::realize_ideal({g}, R);
  auto gens = left.gens;
  gens.insert(gens.end(), right.gens.begin(), right.gens.end());
  EXPECT_EQ(both.gens, gens);
}

struct MapCase {
  unsigned p;
  int N;
};

class GreenbergProperties : public ::testing::TestWithParam<MapCase> {};

TEST_P(GreenbergProperties, EvaluationCompatibility) {
  auto [p, N] = GetParam();
  FiniteField F(p, 1);
  W R(F, N);
  std::mt19937_64 rng(p * 31 + N);
  for (int d = 1; d <= 2; ++d) {
    Alg A(R, d);
    std::vector<WittPolynomial<FiniteField>> P = {random_poly(A, rng), random_poly(A, rng)};
    auto m = greenberg::realize_poly_map(P, R);
    for (int s = 0; s < 100; ++s) {
      auto pt = random_point(F, d, N, rng);
      std::vector<WittVector<FiniteField>> v;
      for (auto& c : pt) v.push_back(R.make(c));
      auto got = m.apply(pt);
      for (int i = 0; i < 2; ++i) EXPECT_EQ(got[i], A.evaluate(P[i], v).coords);
    }
  }
}

TEST_P(GreenbergProperties, Functoriality) {
  auto [p, N] = GetParam();
  FiniteField F(p, 1);
  W R(F, N);
  std::mt19937_64 rng(p * 57 + N);
  for (int trial = 0; trial < 5; ++trial) {
    Alg Ad(R, 2), Ae(R, 2);
    std::vector<WittPolynomial<FiniteField>> f = {random_poly(Ad, rng), random_poly(Ad, rng)};
    std::vector<WittPolynomial<FiniteField>> g = {random_poly(Ae, rng), random_poly(Ae, rng)};
    std::vector<WittPolynomial<FiniteField>> gf;
    for (const auto& gi : g) gf.push_back(Ae.substitute(gi, f, Ad));
    auto lhs = greenberg::realize_poly_map(gf, R);
    auto rhs = greenberg::compose(greenberg::realize_poly_map(g, R), greenberg::realize_poly_map(f, R));
    EXPECT_EQ(lhs.comps, rhs.comps);
  }
}

INSTANTIATE_TEST_SUITE_P(Small, GreenbergProperties,
                         ::testing::Values(MapCase{2, 2}, MapCase{2, 3}, MapCase{3, 2}, MapCase{3, 3}));

TEST(Greenberg, TransitionMap) {
  FiniteField F(2, 1);
  W R(F, 3);
  auto T = greenberg::localized_transition(F, 1, 3);
  EXPECT_EQ(T.apply({{1, 0, 0}})[0], (std::vector<FiniteField::Elem>{0, 1, 0}));
  EXPECT_EQ(T.apply({{0, 0, 0}})[0], (std::vector<FiniteField::Elem>{0, 0, 0}));
  Alg A(R, 1);
  auto p2 = greenberg::realize_poly_map({A.parse("p^2*T1")}, R);
  EXPECT_EQ(greenberg::compose(T, T).comps, p2.comps);
  auto pT = greenberg::realize_poly_map({A.parse("p*T1")}, R);
  EXPECT_EQ(T.comps, pT.comps);
  PolyRing L(F, {{"t", 0, 0, true}});
  EXPECT_THROW(greenberg::localized_transition(L, 1, 2), NotPerfect);
}

TEST(Greenberg, ActionExamples) {
  FiniteField F(2, 2);
  W R(F, 2);
  auto T = [&](FiniteField::Elem c) { return R.teichmuller(c); };
  auto id = greenberg::realize_action<FiniteField>({{T(1), T(0)}, {T(0), T(1)}}, R);
  for (int i = 1; i <= 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_EQ(id.comps[i - 1][j], id.ring.variable(coord_name("x", i, j)));

  auto c = F.generator();
  auto diag = greenberg::realize_action<FiniteField>({{T(c), T(0)}, {T(0), T(F.inverse(c))}}, R);
  EXPECT_EQ(diag.comps[0][1], diag.ring.scale(diag.ring.parse("x[1,1]"), F.pow(c, 2)));
  EXPECT_EQ(diag.comps[1][1], diag.ring.scale(diag.ring.parse("x[2,1]"), F.pow(c, -2)));

  auto u = greenberg::realize_action<FiniteField>({{T(1), T(1)}, {T(0), T(1)}}, R);
  EXPECT_EQ(u.comps[0][0], u.ring.parse("x[1,0]+x[2,0]"));
  EXPECT_EQ(u.comps[0][1], u.ring.parse("x[1,1]+x[2,1]+x[1,0]*x[2,0]"));
  EXPECT_EQ(u.comps[1][1], u.ring.parse("x[2,1]"));

  EXPECT_THROW(greenberg::realize_action<FiniteField>({{T(1), T(1)}, {T(1), T(1)}}, R), NonUnit);
}

// Realized SL_2 multiplication on (A, B) is associative and has the identity as neutral element.
TEST(Greenberg, RealizedMatrixGroupLaw) {
  FiniteField F(2, 2);
  W R(F, 2);
  Alg A(R, 8);
  auto prod = greenberg::realize_poly_map(
      A.parse_list("T1*T5+T2*T7; T1*T6+T2*T8; T3*T5+T4*T7; T3*T6+T4*T8"), R);
  auto mult = [&](const std::vector<std::vector<FiniteField::Elem>>& a,
                  const std::vector<std::vector<FiniteField::Elem>>& b) {
    auto pt = a;
    pt.insert(pt.end(), b.begin(), b.end());
    return prod.apply(pt);
  };
  std::mt19937_64 rng(11);
  auto random_sl2 = [&]() {
    while (true) {
      auto m = random_point(F, 4, 2, rng);
      Matrix<WittVector<FiniteField>> M = {{R.make(m[0]), R.make(m[1])}, {R.make(m[2]), R.make(m[3])}};
      auto det = mat_det(R, M);
      if (!R.is_unit(det)) continue;
      M[0][0] = R.mul(M[0][0], R.inverse(det));
      M[1][0] = R.mul(M[1][0], R.inverse(det));
      return std::vector<std::vector<FiniteField::Elem>>{M[0][0].coords, M[0][1].coords, M[1][0].coords, M[1][1].coords};
    }
  };
  std::vector<std::vector<FiniteField::Elem>> id = {{1, 0}, {0, 0}, {0, 0}, {1, 0}};
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_sl2(), b = random_sl2(), c = random_sl2();
    EXPECT_EQ(mult(mult(a, b), c), mult(a, mult(b, c)));
    EXPECT_EQ(mult(id, a), a);
    EXPECT_EQ(mult(a, id), a);
  }
}

}  // namespace
