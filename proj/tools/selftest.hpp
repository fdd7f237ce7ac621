#pragma once

// Invariant suite behind `wittgrass selftest`.

#include <json.hpp>

#include <chrono>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "wittgrass/grassmann.hpp"
#include "wittgrass/greenberg.hpp"
#include "wittgrass/hilbert.hpp"
#include "wittgrass/lattice.hpp"
#include "wittgrass/structure_table.hpp"
#include "wittgrass/witt.hpp"

namespace selftest {

using namespace wittgrass;

struct Options {
  unsigned p = 2;
  int N = 3;
  unsigned q = 0;  // 0: p^2
  int jobs = 1;
  std::uint64_t seed = 7;
};

struct Outcome {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

namespace detail {

inline WittVector<FiniteField> random_vector(const WittRing<FiniteField>& W, std::mt19937_64& rng) {
  std::uniform_int_distribution<unsigned> digit(0, W.scalars().order() - 1);
  auto x = W.zero();
  for (auto& c : x.coords) c = digit(rng);
  return x;
}

// Cache state for p before any table is requested: a corrupted file is
// reported here and then replaced by the regeneration in `get`.
inline Outcome check_cache(const Options& o) {
  Outcome r{"cache"};
  auto& cache = structure::Cache::instance();
  std::string surfaced;
  try {
    cache.load(o.p);
  } catch (const CacheError& e) {
    surfaced = e.what();
  }
  structure_tables(o.p, o.N);
  if (cache.file_for(o.p).empty()) {
    r.pass = true;
    r.detail = "disk cache disabled";
    return r;
  }
  try {
    auto t = cache.load(o.p);
    r.pass = t && t->N >= o.N;
    r.detail = surfaced.empty() ? cache.file_for(o.p).string() : "cache error: " + surfaced + "; regenerated " + cache.file_for(o.p).string();
  } catch (const CacheError& e) {
    r.detail = std::string("regeneration failed: ") + e.what();
  }
  return r;
}

}  // namespace detail

inline std::vector<Outcome> run_all(const Options& o) {
  structure::check_limits(o.p, o.N);
  const unsigned q = o.q ? o.q : o.p * o.p;
  const FiniteField F = FiniteField::of_order(q);
  if (F.characteristic() != o.p) throw InvalidArgument("q must be a power of p");
  std::mt19937_64 rng(o.seed);
  std::vector<Outcome> out;
  out.push_back(detail::check_cache(o));

  auto run = [&](const std::string& name, const std::function<std::string()>& body) {
    Outcome r{name};
    auto t0 = std::chrono::steady_clock::now();
    try {
      r.detail = body();
      r.pass = r.detail.empty();
    } catch (const SizeGuard& e) {
      r.pass = true;
      r.detail = std::string("skipped: ") + e.what();
    } catch (const LimitError& e) {
      r.pass = true;
      r.detail = std::string("skipped: ") + e.what();
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  };

  const WittRing<FiniteField> W(F, o.N);
  const int trials = 100;

  run("ghost identities", [&] {
    const auto& t = structure_tables(o.p, o.N)->exact;
    if (!structure::is_triangular(t)) return std::string("structure polynomials are not triangular");
    return structure::verify_ghost_identities(t) ? std::string() : std::string("ghost identity fails");
  });

  run("ring axioms", [&]() -> std::string {
    for (int i = 0; i < trials; ++i) {
      auto a = detail::random_vector(W, rng), b = detail::random_vector(W, rng), c = detail::random_vector(W, rng);
      if (!W.equal(W.add(a, b), W.add(b, a))) return "addition not commutative at " + W.format(a) + ", " + W.format(b);
      if (!W.equal(W.mul(a, b), W.mul(b, a))) return "multiplication not commutative at " + W.format(a) + ", " + W.format(b);
      if (!W.equal(W.add(W.add(a, b), c), W.add(a, W.add(b, c)))) return "addition not associative";
      if (!W.equal(W.mul(W.mul(a, b), c), W.mul(a, W.mul(b, c)))) return "multiplication not associative";
      if (!W.equal(W.mul(a, W.add(b, c)), W.add(W.mul(a, b), W.mul(a, c)))) return "distributivity fails";
      if (!W.is_zero(W.add(a, W.neg(a)))) return "a + (-a) != 0 at " + W.format(a);
      if (!W.equal(W.mul(a, W.one()), a)) return "1 is not a unit element";
    }
    return {};
  });

  run("units", [&]() -> std::string {
    for (int i = 0; i < trials; ++i) {
      auto a = detail::random_vector(W, rng);
      auto inv = W.try_inverse(a);
      if (inv.has_value() != !F.is_zero(a.coords[0])) return "unit criterion fails at " + W.format(a);
      if (inv && !W.equal(W.mul(a, *inv), W.one())) return "a * a^-1 != 1 at " + W.format(a);
    }
    return {};
  });

  run("frobenius and verschiebung", [&]() -> std::string {
    const auto p = W.from_int(o.p);
    for (int i = 0; i < trials; ++i) {
      auto a = detail::random_vector(W, rng), b = detail::random_vector(W, rng);
      if (!W.equal(W.verschiebung(W.frobenius(a)), W.mul(p, a))) return "VF != p at " + W.format(a);
      if (!W.equal(W.frobenius(W.verschiebung(a)), W.mul(p, a))) return "FV != p at " + W.format(a);
      if (!W.equal(W.p_shift(a), W.mul(p, a))) return "p_shift != p at " + W.format(a);
      if (!W.equal(W.frobenius(W.mul(a, b)), W.mul(W.frobenius(a), W.frobenius(b)))) return "F is not multiplicative";
      if (!W.equal(W.add(W.verschiebung(a), W.verschiebung(b)), W.verschiebung(W.add(a, b)))) return "V is not additive";
      auto x = a.coords[0], y = b.coords[0];
      if (!W.equal(W.teichmuller(F.mul(x, y)), W.mul(W.teichmuller(x), W.teichmuller(y)))) return "Teichmueller lift is not multiplicative";
    }
    return {};
  });

  run("greenberg realization", [&]() -> std::string {
    WittPolyAlgebra<FiniteField> A(W, 2);
    auto P = A.parse_list("T1*T2 + T1^2; T1 - T2");
    auto m = greenberg::realize_poly_map(P, W);
    for (int i = 0; i < 30; ++i) {
      auto a = detail::random_vector(W, rng), b = detail::random_vector(W, rng);
      auto img = m.apply({a.coords, b.coords});
      if (img[0] != W.add(W.mul(a, b), W.mul(a, a)).coords) return "first component disagrees with Witt arithmetic";
      if (img[1] != W.sub(a, b).coords) return "second component disagrees with Witt arithmetic";
    }
    return {};
  });

  run("smith normal form", [&]() -> std::string {
    PadicField<FiniteField> K(WittRing<FiniteField>(F, std::max(o.N, 4)));
    for (int i = 0; i < 20; ++i) {
      std::uniform_int_distribution<int> ex(-2, 2);
      int e1 = ex(rng), e2 = ex(rng);
      if (e1 < e2) std::swap(e1, e2);
      auto g = grassmann::detail::random_sl(WittRing<FiniteField>(F, K.length()), 2, rng);
      PadicMatrix<FiniteField> u(2);
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) u[r].push_back(K.from_witt(g[r][c]));
      auto A = mat_mul(K, u, lattice::diagonal_powers(K, {e1, e2}));
      auto s = lattice::smith_normal_form(K, A);
      if (s.mu != std::vector<long>{e1, e2}) return "exponents differ for " + K.format_matrix(A);
      if (!mat_equal(K, mat_mul(K, mat_mul(K, s.U, lattice::diagonal_powers(K, s.mu)), s.V), A))
        return "U D V does not reconstruct " + K.format_matrix(A);
    }
    return {};
  });

  run("degeneration identity", [&]() -> std::string {
    PolyRing L(FiniteField(o.p, 1), {Variable{"t", 0, 0, true}});
    PadicField<PolyRing> K(WittRing<PolyRing>(L, 4));
    return lattice::degeneration_family(K, 1, -1).verified ? std::string() : std::string("A diag(p, p^-1) C != R");
  });

  run("hilbert function", [&]() -> std::string {
    const Cocharacter lambda{{1, -1}};
    auto I = hilbert::ideal_I_lambda(F, lambda, 3);
    auto h = hilbert::hilbert_function(I, 4);
    if (o.p == 2 && h != HilbertFunction{1, 1, 2, 2, 5}) return "HF of I_(1,-1) is " + hilbert::format_hf(h);
    WittRing<FiniteField> W3(F, 3);
    auto g = grassmann::detail::random_sl(W3, 2, rng);
    auto J = hilbert::act_on_ideal(g, I, W3);
    auto hj = hilbert::hilbert_function(J, 4);
    return hj == h ? std::string() : "HF changes under the group action: " + hilbert::format_hf(hj);
  });

  run("module stability", [&]() -> std::string {
    FiniteField Fp(o.p, 1);
    auto I = hilbert::ideal_I_lambda(Fp, Cocharacter{{1, -1}}, 2, true);
    if (!hilbert::is_module_stable(I)) return "I_(1,-1) is not stable";
    auto bad = hilbert::parse_ideal("ring p=" + std::to_string(o.p) + " n=1 N=2\nx[1,1]");
    if (hilbert::is_module_stable(bad)) return "<x[1,1]> passes the stability test";
    return {};
  });

  run("flat limit", [&]() -> std::string {
    const auto P = std::to_string(o.p);
    auto fam = hilbert::parse_ideal("ring p=" + P + " n=2 N=2 param=t\nx[1,0] - t*x[2,0]\nx[2,0]^" + P);
    auto lim = hilbert::flat_limit(fam);
    auto expect = hilbert::parse_ideal("ring p=" + P + " n=2 N=2\nx[1,0]\nx[2,0]^" + P);
    if (lim.same_ideal(expect)) return {};
    return "limit is " + lim.format_basis();
  });

  run("cell tables", [&]() -> std::string {
    auto a = grassmann::witt_cell_table(2, o.p, 1, o.jobs);
    auto b = grassmann::zadic_cell_table(2, o.p, 1, o.jobs);
    return a == b ? std::string() : "witt " + a.format() + " vs z-adic " + b.format();
  });

  run("orbit closure image", [&]() -> std::string {
    auto r = grassmann::image_check(Cocharacter{{1, -1}}, o.p, 10, o.seed);
    return r.ok() ? std::string() : "image check fails: " + r.to_json().dump();
  });

  return out;
}

/// Prints one line per property; exit status 0 iff all pass.
inline int run(const Options& o, std::ostream& os, bool json) {
  auto results = run_all(o);
  bool all = true;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    if (json) {
      arr.push_back({{"property", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
    } else {
      os << (r.pass ? "PASS " : "FAIL ") << r.name;
      if (!r.detail.empty()) os << "  (" << r.detail << ")";
      os << "\n";
    }
  }
  if (json) os << nlohmann::json{{"p", o.p}, {"N", o.N}, {"results", arr}, {"ok", all}}.dump(2) << "\n";
  return all ? 0 : 1;
}

}  // namespace selftest
