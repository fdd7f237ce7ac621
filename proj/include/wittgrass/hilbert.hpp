#pragma once

#include <map>
#include <numeric>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wittgrass/errors.hpp"
#include "wittgrass/greenberg.hpp"
#include "wittgrass/groebner.hpp"
#include "wittgrass/lattice.hpp"
#include "wittgrass/polynomial.hpp"
#include "wittgrass/witt.hpp"

namespace wittgrass {

/// Homogeneous ideal in F_q[x_{i,j} : 1 <= i <= n, 0 <= j < N] with
/// deg x_{i,j} = p^j. The ring may carry extra weight-0 parameters after the
/// coordinates (a Laurent variable t for families).
class GradedIdeal {
 public:
  GradedIdeal(PolyRing ring, int n, int N, std::vector<Polynomial> gens)
      : ring_(std::move(ring)), n_(n), N_(N), cache_(std::make_shared<Cache>()) {
    if (static_cast<int>(ring_.num_vars()) < n * N) throw InvalidArgument("ring has fewer than n*N coordinates");
    for (int i = 1; i <= n; ++i)
      for (int j = 0; j < N; ++j)
        if (ring_.var((i - 1) * N + j).name != coord_name("x", i, j))
          throw InvalidArgument("coordinate " + coord_name("x", i, j) + " missing or out of order");
    for (auto& g : gens) {
      if (!ring_.homogeneous_degree(g)) throw InvalidArgument("generator " + ring_.format(g) + " is not homogeneous");
      if (!g.is_zero()) gens_.push_back(std::move(g));
    }
  }

  const PolyRing& ring() const { return ring_; }
  int n() const { return n_; }
  int length() const { return N_; }
  unsigned prime() const { return ring_.characteristic(); }
  const std::vector<Polynomial>& generators() const { return gens_; }
  bool has_parameters() const { return static_cast<int>(ring_.num_vars()) > n_ * N_; }

  /// Reduced Groebner basis, computed once.
  const std::vector<Polynomial>& basis(const GroebnerLimits& limits = {}) const {
    if (!cache_->basis) cache_->basis = groebner::basis(ring_, gens_, limits);
    return *cache_->basis;
  }

  bool contains(const Polynomial& f) const { return groebner::normal_form(ring_, f, basis()).is_zero(); }
  bool same_ideal(const GradedIdeal& o) const {
    return ring_.same_variables(o.ring_) && basis() == o.basis();
  }

  std::string format() const {
    std::string out = "<";
    for (std::size_t i = 0; i < gens_.size(); ++i) out += (i ? ", " : "") + ring_.format(gens_[i]);
    return out + ">";
  }
  std::string format_basis() const {
    std::string out = "<";
    const auto& G = basis();
    for (std::size_t i = 0; i < G.size(); ++i) out += (i ? ", " : "") + ring_.format(G[i]);
    return out + ">";
  }

 private:
  struct Cache {
    std::optional<std::vector<Polynomial>> basis;
  };
  PolyRing ring_;
  int n_, N_;
  std::vector<Polynomial> gens_;
  std::shared_ptr<Cache> cache_;
};

/// h(0), ..., h(bound).
using HilbertFunction = std::vector<long>;

namespace hilbert {

inline PolyRing coordinate_ring(const FiniteField& F, int n, int N, std::vector<Variable> params = {}) {
  auto vars = coordinate_variables("x", n, N, F.characteristic());
  for (auto& v : params) vars.push_back(std::move(v));
  return PolyRing(F, std::move(vars));
}

inline long default_bound(unsigned p, int N) {
  long b = 4;
  for (int j = 1; j < N; ++j) b *= p;
  return b;
}

/// <x_{i,j} : j < c_i> for a vector of column depths c.
inline GradedIdeal coordinate_ideal(const FiniteField& F, const std::vector<int>& depth, int N) {
  const int n = static_cast<int>(depth.size());
  auto R = coordinate_ring(F, n, N);
  std::vector<Polynomial> gens;
  for (int i = 1; i <= n; ++i) {
    if (depth[i - 1] > N) throw WindowTooSmall("Witt length " + std::to_string(N) + " cannot hold depth " + std::to_string(depth[i - 1]));
    for (int j = 0; j < depth[i - 1]; ++j) gens.push_back(R.variable(coord_name("x", i, j)));
  }
  return GradedIdeal(R, n, N, std::move(gens));
}

/// I_lambda = <x_{i,j} : i < n, j < lambda~_i>. Needs N > lambda~_1 unless
/// `allow_boundary` admits N = lambda~_1.
inline GradedIdeal ideal_I_lambda(const FiniteField& F, const Cocharacter& lambda, int N, bool allow_boundary = false) {
  if (!lambda.is_dominant()) throw NotDominant(lambda.format() + " is not dominant");
  if (lambda.sum() != 0) throw InvalidArgument(lambda.format() + " does not sum to zero");
  auto t = lambda.tilde();
  const int need = allow_boundary ? t[0] : t[0] + 1;
  if (N < need) throw WindowTooSmall("I_lambda for " + lambda.format() + " needs N >= " + std::to_string(need));
  return coordinate_ideal(F, t, N);
}

/// Ideal of diag(p^{lambda + w}) W^n mod p^N, i.e. V_lambda placed in the window w.
inline GradedIdeal shifted_ideal(const FiniteField& F, const Cocharacter& lambda, int window, int N) {
  if (!lambda.is_dominant()) throw NotDominant(lambda.format() + " is not dominant");
  std::vector<int> depth;
  for (int x : lambda.v) {
    if (x + window < 0) throw WindowTooSmall(lambda.format() + " does not fit in window " + std::to_string(window));
    depth.push_back(x + window);
  }
  return coordinate_ideal(F, depth, N);
}

namespace detail {

using Series = std::map<long, long>;

inline void add_into(Series& a, const Series& b, long shift, long sign) {
  for (const auto& [d, c] : b) {
    auto& x = a[d + shift];
    x += sign * c;
    if (x == 0) a.erase(d + shift);
  }
}

inline std::vector<Exponents> minimalize(std::vector<Exponents> gens) {
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  std::vector<Exponents> out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    bool redundant = false;
    for (std::size_t k = 0; k < gens.size() && !redundant; ++k)
      if (k != i && groebner::divides(gens[k], gens[i])) redundant = true;
    if (!redundant) out.push_back(gens[i]);
  }
  return out;
}

// Numerator K(t) of the Hilbert series of S / <gens>, where the series is K(t) / prod (1 - t^{w_i}).
inline Series numerator(const PolyRing& R, std::vector<Exponents> gens) {
  gens = minimalize(std::move(gens));
  Series result{{0, 1}};
  if (gens.empty()) return result;
  bool pairwise_coprime = true;
  for (std::size_t i = 0; i < gens.size() && pairwise_coprime; ++i)
    for (std::size_t k = i + 1; k < gens.size() && pairwise_coprime; ++k)
      if (!groebner::coprime(gens[i], gens[k])) pairwise_coprime = false;
  if (pairwise_coprime) {
    for (const auto& m : gens) {
      Series next = result;
      add_into(next, result, R.weighted_degree(m), -1);
      result = std::move(next);
    }
    return result;
  }
  Exponents m = gens.back();
  gens.pop_back();
  std::vector<Exponents> colon;
  for (const auto& g : gens) {
    Exponents q(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) q[i] = std::max(0, g[i] - m[i]);
    colon.push_back(std::move(q));
  }
  result = numerator(R, gens);
  add_into(result, numerator(R, std::move(colon)), R.weighted_degree(m), -1);
  return result;
}

}  // namespace detail

/// h(a) for a = 0..bound, from the leading-term ideal of the Groebner basis.
inline HilbertFunction hilbert_function(const GradedIdeal& I, long bound) {
  if (bound < 0) throw InvalidArgument("degree bound must be non-negative");
  const auto& R = I.ring();
  if (I.has_parameters()) throw InvalidArgument("Hilbert functions need an ideal over the coordinate ring alone");
  std::vector<Exponents> leads;
  for (const auto& g : I.basis()) leads.push_back(g.terms.front().exps);
  auto K = detail::numerator(R, std::move(leads));
  std::vector<long> h(bound + 1, 0);
  for (const auto& [d, c] : K)
    if (d <= bound) h[d] += c;
  for (std::size_t v = 0; v < R.num_vars(); ++v) {
    const long w = R.var(v).weight;
    if (w <= 0) throw InvalidArgument("variable " + R.var(v).name + " has non-positive weight");
    for (long a = w; a <= bound; ++a) h[a] += h[a - w];
  }
  return h;
}

/// Hilbert functions in the common window are compared pointwise.
inline bool dominates(const HilbertFunction& big, const HilbertFunction& small) {
  for (std::size_t a = 0; a < std::min(big.size(), small.size()); ++a)
    if (big[a] < small[a]) return false;
  return true;
}

inline std::string format_hf(const HilbertFunction& h) {
  std::string out;
  for (std::size_t a = 0; a < h.size(); ++a) out += (a ? "," : "") + std::to_string(h[a]);
  return out;
}

namespace detail {

inline std::vector<Polynomial> reindex_all(const PolyRing& from, const std::vector<Polynomial>& fs, const PolyRing& to, std::size_t offset) {
  std::vector<std::size_t> map(from.num_vars());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = i + offset;
  std::vector<Polynomial> out;
  for (const auto& f : fs) out.push_back(from.reindex_into(f, to, map));
  return out;
}

}  // namespace detail

struct StabilityReport {
  bool stable = true;
  std::string failure;  // "addition", "scalar" or "negation" with the offending generator
};

/// Checks that V(I) is closed under Witt addition, scalar multiplication by a
/// generic Witt vector and negation, via Groebner normal forms.
inline StabilityReport module_stability(const GradedIdeal& I) {
  if (I.has_parameters()) throw InvalidArgument("stability test needs an ideal over the coordinate ring alone");
  const auto& R = I.ring();
  const auto& F = R.field();
  const int n = I.n(), N = I.length();
  const unsigned p = I.prime();
  const auto& G = I.basis();
  StabilityReport report;
  auto fail = [&](const char* what, const Polynomial& f) {
    report.stable = false;
    report.failure = std::string(what) + ": " + R.format(f);
    return report;
  };

  // Addition: f(x' + x'') must lie in I(x') + I(x''); the union of Groebner
  // bases in disjoint variables is a Groebner basis.
  {
    auto vars = coordinate_variables("x'", n, N, p);
    for (auto& v : coordinate_variables("x''", n, N, p)) vars.push_back(v);
    PolyRing R2(F, vars);
    WittRing<PolyRing> W2(R2, N);
    auto a = greenberg::generic_vectors(R2, n, N, "x'");
    auto b = greenberg::generic_vectors(R2, n, N, "x''");
    std::vector<Polynomial> images;
    for (int i = 0; i < n; ++i)
      for (const auto& c : W2.add(a[i], b[i]).coords) images.push_back(c);
    auto G2 = detail::reindex_all(R, G, R2, 0);
    for (auto& g : detail::reindex_all(R, G, R2, static_cast<std::size_t>(n * N))) G2.push_back(std::move(g));
    for (const auto& f : G)
      if (!groebner::normal_form(R2, R.substitute(f, images, R2), G2).is_zero()) return fail("addition", f);
  }
  // Scalar multiplication by a generic (alpha_0, ..., alpha_{N-1}), deg alpha_j = p^j.
  {
    std::vector<Variable> vars;
    long w = 1;
    for (int j = 0; j < N; ++j, w *= p) vars.push_back({"alpha[" + std::to_string(j) + "]", w, 0, false});
    for (const auto& v : coordinate_variables("x", n, N, p)) vars.push_back(v);
    PolyRing R3(F, vars);
    WittRing<PolyRing> W3(R3, N);
    WittVector<PolyRing> alpha;
    for (int j = 0; j < N; ++j) alpha.coords.push_back(R3.variable(static_cast<std::size_t>(j)));
    auto x = greenberg::generic_vectors(R3, n, N, "x");
    std::vector<Polynomial> images;
    for (int i = 0; i < n; ++i)
      for (const auto& c : W3.mul(alpha, x[i]).coords) images.push_back(c);
    auto G3 = detail::reindex_all(R, G, R3, static_cast<std::size_t>(N));
    for (const auto& f : G)
      if (!groebner::normal_form(R3, R.substitute(f, images, R3), G3).is_zero()) return fail("scalar", f);
  }
  // Negation.
  {
    WittRing<PolyRing> W(R, N);
    auto x = greenberg::generic_vectors(R, n, N, "x");
    std::vector<Polynomial> images;
    for (int i = 0; i < n; ++i)
      for (const auto& c : W.neg(x[i]).coords) images.push_back(c);
    for (const auto& f : G)
      if (!groebner::normal_form(R, R.substitute(f, images, R), G).is_zero()) return fail("negation", f);
  }
  return report;
}

inline bool is_module_stable(const GradedIdeal& I) { return module_stability(I).stable; }

/// g . I = I o g^{-1}, so that V(g . I) = g V(I). Over Laurent scalars the
/// result lives in the coordinate ring extended by the scalar variables.
template <class Ring>
GradedIdeal act_on_ideal(const Matrix<WittVector<Ring>>& g, const GradedIdeal& I, const WittRing<Ring>& W) {
  const int n = I.n(), N = I.length();
  if (static_cast<int>(g.size()) != n || W.length() != N) throw LengthMismatch("action matrix does not match the ideal's ambient space");
  if (W.prime() != I.prime()) throw InvalidArgument("action matrix and ideal have different characteristic");
  auto det = mat_det(W, g);
  if (!W.is_unit(det)) throw NonUnit("action matrix is not invertible over W_N");
  auto ginv = mat_inverse(W, g);
  auto m = greenberg::realize_action(ginv, W, "x");
  const auto& R = I.ring();
  std::vector<Polynomial> images;
  for (std::size_t v = 0; v < R.num_vars(); ++v) {
    if (static_cast<int>(v) < n * N) images.push_back(m.comps[v / N][v % N]);
    else images.push_back(m.ring.variable(R.var(v).name));
  }
  std::vector<Polynomial> gens;
  for (const auto& f : I.generators()) gens.push_back(R.substitute(f, images, m.ring));
  return GradedIdeal(m.ring, n, N, std::move(gens));
}

/// I k[t, t^{-1}][x] intersected with k[t][x], by eliminating s from
/// <I, s t - 1>. The result lives in the same variables with t polynomial.
inline GradedIdeal saturate_parameter(const GradedIdeal& I, std::string_view param = "t", const GroebnerLimits& limits = {}) {
  const auto& R = I.ring();
  const auto ti = R.index_of(param);
  if (!ti) throw InvalidArgument("family ring has no parameter " + std::string(param));
  std::vector<Variable> vars = R.vars();
  vars[*ti].laurent = false;
  vars[*ti].weight = 0;
  PolyRing P(R.field(), vars);
  vars.push_back({"s_", 0, 1, false});
  PolyRing S(R.field(), vars);
  const std::size_t si = vars.size() - 1;
  std::vector<std::size_t> map(R.num_vars());
  std::iota(map.begin(), map.end(), 0);
  std::vector<Polynomial> gens;
  for (const auto& f : I.generators()) {
    auto g = R.reindex_into(f, S, map);
    const int k = R.min_degree_in(f, *ti);
    if (k < 0) {
      Exponents e = S.unit_exponents();
      e[*ti] = -k;
      g = S.mul_term(g, e, 1);
    }
    gens.push_back(std::move(g));
  }
  gens.push_back(S.sub(S.mul(S.variable(si), S.variable(*ti)), S.one()));
  std::vector<Polynomial> G;
  try {
    G = groebner::basis(S, gens, limits);
  } catch (const ResourceGuard& e) {
    throw SaturationGuard(std::string("saturation by ") + std::string(param) + " did not finish: " + e.what());
  }
  std::vector<std::size_t> back(S.num_vars());
  std::iota(back.begin(), back.end(), 0);
  back[si] = 0;  // s does not occur in the kept elements
  std::vector<Polynomial> kept;
  for (const auto& g : G)
    if (!S.involves(g, si)) kept.push_back(S.reindex_into(g, P, back));
  return GradedIdeal(P, I.n(), I.length(), std::move(kept));
}

/// The fiber at t = 0 of the closure of the family over t != 0.
inline GradedIdeal flat_limit(const GradedIdeal& I, std::string_view param = "t", const GroebnerLimits& limits = {}) {
  auto J = saturate_parameter(I, param, limits);
  const auto& P = J.ring();
  const auto ti = P.require_index(param);
  std::vector<Variable> target_vars;
  for (std::size_t v = 0; v < P.num_vars(); ++v)
    if (v != ti) target_vars.push_back(P.var(v));
  PolyRing T(P.field(), target_vars);
  std::vector<Polynomial> images;
  for (std::size_t v = 0, k = 0; v < P.num_vars(); ++v) images.push_back(v == ti ? T.zero() : T.variable(k++));
  std::vector<Polynomial> special;
  for (const auto& g : J.generators()) special.push_back(P.substitute(g, images, T));
  GradedIdeal out(T, I.n(), I.length(), std::move(special));
  out.basis(limits);
  return out;
}

/// The fiber at t = c (c a nonzero field element).
inline GradedIdeal specialize(const GradedIdeal& I, FiniteField::Elem c, std::string_view param = "t") {
  const auto& R = I.ring();
  const auto ti = R.require_index(param);
  if (c == 0) throw InvalidArgument("specialization needs a nonzero value; use flat_limit at 0");
  std::vector<Variable> target_vars;
  for (std::size_t v = 0; v < R.num_vars(); ++v)
    if (v != ti) target_vars.push_back(R.var(v));
  PolyRing T(R.field(), target_vars);
  std::vector<Polynomial> images;
  for (std::size_t v = 0, k = 0; v < R.num_vars(); ++v) images.push_back(v == ti ? T.constant(c) : T.variable(k++));
  std::vector<Polynomial> gens;
  for (const auto& f : I.generators()) {
    // Negative powers of t become powers of c^{-1}.
    Polynomial acc;
    for (const auto& t : f.terms) {
      Term m = t;
      int e = m.exps[ti];
      m.exps[ti] = 0;
      auto scale = e >= 0 ? R.field().pow(c, e) : R.field().pow(R.field().inverse(c), -e);
      m.coeff = R.field().mul(m.coeff, scale);
      acc = R.add(acc, Polynomial{{m}});
    }
    gens.push_back(R.substitute(acc, images, T));
  }
  return GradedIdeal(T, I.n(), I.length(), std::move(gens));
}

// ---- text format ---------------------------------------------------------

/// Header `ring p=2 q=4 n=2 N=2` (optionally `param=t` for a Laurent
/// parameter), then one generator per line; `#` starts a comment.
inline GradedIdeal parse_ideal(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<PolyRing> R;
  int n = 0, N = 0;
  std::vector<Polynomial> gens;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = wittgrass::detail::trim(line);
    if (line.empty()) continue;
    if (!R) {
      std::istringstream hs(line);
      std::string word;
      hs >> word;
      if (word != "ring") throw ParseError("ideal file must start with 'ring p=.. q=.. n=.. N=..'");
      std::map<std::string, std::string> kv;
      while (hs >> word) {
        auto eq = word.find('=');
        if (eq == std::string::npos) throw ParseError("bad header field '" + word + "'");
        kv[word.substr(0, eq)] = word.substr(eq + 1);
      }
      try {
        const unsigned p = static_cast<unsigned>(std::stoul(kv.at("p")));
        const unsigned q = kv.count("q") ? static_cast<unsigned>(std::stoul(kv.at("q"))) : p;
        n = std::stoi(kv.at("n"));
        N = std::stoi(kv.at("N"));
        auto F = FiniteField::of_order(q);
        if (F.characteristic() != p) throw ParseError("q is not a power of p");
        std::vector<Variable> params;
        if (kv.count("param")) params.push_back({kv.at("param"), 0, 0, true});
        R = coordinate_ring(F, n, N, params);
      } catch (const std::out_of_range&) {
        throw ParseError("ideal header needs p, n and N");
      } catch (const std::invalid_argument&) {
        throw ParseError("ideal header has a non-numeric field");
      }
      continue;
    }
    gens.push_back(R->parse(line));
  }
  if (!R) throw ParseError("empty ideal file");
  return GradedIdeal(*R, n, N, std::move(gens));
}

inline std::string format_ideal(const GradedIdeal& I) {
  const auto& R = I.ring();
  std::string out = "ring p=" + std::to_string(I.prime()) + " q=" + std::to_string(R.field().order()) + " n=" +
                    std::to_string(I.n()) + " N=" + std::to_string(I.length());
  if (I.has_parameters()) out += " param=" + R.var(I.n() * I.length()).name;
  out += "\n";
  for (const auto& g : I.generators()) out += R.format(g) + "\n";
  return out;
}

}  // namespace hilbert

}  // namespace wittgrass
