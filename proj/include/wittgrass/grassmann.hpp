#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "wittgrass/errors.hpp"
#include "wittgrass/hilbert.hpp"
#include "wittgrass/lattice.hpp"
#include "wittgrass/zadic.hpp"

namespace wittgrass {

/// Number of special lattices per cell, as found by one enumeration.
struct CellTable {
  std::map<Cocharacter, long> cells;
  std::string provenance;  // "witt" or "z-adic"

  long total() const {
    long t = 0;
    for (const auto& [c, k] : cells) t += k;
    return t;
  }
  bool operator==(const CellTable& o) const { return cells == o.cells; }

  /// `{(0,0): 1, (1,-1): 6}`
  std::string format() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [c, k] : cells) {
      out += (first ? "" : ", ") + c.format() + ": " + std::to_string(k);
      first = false;
    }
    return out + "}";
  }
  nlohmann::json to_json() const {
    nlohmann::json cells_json = nlohmann::json::object();
    for (const auto& [c, k] : cells) cells_json[c.format()] = k;
    return {{"provenance", provenance}, {"total", total()}, {"cells", cells_json}};
  }
};

/// F_q-points of V(I) and the special lattice they cut out.
struct PointsLattice {
  std::size_t points = 0;
  std::vector<int> diag;  // echelon exponents of V(I) inside W_N^n (N = zero column)
  long Lambda = 0;
  int window = 0;
  lattice::Lattice lattice;
  Cocharacter cell;
};

namespace grassmann {

inline CellTable witt_cell_table(int n, unsigned q, int window, int jobs = 1) {
  CellTable t{{}, "witt"};
  for (const auto& [L, c] : lattice::enumerate_lattices(n, q, window, jobs)) ++t.cells[c];
  return t;
}

inline CellTable zadic_cell_table(int n, unsigned q, int window, int jobs = 1) {
  CellTable t{{}, "z-adic"};
  for (const auto& [mu, k] : zadic::cell_table(n, q, window, jobs)) t.cells[Cocharacter{mu}] = k;
  return t;
}

/// Enumerates V(I)(F_q) inside W_N(F_q)^n, checks it is a submodule and returns
/// p^{-Lambda/n} times its preimage in W^n. Lambda defaults to the colength of
/// the point module.
inline PointsLattice points_lattice(const GradedIdeal& I, std::optional<long> Lambda = {}, bool check_stable = true) {
  if (I.has_parameters()) throw InvalidArgument("points_lattice needs an ideal without parameters");
  const auto& R = I.ring();
  const auto& F = R.field();
  const unsigned q = F.order();
  const int n = I.n(), N = I.length();
  const double ring_d = std::pow(static_cast<double>(q), N);
  const double total_d = std::pow(ring_d, n);
  if (ring_d > 1024 || total_d > static_cast<double>(1 << 20))
    throw SizeGuard("W_" + std::to_string(N) + "(F_" + std::to_string(q) + ")^" + std::to_string(n) + " has more than 2^20 points");
  const std::size_t RS = static_cast<std::size_t>(ring_d), M = static_cast<std::size_t>(total_d);
  if (check_stable) {
    auto report = hilbert::module_stability(I);
    if (!report.stable) throw NotStable("ideal is not module-stable (" + report.failure + ")");
  }
  WittRing<FiniteField> W(F, N);

  auto decode = [&](std::size_t idx) {
    WittVector<FiniteField> x = W.zero(N);
    for (int k = 0; k < N; ++k) {
      x.coords[k] = static_cast<FiniteField::Elem>(idx % q);
      idx /= q;
    }
    return x;
  };
  auto encode = [&](const WittVector<FiniteField>& x) {
    std::size_t idx = 0;
    for (int k = N - 1; k >= 0; --k) idx = idx * q + x.coords[k];
    return idx;
  };
  std::vector<std::uint32_t> add_t(RS * RS), mul_t(RS * RS);
  for (std::size_t a = 0; a < RS; ++a)
    for (std::size_t b = 0; b < RS; ++b) {
      add_t[a * RS + b] = static_cast<std::uint32_t>(encode(W.add(decode(a), decode(b))));
      mul_t[a * RS + b] = static_cast<std::uint32_t>(encode(W.mul(decode(a), decode(b))));
    }
  auto comp = [&](std::size_t v, int i) {
    for (int k = 0; k < i; ++k) v /= RS;
    return v % RS;
  };
  auto join = [&](const std::vector<std::size_t>& c) {
    std::size_t v = 0;
    for (int i = n - 1; i >= 0; --i) v = v * RS + c[i];
    return v;
  };

  std::vector<std::size_t> points;
  std::vector<FiniteField::Elem> values(static_cast<std::size_t>(n * N));
  for (std::size_t v = 0; v < M; ++v) {
    for (int i = 0; i < n; ++i) {
      std::size_t c = comp(v, i);
      for (int j = 0; j < N; ++j) {
        values[i * N + j] = static_cast<FiniteField::Elem>(c % q);
        c /= q;
      }
    }
    bool zero = true;
    for (const auto& f : I.generators())
      if (R.evaluate(f, values) != 0) {
        zero = false;
        break;
      }
    if (zero) points.push_back(v);
  }
  if (points.empty() || points.front() != 0) throw NotStable("V(I) does not contain the origin");

  // Greedy generators: the span of V(I) equals V(I) exactly when V(I) is a submodule.
  std::vector<char> in_span(M, 0);
  std::vector<std::size_t> span{0}, gens;
  in_span[0] = 1;
  std::vector<std::size_t> c(n);
  for (std::size_t v : points) {
    if (in_span[v]) continue;
    gens.push_back(v);
    const std::size_t before = span.size();
    for (std::size_t r = 1; r < RS; ++r) {
      for (int i = 0; i < n; ++i) c[i] = mul_t[r * RS + comp(v, i)];
      const std::size_t s = join(c);
      for (std::size_t e = 0; e < before; ++e) {
        for (int i = 0; i < n; ++i) c[i] = add_t[comp(span[e], i) * RS + comp(s, i)];
        const std::size_t u = join(c);
        if (!in_span[u]) {
          in_span[u] = 1;
          span.push_back(u);
        }
      }
    }
    if (span.size() > points.size()) break;
  }
  if (span.size() != points.size())
    throw NotStable("F_q-points of V(I) are not closed under the W_N action (" + std::to_string(points.size()) +
                    " points, span has " + std::to_string(span.size()) + ")");

  std::vector<std::vector<WittVector<FiniteField>>> cols;
  for (std::size_t g : gens) {
    std::vector<WittVector<FiniteField>> col;
    for (int i = 0; i < n; ++i) col.push_back(decode(comp(g, i)));
    cols.push_back(std::move(col));
  }
  auto E = lattice::column_echelon(W, n, std::move(cols));

  PointsLattice out;
  out.points = points.size();
  out.diag = E.diag;
  const long colength = std::accumulate(E.diag.begin(), E.diag.end(), 0L);
  out.Lambda = Lambda.value_or(colength);
  if (out.Lambda != colength)
    throw DetValuationMismatch("point module has colength " + std::to_string(colength) + ", expected Lambda = " + std::to_string(out.Lambda));
  if (out.Lambda % n != 0) throw InvalidArgument("Lambda = " + std::to_string(out.Lambda) + " is not a multiple of n");
  const long s = out.Lambda / n;
  out.window = static_cast<int>(std::max(s, N - s));

  // The preimage L' of V(I) in W^n is spanned by the echelon columns lifted
  // with zero digits (a zero column lifts to p^N e_j). Then
  // p^w L / p^{2w} = p^{w-s} L' mod p^{2w}.
  const int m = 2 * out.window;
  WittRing<FiniteField> Wm(F, m);
  auto times_p = [&](WittVector<FiniteField> x, long k) {
    for (long i = 0; i < k; ++i) x = Wm.p_shift(x);
    return x;
  };
  auto resize = [&](const WittVector<FiniteField>& x) {
    WittVector<FiniteField> y = Wm.zero(m);
    for (int k = 0; k < std::min(m, x.length()); ++k) y.coords[k] = x.coords[k];
    return y;
  };
  std::vector<std::vector<WittVector<FiniteField>>> window_cols(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (E.diag[j] >= N)
        window_cols[j].push_back(i == j ? times_p(Wm.one(m), N + out.window - s) : Wm.zero(m));
      else
        window_cols[j].push_back(times_p(resize(E.columns[j][i]), out.window - s));
    }
  out.lattice = lattice::echelon(Wm, n, out.window, std::move(window_cols));

  // Elementary divisors of L' from Q = W_N^n / V: |p^k Q| = q^{n(N-k)} / |V cap p^k W_N^n|,
  // and #{i : c_i > k} = log_q |p^k Q| - log_q |p^{k+1} Q|.
  auto log_q = [&](std::size_t x) { return static_cast<long>(std::llround(std::log(static_cast<double>(x)) / std::log(static_cast<double>(q)))); };
  std::vector<long> level(N + 1, 0);
  for (std::size_t v : points) {
    int val = N;
    for (int i = 0; i < n; ++i) {
      auto x = comp(v, i);
      int k = 0;
      while (k < N && x % q == 0) {
        x /= q;
        ++k;
      }
      val = std::min(val, k);
    }
    for (int k = 0; k <= val; ++k) ++level[k];
  }
  std::vector<long> quotient(N + 2, 0);
  for (int k = 0; k <= N; ++k) quotient[k] = static_cast<long>(n) * (N - k) - log_q(static_cast<std::size_t>(level[k]));
  std::vector<int> divisors;
  for (int k = 0; k < N; ++k) {
    const long exactly = (quotient[k] - quotient[k + 1]) - (quotient[k + 1] - quotient[k + 2]);
    for (long r = 0; r < exactly; ++r) divisors.push_back(k + 1);
  }
  divisors.resize(n, 0);
  for (int c : divisors) out.cell.v.push_back(static_cast<int>(c - s));
  std::sort(out.cell.v.rbegin(), out.cell.v.rend());
  return out;
}

/// Lattice of diag(p^lambda) W^n in the given window.
inline lattice::Lattice standard_cell_lattice(const FiniteField& F, const Cocharacter& lambda, int window) {
  const int n = lambda.size(), m = 2 * window;
  if (window == 0) {
    if (lambda != Cocharacter{std::vector<int>(n, 0)}) throw WindowTooSmall(lambda.format() + " does not fit in window 0");
    lattice::Lattice L;
    L.n = n;
    L.diag.assign(n, 0);
    L.H.assign(n, std::vector<std::vector<FiniteField::Elem>>(n));
    return L;
  }
  WittRing<FiniteField> Wm(F, m);
  std::vector<std::vector<WittVector<FiniteField>>> cols(n, std::vector<WittVector<FiniteField>>(n, Wm.zero(m)));
  for (int i = 0; i < n; ++i) {
    const int e = lambda[i] + window;
    if (e < 0 || e > m) throw WindowTooSmall(lambda.format() + " does not fit in window " + std::to_string(window));
    auto x = Wm.one(m);
    for (int k = 0; k < e; ++k) x = Wm.p_shift(x);
    cols[i][i] = x;
  }
  return lattice::echelon(Wm, n, window, std::move(cols));
}

// ---- image check ---------------------------------------------------------

struct FamilyStep {
  Cocharacter start;       // cell of the generic fiber
  std::vector<int> exps;   // diagonal exponents of the starting point module
  int first = 0, second = 0;  // coordinates the family acts on (0-based)
  int e = 0, d = 0;
  std::string identity;    // "verified", "failed" or "skipped"
  std::vector<Cocharacter> generic_cells;
  std::optional<Cocharacter> limit_cell;
  std::string limit_ideal;
  std::string error;
};

struct NonInjectivity {
  std::string lattice;
  Cocharacter cell;
  std::vector<std::string> ideals;
  std::string hilbert_function;
};

struct ImageReport {
  Cocharacter lambda;
  unsigned q = 2;
  int N = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<Cocharacter> expected;
  std::map<Cocharacter, long> observed;
  std::set<Cocharacter> realized;
  std::vector<FamilyStep> families;
  bool all_observed_below = true;
  bool all_realized = true;
  std::optional<NonInjectivity> witness;

  bool ok() const { return all_observed_below && all_realized; }

  nlohmann::json to_json() const {
    using nlohmann::json;
    json cells = json::array(), obs = json::object(), real = json::array(), fams = json::array();
    for (const auto& c : expected) cells.push_back(c.format());
    for (const auto& [c, k] : observed) obs[c.format()] = k;
    for (const auto& c : realized) real.push_back(c.format());
    for (const auto& f : families) {
      json g = json::array();
      for (const auto& c : f.generic_cells) g.push_back(c.format());
      json exps = f.exps;
      fams.push_back({{"start", f.start.format()},
                      {"exponents", exps},
                      {"coordinates", {f.first + 1, f.second + 1}},
                      {"e", f.e},
                      {"d", f.d},
                      {"identity", f.identity},
                      {"generic_cells", g},
                      {"limit_cell", f.limit_cell ? json(f.limit_cell->format()) : json(nullptr)},
                      {"limit_ideal", f.limit_ideal},
                      {"error", f.error}});
    }
    json w = nullptr;
    if (witness)
      w = {{"lattice", witness->lattice},
           {"cell", witness->cell.format()},
           {"ideals", witness->ideals},
           {"hilbert_function", witness->hilbert_function}};
    return {{"lambda", lambda.format()},
            {"q", q},
            {"N", N},
            {"samples", samples},
            {"seed", seed},
            {"expected_cells", cells},
            {"observed", obs},
            {"realized", real},
            {"families", fams},
            {"all_observed_below", all_observed_below},
            {"all_realized", all_realized},
            {"non_injectivity", w},
            {"ok", ok()}};
  }
};

namespace detail {

inline Matrix<WittVector<FiniteField>> random_sl(const WittRing<FiniteField>& W, int n, std::mt19937_64& rng) {
  const unsigned q = W.scalars().order();
  std::uniform_int_distribution<unsigned> digit(0, q - 1);
  while (true) {
    Matrix<WittVector<FiniteField>> g(n);
    for (auto& row : g)
      for (int j = 0; j < n; ++j) {
        WittVector<FiniteField> x = W.zero();
        for (auto& c : x.coords) c = digit(rng);
        row.push_back(x);
      }
    auto det = mat_det(W, g);
    if (!W.is_unit(det)) continue;
    auto inv = W.inverse(det);
    for (auto& row : g) row[0] = W.mul(row[0], inv);
    return g;
  }
}

/// The family matrix on coordinates (a, b) over W_N(F_q[t, t^{-1}]), taken
/// from the degeneration identity when its precision is within reach.
inline Matrix<WittVector<PolyRing>> family_matrix(const PolyRing& L, int n, int N, int a, int b, int e, int d, std::string& identity) {
  WittRing<PolyRing> WL(L, N);
  Matrix<WittVector<PolyRing>> A2;
  try {
    PadicField<PolyRing> K(WittRing<PolyRing>(L, std::max(N, e - d + 2)));
    auto fam = lattice::degeneration_family(K, e, d);
    identity = fam.verified ? "verified" : "failed";
    A2.assign(2, {});
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) A2[i].push_back(K.to_witt(fam.A[i][j], N));
  } catch (const LimitError&) {
    identity = "skipped";
    const auto t = L.require_index("t");
    auto tau = [&](int k) { return WL.teichmuller(L.variable(t, k)); };
    A2 = {{WL.zero(), tau(1)}, {WL.neg(tau(-1)), WL.times_p(tau(-1))}};
  }
  auto A = mat_identity(WL, n);
  A[a][a] = A2[0][0];
  A[a][b] = A2[0][1];
  A[b][a] = A2[1][0];
  A[b][b] = A2[1][1];
  return A;
}

}  // namespace detail

/// Samples the orbit of I_lambda and the one-parameter degenerations of its
/// point lattice, classifying every ideal met through points_lattice.
inline ImageReport image_check(const Cocharacter& lambda, unsigned q = 2, int samples = 20, std::uint64_t seed = 7,
                               std::optional<int> N_opt = {}) {
  if (!lambda.is_dominant()) throw NotDominant(lambda.format() + " is not dominant");
  if (lambda.sum() != 0) throw InvalidArgument(lambda.format() + " does not sum to zero");
  if (lambda.big_lambda() > 4) throw SizeGuard("image check is limited to Lambda <= 4");
  FiniteField F = FiniteField::of_order(q);
  const int n = lambda.size();
  const int N = N_opt.value_or(std::max(1, lambda.tilde()[0]));
  ImageReport rep;
  rep.lambda = lambda;
  rep.q = q;
  rep.N = N;
  rep.samples = samples;
  rep.seed = seed;
  rep.expected = dominant_below(lambda);
  std::mt19937_64 rng(seed);
  WittRing<FiniteField> W(F, N);
  const long bound = hilbert::default_bound(F.characteristic(), N);

  auto observe = [&](const Cocharacter& c) {
    ++rep.observed[c];
    if (!bruhat_leq(c, lambda)) rep.all_observed_below = false;
  };

  // Stable ideals by point lattice, for the non-injectivity witness.
  std::map<lattice::Lattice, std::pair<Cocharacter, std::vector<GradedIdeal>>> fibres;
  auto remember = [&](const GradedIdeal& J, const PointsLattice& P) {
    auto& [cell, list] = fibres[P.lattice];
    cell = P.cell;
    for (const auto& K : list)
      if (K.same_ideal(J)) return;
    list.push_back(J);
  };

  auto I = hilbert::ideal_I_lambda(F, lambda, N, true);
  auto base = points_lattice(I);
  const int shift = static_cast<int>(base.Lambda / n);
  observe(base.cell);
  rep.realized.insert(base.cell);
  remember(I, base);
  for (int s = 0; s < samples; ++s) {
    // g . I_lambda is stable whenever I_lambda is; the point module is still checked.
    auto J = hilbert::act_on_ideal(detail::random_sl(W, n, rng), I, W);
    observe(points_lattice(J, {}, false).cell);
  }

  // Iterated degenerations: move one unit between two coordinates whose
  // exponents differ by at least two.
  PolyRing L(F, {Variable{"t", 0, 0, true}});
  WittRing<PolyRing> WL(L, N);
  std::vector<std::pair<GradedIdeal, std::vector<int>>> frontier{{I, base.diag}};
  std::set<std::vector<int>> seen{base.diag};
  std::vector<GradedIdeal> limits;
  while (!frontier.empty()) {
    auto [J, exps] = frontier.back();
    frontier.pop_back();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b || exps[a] - exps[b] < 2) continue;
        FamilyStep step;
        step.exps = exps;
        step.first = a;
        step.second = b;
        step.e = exps[a] - shift;
        step.d = exps[b] - shift;
        try {
          step.start = points_lattice(J, {}, false).cell;
          auto A = detail::family_matrix(L, n, N, a, b, step.e, step.d, step.identity);
          auto fam = hilbert::act_on_ideal(A, J, WL);
          for (FiniteField::Elem c = 1; c < std::min(q, 4u); ++c) {
            auto P = points_lattice(hilbert::specialize(fam, c));
            observe(P.cell);
            step.generic_cells.push_back(P.cell);
            rep.realized.insert(P.cell);
          }
          auto lim = hilbert::flat_limit(fam);
          auto P = points_lattice(lim);
          observe(P.cell);
          rep.realized.insert(P.cell);
          remember(lim, P);
          step.limit_cell = P.cell;
          step.limit_ideal = lim.format_basis();
          limits.push_back(lim);
          if (seen.insert(P.diag).second) frontier.emplace_back(lim, P.diag);
        } catch (const NotStable& e) {
          step.error = e.what();
        }
        rep.families.push_back(std::move(step));
      }
  }
  for (const auto& c : rep.expected)
    if (!rep.realized.count(c)) rep.all_realized = false;

  // Orbit images of the limits keep their lattice when g fixes it; collect
  // distinct stable ideals over the same lattice.
  const int per_limit = std::max(1, std::min(samples, 8));
  for (const auto& lim : limits) {
    auto P0 = points_lattice(lim, {}, false);
    for (int s = 0; s < per_limit; ++s) {
      auto J = hilbert::act_on_ideal(detail::random_sl(W, n, rng), lim, W);
      auto P = points_lattice(J, {}, false);
      if (P.lattice == P0.lattice) remember(J, P);
    }
  }
  const lattice::Lattice standard = standard_cell_lattice(F, Cocharacter{std::vector<int>(n, 0)}, base.window);
  auto try_witness = [&](const lattice::Lattice& key, const Cocharacter& cell, const std::vector<GradedIdeal>& list) {
    std::map<HilbertFunction, std::vector<const GradedIdeal*>> by_hf;
    for (const auto& J : list) by_hf[hilbert::hilbert_function(J, bound)].push_back(&J);
    for (const auto& [hf, group] : by_hf) {
      if (group.size() < 2) continue;
      NonInjectivity w{key.format(F), cell, {}, hilbert::format_hf(hf)};
      for (const auto* J : group)
        if (hilbert::is_module_stable(*J)) w.ideals.push_back(J->format_basis());
      if (w.ideals.size() >= 2) {
        rep.witness = std::move(w);
        return true;
      }
    }
    return false;
  };
  if (auto it = fibres.find(standard); it != fibres.end()) try_witness(it->first, it->second.first, it->second.second);
  for (const auto& [key, entry] : fibres) {
    if (rep.witness) break;
    try_witness(key, entry.first, entry.second);
  }
  return rep;
}

}  // namespace grassmann

}  // namespace wittgrass
