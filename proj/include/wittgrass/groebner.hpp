#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wittgrass/errors.hpp"
#include "wittgrass/polynomial.hpp"

namespace wittgrass {

struct GroebnerLimits {
  std::size_t max_basis = 4000;
  std::size_t max_reductions = 200000;
};

namespace groebner {

inline bool divides(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Exponents lcm(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

inline bool coprime(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) return false;
  return true;
}

inline Exponents quotient(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

/// Fully reduced remainder of f modulo G (any order of G).
inline Polynomial normal_form(const PolyRing& R, Polynomial f, const std::vector<Polynomial>& G) {
  const auto& F = R.field();
  std::vector<Term> rem;
  while (!f.terms.empty()) {
    const Term& lt = f.terms.front();
    const Polynomial* hit = nullptr;
    for (const auto& g : G)
      if (!g.terms.empty() && divides(g.terms.front().exps, lt.exps)) {
        hit = &g;
        break;
      }
    if (!hit) {
      rem.push_back(lt);
      f.terms.erase(f.terms.begin());
      continue;
    }
    auto c = F.mul(lt.coeff, F.inverse(hit->terms.front().coeff));
    f = R.sub(f, R.mul_term(*hit, quotient(lt.exps, hit->terms.front().exps), c));
  }
  Polynomial r;
  r.terms = std::move(rem);
  return r;
}

inline Polynomial s_polynomial(const PolyRing& R, const Polynomial& f, const Polynomial& g) {
  const auto& F = R.field();
  auto L = lcm(f.terms.front().exps, g.terms.front().exps);
  auto a = R.mul_term(f, quotient(L, f.terms.front().exps), F.inverse(f.terms.front().coeff));
  auto b = R.mul_term(g, quotient(L, g.terms.front().exps), F.inverse(g.terms.front().coeff));
  return R.sub(a, b);
}

/// Reduced Groebner basis (monic, sorted by decreasing leading monomial) for
/// the ring's monomial order. Buchberger with the product and chain criteria;
/// pairs are processed by increasing lcm.
inline std::vector<Polynomial> basis(const PolyRing& R, const std::vector<Polynomial>& gens, const GroebnerLimits& limits = {}) {
  std::vector<Polynomial> G;
  for (const auto& g : gens)
    if (!g.is_zero()) G.push_back(R.monic(g));
  if (G.empty()) return {};
  auto lm = [&](std::size_t i) -> const Exponents& { return G[i].terms.front().exps; };
  auto by_lcm = [&](const std::pair<std::size_t, std::size_t>& a, const std::pair<std::size_t, std::size_t>& b) {
    int c = R.compare(lcm(lm(a.first), lm(a.second)), lcm(lm(b.first), lm(b.second)));
    if (c != 0) return c < 0;
    return a < b;
  };
  std::set<std::pair<std::size_t, std::size_t>, decltype(by_lcm)> pairs(by_lcm);
  std::vector<bool> live;
  // Plain set for quick "still pending" lookups by the chain criterion.
  std::set<std::pair<std::size_t, std::size_t>> pending;
  auto add_pairs = [&](std::size_t j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (!live[i]) continue;
      pairs.emplace(i, j);
      pending.emplace(i, j);
    }
  };
  // Inter-reduce the input so leading monomials are distinct.
  G = [&] {
    std::vector<Polynomial> out;
    for (auto& g : G) {
      auto r = normal_form(R, g, out);
      if (!r.is_zero()) out.push_back(R.monic(r));
    }
    return out;
  }();
  live.assign(G.size(), true);
  for (std::size_t j = 1; j < G.size(); ++j) add_pairs(j);
  std::size_t reductions = 0;
  while (!pairs.empty()) {
    auto [i, j] = *pairs.begin();
    pairs.erase(pairs.begin());
    pending.erase({i, j});
    if (!live[i] || !live[j]) continue;
    if (coprime(lm(i), lm(j))) continue;
    auto L = lcm(lm(i), lm(j));
    bool chain = false;
    for (std::size_t k = 0; k < G.size() && !chain; ++k) {
      if (k == i || k == j || !live[k] || !divides(lm(k), L)) continue;
      auto key = [](std::size_t a, std::size_t b) { return std::pair{std::min(a, b), std::max(a, b)}; };
      if (!pending.count(key(i, k)) && !pending.count(key(j, k))) chain = true;
    }
    if (chain) continue;
    if (++reductions > limits.max_reductions)
      throw ResourceGuard("Groebner basis needs more than " + std::to_string(limits.max_reductions) + " reductions");
    auto r = normal_form(R, s_polynomial(R, G[i], G[j]), G);
    if (r.is_zero()) continue;
    G.push_back(R.monic(r));
    live.push_back(true);
    if (G.size() > limits.max_basis)
      throw ResourceGuard("Groebner basis grew beyond " + std::to_string(limits.max_basis) + " elements");
    add_pairs(G.size() - 1);
  }
  // Minimalize, then reduce each element by the others.
  std::vector<Polynomial> minimal;
  for (std::size_t i = 0; i < G.size(); ++i) {
    bool redundant = false;
    for (std::size_t k = 0; k < G.size() && !redundant; ++k) {
      if (k == i) continue;
      if (divides(lm(k), lm(i)) && (lm(k) != lm(i) || k < i)) redundant = true;
    }
    if (!redundant) minimal.push_back(G[i]);
  }
  std::vector<Polynomial> reduced;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Polynomial> others;
    for (std::size_t k = 0; k < minimal.size(); ++k)
      if (k != i) others.push_back(minimal[k]);
    const auto& head = minimal[i].terms.front();
    Polynomial tail;
    tail.terms.assign(minimal[i].terms.begin() + 1, minimal[i].terms.end());
    auto t = normal_form(R, tail, others);
    Polynomial g;
    g.terms.push_back(head);
    for (auto& term : t.terms) g.terms.push_back(std::move(term));
    reduced.push_back(R.monic(g));
  }
  std::sort(reduced.begin(), reduced.end(),
            [&](const Polynomial& a, const Polynomial& b) { return R.compare(a.terms.front().exps, b.terms.front().exps) > 0; });
  return reduced;
}

inline bool is_groebner(const PolyRing& R, const std::vector<Polynomial>& G) {
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t j = i + 1; j < G.size(); ++j)
      if (!normal_form(R, s_polynomial(R, G[i], G[j]), G).is_zero()) return false;
  return true;
}

}  // namespace groebner

}  // namespace wittgrass
