#pragma once

// Function-field model: lattices in F_q((z))^n, enumerated by brute force.
// Deliberately self-contained (own GF(q) and F_q[z]/z^m arithmetic) so that it
// can cross-check the Witt-vector lattice code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "wittgrass/errors.hpp"

namespace wittgrass::zadic {

/// GF(q) as F_p[y]/(f) with f the first monic irreducible polynomial found by
/// exhaustive search; elements are base-p digit strings packed into an int.
class GF {
 public:
  explicit GF(unsigned q) : q_(q) {
    for (unsigned d = 2; d <= q; ++d)
      if (q % d == 0) {
        p_ = d;
        break;
      }
    if (q < 2) throw InvalidArgument("field size must be at least 2");
    unsigned t = q;
    e_ = 0;
    while (t % p_ == 0) {
      t /= p_;
      ++e_;
    }
    if (t != 1) throw InvalidArgument(std::to_string(q) + " is not a prime power");
    modulus_ = find_irreducible();
    add_.resize(q * q);
    mul_.resize(q * q);
    for (unsigned a = 0; a < q; ++a)
      for (unsigned b = 0; b < q; ++b) {
        add_[a * q + b] = pack(poly_add(unpack(a), unpack(b)));
        mul_[a * q + b] = pack(reduce(poly_mul(unpack(a), unpack(b))));
      }
  }

  unsigned size() const { return q_; }
  unsigned characteristic() const { return p_; }
  unsigned add(unsigned a, unsigned b) const { return add_[a * q_ + b]; }
  unsigned mul(unsigned a, unsigned b) const { return mul_[a * q_ + b]; }

 private:
  using Poly = std::vector<unsigned>;  // low degree first

  Poly unpack(unsigned a) const {
    Poly r(e_);
    for (unsigned i = 0; i < e_; ++i) {
      r[i] = a % p_;
      a /= p_;
    }
    return r;
  }
  unsigned pack(const Poly& r) const {
    unsigned a = 0;
    for (unsigned i = e_; i-- > 0;) a = a * p_ + (i < r.size() ? r[i] : 0);
    return a;
  }
  Poly poly_add(const Poly& a, const Poly& b) const {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = ((i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0)) % p_;
    return r;
  }
  Poly poly_mul(const Poly& a, const Poly& b) const {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p_;
    return r;
  }
  // Remainder modulo a monic polynomial m.
  Poly poly_mod(Poly a, const Poly& m) const {
    const std::size_t dm = m.size() - 1;
    for (std::size_t k = a.size(); k-- > dm;) {
      unsigned c = a[k];
      if (!c) continue;
      for (std::size_t i = 0; i <= dm; ++i) a[k - dm + i] = (a[k - dm + i] + (p_ - c) * m[i]) % p_;
    }
    a.resize(std::min(a.size(), dm));
    return a;
  }
  Poly reduce(const Poly& a) const {
    return poly_mod(a, modulus_);
  }
  Poly find_irreducible() const {
    // Monic of degree e_, irreducible iff no monic divisor of degree 1..e_/2.
    unsigned long count = 1;
    for (unsigned i = 0; i < e_; ++i) count *= p_;
    for (unsigned long code = 0; code < count; ++code) {
      Poly f(e_ + 1, 0);
      unsigned long c = code;
      for (unsigned i = 0; i < e_; ++i) {
        f[i] = c % p_;
        c /= p_;
      }
      f[e_] = 1;
      if (f[0] == 0) continue;
      bool irreducible = true;
      for (unsigned d = 1; d <= e_ / 2 && irreducible; ++d) {
        unsigned long dc = 1;
        for (unsigned i = 0; i < d; ++i) dc *= p_;
        for (unsigned long g = 0; g < dc && irreducible; ++g) {
          Poly h(d + 1, 0);
          unsigned long x = g;
          for (unsigned i = 0; i < d; ++i) {
            h[i] = x % p_;
            x /= p_;
          }
          h[d] = 1;
          auto r = poly_mod(f, h);
          if (std::all_of(r.begin(), r.end(), [](unsigned v) { return v == 0; })) irreducible = false;
        }
      }
      if (irreducible) return f;
    }
    throw InvalidArgument("no irreducible polynomial found");
  }

  unsigned q_, p_ = 0, e_ = 0;
  Poly modulus_;
  std::vector<unsigned> add_, mul_;
};

/// Cell counts of special lattices z^w F_q[[z]]^n <= L <= z^{-w} F_q[[z]]^n.
/// Keys are dominant cocharacters (decreasing), values the number of lattices.
inline std::map<std::vector<int>, long> cell_table(int n, unsigned q, int window, int jobs = 1) {
  if (n < 1 || window < 0) throw InvalidArgument("need n >= 1 and window >= 0");
  GF F(q);
  if (window == 0) return {{std::vector<int>(n, 0), 1}};
  const int m = 2 * window;
  double ring_d = std::pow(static_cast<double>(q), m);
  double module_d = std::pow(ring_d, n);
  if (ring_d > 4096 || module_d > (1 << 20) || std::pow(module_d, n) > static_cast<double>(1 << 24))
    throw SizeGuard("enumeration of F_" + std::to_string(q) + "[z]/z^" + std::to_string(m) + " submodules exceeds the 2^24 candidate guard");
  const std::size_t R = static_cast<std::size_t>(ring_d), M = static_cast<std::size_t>(module_d);

  // Ring element idx: coefficient of z^k is digit k base q.
  auto digits = [&](std::size_t idx) {
    std::vector<unsigned> c(m);
    for (int k = 0; k < m; ++k) {
      c[k] = static_cast<unsigned>(idx % q);
      idx /= q;
    }
    return c;
  };
  auto undigits = [&](const std::vector<unsigned>& c) {
    std::size_t idx = 0;
    for (int k = m - 1; k >= 0; --k) idx = idx * q + c[k];
    return idx;
  };
  std::vector<std::uint32_t> add_t(R * R), mul_t(R * R), zmul(R);
  for (std::size_t a = 0; a < R; ++a) {
    auto ca = digits(a);
    for (std::size_t b = 0; b < R; ++b) {
      auto cb = digits(b);
      std::vector<unsigned> s(m), t(m, 0);
      for (int k = 0; k < m; ++k) s[k] = F.add(ca[k], cb[k]);
      for (int i = 0; i < m; ++i)
        for (int j = 0; i + j < m; ++j) t[i + j] = F.add(t[i + j], F.mul(ca[i], cb[j]));
      add_t[a * R + b] = static_cast<std::uint32_t>(undigits(s));
      mul_t[a * R + b] = static_cast<std::uint32_t>(undigits(t));
    }
    std::vector<unsigned> sh(m, 0);
    for (int k = 0; k + 1 < m; ++k) sh[k + 1] = ca[k];
    zmul[a] = static_cast<std::uint32_t>(undigits(sh));
  }

  auto coord = [&](std::size_t v, int i) {
    for (int k = 0; k < i; ++k) v /= R;
    return v % R;
  };
  auto join = [&](const std::vector<std::size_t>& c) {
    std::size_t v = 0;
    for (int i = n - 1; i >= 0; --i) v = v * R + c[i];
    return v;
  };
  const std::size_t target = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(q), n * window)));

  auto span = [&](const std::vector<std::size_t>& gens, std::vector<char>& seen, std::vector<std::size_t>& elems) {
    for (auto e : elems) seen[e] = 0;
    elems.assign(1, 0);
    seen[0] = 1;
    std::vector<std::size_t> c(n);
    for (auto g : gens) {
      const std::size_t before = elems.size();
      for (std::size_t r = 0; r < R; ++r) {
        for (int i = 0; i < n; ++i) c[i] = mul_t[r * R + coord(g, i)];
        const std::size_t s = join(c);
        for (std::size_t e = 0; e < before; ++e) {
          for (int i = 0; i < n; ++i) c[i] = add_t[coord(elems[e], i) * R + coord(s, i)];
          std::size_t v = join(c);
          if (!seen[v]) {
            seen[v] = 1;
            elems.push_back(v);
          }
        }
      }
      if (elems.size() > target) return;
    }
  };

  std::mutex mu;
  std::set<std::vector<std::size_t>> modules;
  auto worker = [&](std::size_t begin, std::size_t step) {
    std::vector<char> seen(M, 0);
    std::vector<std::size_t> elems, gens(n);
    std::set<std::vector<std::size_t>> local;
    auto rec = [&](auto&& self, int k, std::size_t start) -> void {
      if (k == n) {
        span(gens, seen, elems);
        if (elems.size() == target) {
          auto key = elems;
          std::sort(key.begin(), key.end());
          local.insert(std::move(key));
        }
        return;
      }
      for (std::size_t g = start; g < M; ++g) {
        gens[k] = g;
        self(self, k + 1, g);
      }
    };
    for (std::size_t g0 = begin; g0 < M; g0 += step) {
      gens[0] = g0;
      rec(rec, 1, g0);
    }
    std::lock_guard lock(mu);
    modules.insert(local.begin(), local.end());
  };
  jobs = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker, static_cast<std::size_t>(j), static_cast<std::size_t>(jobs));
  worker(0, static_cast<std::size_t>(jobs));
  for (auto& t : pool) t.join();

  // X = z^w L / z^{2w}. With c_k = log_q |z^k X|, the number of cyclic factors
  // of length > k is c_k - c_{k+1}; a factor of length l gives mu = w - l.
  std::map<std::vector<int>, long> table;
  for (const auto& X : modules) {
    std::vector<int> c(m + 2, 0);
    std::set<std::size_t> cur(X.begin(), X.end());
    for (int k = 0; k <= m; ++k) {
      c[k] = static_cast<int>(std::llround(std::log(static_cast<double>(cur.size())) / std::log(static_cast<double>(q))));
      std::set<std::size_t> next;
      std::vector<std::size_t> comp(n);
      for (auto v : cur) {
        for (int i = 0; i < n; ++i) comp[i] = zmul[coord(v, i)];
        next.insert(join(comp));
      }
      cur = std::move(next);
    }
    std::vector<int> lengths;
    for (int k = 0; k < m; ++k)
      for (int r = 0; r < (c[k] - c[k + 1]) - (c[k + 1] - c[k + 2]); ++r) lengths.push_back(k + 1);
    lengths.resize(n, 0);
    std::vector<int> mu;
    for (int l : lengths) mu.push_back(window - l);
    std::sort(mu.rbegin(), mu.rend());
    ++table[mu];
  }
  return table;
}

}  // namespace wittgrass::zadic
