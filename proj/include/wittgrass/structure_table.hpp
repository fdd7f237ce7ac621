#pragma once

#include <unistd.h>

#include <array>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wittgrass/errors.hpp"
#include "wittgrass/int_poly.hpp"

namespace wittgrass {

enum class WittOp { Add, Mul, Neg };

inline const char* op_tag(WittOp op) {
  switch (op) {
    case WittOp::Add: return "ADD";
    case WittOp::Mul: return "MUL";
    case WittOp::Neg: return "NEG";
  }
  return "?";
}

/// Integer structure polynomials add[n], mul[n], neg[n] for 0 <= n < N.
/// Argument vectors are X0..X{N-1} and Y0..Y{N-1} (IntPoly variables 0..7, 8..15).
struct StructureTable {
  unsigned p = 2;
  int N = 0;
  std::vector<IntPoly> add, mul, neg;

  const std::vector<IntPoly>& of(WittOp op) const {
    return op == WittOp::Add ? add : op == WittOp::Mul ? mul : neg;
  }
  std::vector<IntPoly>& of(WittOp op) { return op == WittOp::Add ? add : op == WittOp::Mul ? mul : neg; }
};

/// A structure polynomial with coefficients reduced mod p, ready for evaluation.
struct ModTerm {
  unsigned coeff;
  std::array<std::uint8_t, IntPoly::kMaxVars> exps;
};
using ModPoly = std::vector<ModTerm>;

struct ModTable {
  unsigned p = 2;
  int N = 0;
  std::vector<ModPoly> add, mul, neg;

  const std::vector<ModPoly>& of(WittOp op) const {
    return op == WittOp::Add ? add : op == WittOp::Mul ? mul : neg;
  }
};

namespace structure {

inline constexpr int kMaxLength = 8;
inline constexpr unsigned kSupportedPrimes[] = {2, 3, 5};
// Upper bound on the monomial count of the top-level polynomial.
inline constexpr double kTermBudget = 250000;

/// w_n(Z) = sum_{i<=n} p^i Z_i^{p^{n-i}} in the variables base+0..base+n.
inline IntPoly ghost(unsigned p, int n, int base) {
  IntPoly w;
  mpz_class pi = 1;
  for (int i = 0; i <= n; ++i) {
    unsigned e = 1;
    for (int k = i; k < n; ++k) e *= p;
    IntPoly t = IntPoly::variable(base + i, static_cast<int>(e));
    t.scale(pi);
    w += t;
    pi *= p;
  }
  return w;
}

/// Number of monomials of weighted degree d in variables of the given weights.
inline double count_monomials(const std::vector<long>& weights, long d) {
  std::vector<double> ways(d + 1, 0.0);
  ways[0] = 1;
  for (long w : weights)
    for (long s = w; s <= d; ++s) ways[s] += ways[s - w];
  return ways[d];
}

/// Throws LimitError unless tables for (p, N) are within the supported range.
inline void check_limits(unsigned p, int N) {
  if (N < 1) throw InvalidArgument("Witt length must be at least 1");
  bool supported = false;
  for (unsigned q : kSupportedPrimes) supported = supported || q == p;
  if (!supported) throw LimitError("prime " + std::to_string(p) + " is not supported (supported: 2, 3, 5)");
  if (N > kMaxLength) throw LimitError("Witt length " + std::to_string(N) + " exceeds the maximum " + std::to_string(kMaxLength));
  long top = 1;
  std::vector<long> weights;
  for (int i = 0; i < N; ++i) {
    weights.push_back(top);
    if (i + 1 < N) top *= p;
  }
  if (top > IntPoly::kMaxExponent)
    throw LimitError("exponent p^(N-1) = " + std::to_string(top) + " exceeds the packed monomial range");
  double one_side = count_monomials(weights, top);
  std::vector<long> both = weights;
  both.insert(both.end(), weights.begin(), weights.end());
  double estimate = std::max(count_monomials(both, top), one_side * one_side);
  if (estimate > kTermBudget)
    throw LimitError("structure polynomials for p=" + std::to_string(p) + ", N=" + std::to_string(N) + " would need about " +
                     std::to_string(static_cast<long long>(estimate)) + " terms per polynomial");
}

namespace detail {

// Solves sum_{i<=n} p^i S_i^{p^{n-i}} = target for S_n, given S_0..S_{n-1}.
// `powers[i]` holds S_i^{p^{n-1-i}} on entry and S_i^{p^{n-i}} on exit.
inline IntPoly solve_level(unsigned p, int n, IntPoly target, std::vector<IntPoly>& powers) {
  mpz_class pi = 1;
  for (int i = 0; i < n; ++i) {
    powers[i] = powers[i].pow(p);
    IntPoly t = powers[i];
    t.scale(pi);
    target -= t;
    pi *= p;
  }
  if (!target.divide_exact(pi)) throw Error("internal: inexact division in the structure polynomial solve");
  powers.push_back(target);
  return target;
}

inline IntPoly target_for(WittOp op, unsigned p, int n) {
  switch (op) {
    case WittOp::Add: {
      IntPoly t = ghost(p, n, 0);
      t += ghost(p, n, 8);
      return t;
    }
    case WittOp::Mul: return ghost(p, n, 0) * ghost(p, n, 8);
    case WittOp::Neg: {
      IntPoly t = ghost(p, n, 0);
      return t.scale(-1);
    }
  }
  return {};
}

}  // namespace detail

/// Generates tables up to length N, reusing the levels already in `prefix`.
inline StructureTable generate(unsigned p, int N, const StructureTable* prefix = nullptr) {
  check_limits(p, N);
  StructureTable t;
  t.p = p;
  t.N = N;
  for (WittOp op : {WittOp::Add, WittOp::Mul, WittOp::Neg}) {
    std::vector<IntPoly> powers;
    auto& out = t.of(op);
    for (int n = 0; n < N; ++n) {
      if (prefix && prefix->p == p && n < prefix->N) {
        // Bring the cached level into the running power list.
        for (auto& pw : powers) pw = pw.pow(p);
        powers.push_back(prefix->of(op)[n]);
        out.push_back(prefix->of(op)[n]);
        continue;
      }
      out.push_back(detail::solve_level(p, n, detail::target_for(op, p, n), powers));
    }
  }
  return t;
}

/// Every polynomial at level n mentions only variables of index <= n.
inline bool is_triangular(const StructureTable& t) {
  for (WittOp op : {WittOp::Add, WittOp::Mul, WittOp::Neg}) {
    for (int n = 0; n < t.N; ++n) {
      const auto& f = t.of(op)[n];
      if (f.max_var_index(0, 8) > n || f.max_var_index(8, 8) > n) return false;
    }
  }
  return true;
}

/// Recomputes w_n of each structure polynomial vector with fresh powers and
/// compares it with the defining ghost target, as integer polynomials.
inline bool verify_ghost_identities(const StructureTable& t) {
  for (WittOp op : {WittOp::Add, WittOp::Mul, WittOp::Neg}) {
    const auto& polys = t.of(op);
    for (int n = 0; n < t.N; ++n) {
      IntPoly lhs;
      mpz_class pi = 1;
      for (int i = 0; i <= n; ++i) {
        unsigned e = 1;
        for (int k = i; k < n; ++k) e *= t.p;
        IntPoly term = polys[i].pow(e);
        term.scale(pi);
        lhs += term;
        pi *= t.p;
      }
      if (!(lhs == detail::target_for(op, t.p, n))) return false;
    }
  }
  return true;
}

inline ModPoly reduce_mod_p(const IntPoly& f, unsigned p) {
  ModPoly out;
  mpz_class r;
  for (const auto& [k, c] : f.sorted_terms()) {
    mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), p);
    unsigned cr = static_cast<unsigned>(r.get_ui());
    if (cr == 0) continue;
    ModTerm mt{cr, {}};
    for (int v = 0; v < IntPoly::kMaxVars; ++v) mt.exps[v] = static_cast<std::uint8_t>(IntPoly::exponent(k, v));
    out.push_back(mt);
  }
  return out;
}

inline ModTable reduce_mod_p(const StructureTable& t) {
  ModTable m;
  m.p = t.p;
  m.N = t.N;
  for (const auto& f : t.add) m.add.push_back(reduce_mod_p(f, t.p));
  for (const auto& f : t.mul) m.mul.push_back(reduce_mod_p(f, t.p));
  for (const auto& f : t.neg) m.neg.push_back(reduce_mod_p(f, t.p));
  return m;
}

// ---- disk format --------------------------------------------------------

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string serialize(const StructureTable& t) {
  std::ostringstream body;
  body << "# wittgrass structure polynomials p=" << t.p << " N=" << t.N << "\n";
  for (WittOp op : {WittOp::Add, WittOp::Mul, WittOp::Neg})
    for (int n = 0; n < t.N; ++n) body << op_tag(op) << " " << n << ": " << t.of(op)[n].format() << "\n";
  std::string s = body.str();
  return s + "# checksum fnv1a64 " + hex64(fnv1a64(s)) + "\n";
}

/// Parses a cache file; any inconsistency raises CacheError.
inline StructureTable deserialize(const std::string& text, unsigned p) {
  const std::string marker = "# checksum fnv1a64 ";
  auto cpos = text.rfind(marker);
  if (cpos == std::string::npos) throw CacheError("missing checksum line");
  std::string body = text.substr(0, cpos);
  std::string sum = text.substr(cpos + marker.size());
  while (!sum.empty() && (sum.back() == '\n' || sum.back() == '\r')) sum.pop_back();
  if (sum != hex64(fnv1a64(body))) throw CacheError("checksum mismatch");

  StructureTable t;
  t.p = p;
  std::map<std::string, std::map<int, IntPoly>> levels;
  std::istringstream in(body);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    auto space = line.find(' ');
    if (colon == std::string::npos || space == std::string::npos || space > colon)
      throw CacheError("malformed line " + std::to_string(lineno));
    std::string tag = line.substr(0, space);
    if (tag != "ADD" && tag != "MUL" && tag != "NEG") throw CacheError("unknown tag on line " + std::to_string(lineno));
    int n;
    try {
      n = std::stoi(line.substr(space + 1, colon - space - 1));
      levels[tag][n] = IntPoly::parse(line.substr(colon + 1));
    } catch (const std::exception& e) {
      throw CacheError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  int N = static_cast<int>(levels["ADD"].size());
  for (const char* tag : {"ADD", "MUL", "NEG"}) {
    const auto& m = levels[tag];
    if (static_cast<int>(m.size()) != N) throw CacheError("levels missing for " + std::string(tag));
    int expect = 0;
    for (const auto& [n, f] : m)
      if (n != expect++) throw CacheError("non-contiguous levels for " + std::string(tag));
  }
  t.N = N;
  for (int n = 0; n < N; ++n) {
    t.add.push_back(levels["ADD"][n]);
    t.mul.push_back(levels["MUL"][n]);
    t.neg.push_back(levels["NEG"][n]);
  }
  if (!is_triangular(t)) throw CacheError("cached polynomial is not triangular");
  return t;
}

// ---- cache --------------------------------------------------------------

/// Process-wide table cache backed by files `witt_p<p>.tbl` in a directory
/// chosen by set_directory(), else $WITTGRASS_CACHE_DIR, else ~/.cache/wittgrass.
/// An empty directory disables disk caching.
class Cache {
 public:
  struct Entry {
    StructureTable exact;
    ModTable reduced;
  };

  static Cache& instance() {
    static Cache c;
    return c;
  }

  void set_directory(std::optional<std::filesystem::path> dir) {
    std::lock_guard lock(mu_);
    dir_override_ = std::move(dir);
  }

  std::filesystem::path directory() const {
    std::lock_guard lock(mu_);
    return directory_locked();
  }

  std::filesystem::path file_for(unsigned p) const {
    auto d = directory();
    return d.empty() ? d : d / ("witt_p" + std::to_string(p) + ".tbl");
  }

  /// Drops in-memory tables so the next request goes to disk.
  void clear_memory() {
    std::lock_guard lock(mu_);
    entries_.clear();
  }

  /// Last cache read failure (empty if none); regeneration replaced the bad file.
  std::string last_error() const {
    std::lock_guard lock(mu_);
    return last_error_;
  }

  /// Reads the cached table for p strictly: CacheError on corruption,
  /// nullopt when there is no file.
  std::optional<StructureTable> load(unsigned p) const { return load_file(file_for(p), p); }

  static std::optional<StructureTable> load_file(const std::filesystem::path& path, unsigned p) {
    if (path.empty() || !std::filesystem::exists(path)) return std::nullopt;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheError("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return deserialize(ss.str(), p);
  }

  std::shared_ptr<const Entry> get(unsigned p, int N) {
    check_limits(p, N);
    std::lock_guard lock(mu_);
    auto it = entries_.find(p);
    if (it != entries_.end() && it->second->exact.N >= N) return it->second;

    std::optional<StructureTable> prefix;
    if (it != entries_.end()) prefix = it->second->exact;
    auto dir = directory_locked();
    auto path = dir.empty() ? dir : dir / ("witt_p" + std::to_string(p) + ".tbl");
    if (!path.empty()) {
      try {
        auto disk = load_file(path, p);
        if (disk && (!prefix || disk->N > prefix->N)) prefix = std::move(disk);
      } catch (const CacheError& e) {
        last_error_ = std::string(e.what()) + " (" + path.string() + ")";
      }
    }

    StructureTable table;
    if (prefix && prefix->N >= N) {
      table = std::move(*prefix);
    } else {
      table = generate(p, N, prefix ? &*prefix : nullptr);
      if (!verify_ghost_identities(table)) throw Error("internal: generated structure polynomials fail verification");
      if (!path.empty()) write_atomic(path, serialize(table));
    }
    auto entry = std::make_shared<Entry>();
    entry->reduced = reduce_mod_p(table);
    entry->exact = std::move(table);
    entries_[p] = entry;
    return entry;
  }

 private:
  std::filesystem::path directory_locked() const {
    if (dir_override_) return *dir_override_;
    if (const char* env = std::getenv("WITTGRASS_CACHE_DIR")) return env;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "wittgrass";
    if (const char* home = std::getenv("HOME"); home && *home)
      return std::filesystem::path(home) / ".cache" / "wittgrass";
    return {};
  }

  // A failed write only costs a regeneration next time, so it is not fatal.
  void write_atomic(const std::filesystem::path& path, const std::string& data) {
    static std::atomic<unsigned> counter{0};
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) return;
      out << data;
      if (!out.flush()) {
        std::filesystem::remove(tmp, ec);
        return;
      }
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
  }

  mutable std::mutex mu_;
  std::optional<std::filesystem::path> dir_override_;
  std::map<unsigned, std::shared_ptr<const Entry>> entries_;
  std::string last_error_;
};

}  // namespace structure

/// Convenience accessor for the evaluation tables of (p, N).
inline std::shared_ptr<const structure::Cache::Entry> structure_tables(unsigned p, int N) {
  return structure::Cache::instance().get(p, N);
}

}  // namespace wittgrass
