#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "selftest.hpp"
#include "wittgrass/grassmann.hpp"
#include "wittgrass/greenberg.hpp"
#include "wittgrass/hilbert.hpp"
#include "wittgrass/lattice.hpp"
#include "wittgrass/structure_table.hpp"
#include "wittgrass/witt.hpp"

using namespace wittgrass;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string cache_dir;
  std::string format = "text";
  int jobs = 1;
  std::uint64_t seed = 7;
  std::size_t max_basis = GroebnerLimits{}.max_basis;
  std::size_t max_reductions = GroebnerLimits{}.max_reductions;

  bool json() const { return format == "json"; }
  GroebnerLimits limits() const { return {max_basis, max_reductions}; }
};

// Field options shared by most commands: p (required unless q alone suffices) and q.
struct FieldOpts {
  unsigned p = 0;
  unsigned q = 0;

  FiniteField field() const {
    if (p == 0 && q == 0) throw UsageError("--p or --q is required");
    auto F = FiniteField::of_order(q ? q : p);
    if (p && F.characteristic() != p) throw UsageError("--q " + std::to_string(q) + " is not a power of --p " + std::to_string(p));
    return F;
  }
};

void add_field(CLI::App* cmd, FieldOpts& f, bool need_p = true) {
  auto* o = cmd->add_option("--p", f.p, "characteristic");
  if (need_p) o->required();
  cmd->add_option("--q", f.q, "field size (a power of p; defaults to p)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Globals& g, const std::string& text, const json& j) {
  if (g.json())
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text << (text.empty() || text.back() == '\n' ? "" : "\n");
}

// ---- witt ----------------------------------------------------------------

struct WittCmd {
  FieldOpts f;
  int N = 0;
  bool laurent = false;
  std::vector<std::string> args;
  std::string op;
};

template <class Ring>
void run_witt(const Globals& g, const WittCmd& c, const Ring& scalars) {
  WittRing<Ring> W(scalars, c.N);
  auto need = [&](std::size_t k) {
    if (c.args.size() != k)
      throw UsageError("witt " + c.op + " takes " + std::to_string(k) + " argument" + (k == 1 ? "" : "s") + ", got " +
                       std::to_string(c.args.size()));
  };
  WittVector<Ring> r;
  if (c.op == "add" || c.op == "mul" || c.op == "sub") {
    need(2);
    auto a = W.parse(c.args[0]), b = W.parse(c.args[1]);
    r = c.op == "add" ? W.add(a, b) : c.op == "mul" ? W.mul(a, b) : W.sub(a, b);
  } else if (c.op == "teich") {
    need(1);
    r = W.teichmuller(scalars.parse(c.args[0]));
  } else {
    need(1);
    auto a = W.parse(c.args[0]);
    if (c.op == "neg") r = W.neg(a);
    else if (c.op == "inv") r = W.inverse(a);
    else if (c.op == "frob") r = W.frobenius(a);
    else if (c.op == "ver") r = W.verschiebung(a);
    else if (c.op == "pshift") r = W.p_shift(a);
    else throw UsageError("unknown witt operation " + c.op);
  }
  const auto text = W.format(r);
  emit(g, text, {{"op", c.op}, {"p", W.prime()}, {"N", c.N}, {"args", c.args}, {"result", text}});
}

void witt_table(const Globals& g, unsigned p, int N) {
  auto entry = structure_tables(p, N);
  const auto& t = entry->exact;
  std::string text;
  json j = {{"p", p}, {"N", N}};
  for (WittOp op : {WittOp::Add, WittOp::Mul, WittOp::Neg}) {
    json list = json::array();
    for (int n = 0; n < N; ++n) {
      auto f = t.of(op)[n].format();
      text += std::string(op_tag(op)) + " " + std::to_string(n) + ": " + f + "\n";
      list.push_back(f);
    }
    std::string key = op_tag(op);
    for (auto& ch : key) ch = static_cast<char>(std::tolower(ch));
    j[key] = list;
  }
  j["ghost_identities"] = structure::verify_ghost_identities(t);
  emit(g, text, j);
}

// ---- greenberg -----------------------------------------------------------

struct GreenbergCmd {
  FieldOpts f;
  int N = 0;
  std::string map, ideal;
  int arity = 0;
};

int infer_arity(const std::string& text) {
  static const std::regex var(R"(T(\d+))");
  int best = 0;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), var); it != std::sregex_iterator(); ++it)
    best = std::max(best, std::stoi((*it)[1].str()));
  return best;
}

void run_greenberg(const Globals& g, const GreenbergCmd& c) {
  if (c.map.empty() == c.ideal.empty()) throw UsageError("greenberg realize needs exactly one of --map and --ideal");
  auto F = c.f.field();
  WittRing<FiniteField> W(F, c.N);
  const std::string& src = c.map.empty() ? c.ideal : c.map;
  const int d = c.arity ? c.arity : std::max(1, infer_arity(src));
  WittPolyAlgebra<FiniteField> A(W, d);
  auto polys = A.parse_list(src);
  if (!c.map.empty()) {
    auto m = greenberg::realize_poly_map(polys, W);
    json comps = json::array();
    for (const auto& row : m.comps) {
      json r = json::array();
      for (const auto& p : row) r.push_back(m.ring.format(p));
      comps.push_back(r);
    }
    if (g.format == "lines")
      std::cout << m.format_lines();
    else
      emit(g, m.format_text(), {{"p", W.prime()}, {"q", F.order()}, {"N", c.N}, {"arity", d}, {"components", comps}});
    return;
  }
  auto I = greenberg::realize_ideal(polys, W);
  std::string text, lines;
  json gens = json::array();
  for (std::size_t k = 0; k < I.gens.size(); ++k) {
    auto s = I.ring.format(I.gens[k]);
    text += s + "\n";
    lines += "GEN " + std::to_string(k + 1) + ": " + s + "\n";
    gens.push_back(s);
  }
  if (g.format == "lines")
    std::cout << lines;
  else
    emit(g, text, {{"p", W.prime()}, {"q", F.order()}, {"N", c.N}, {"arity", d}, {"generators", gens}});
}

// ---- lattice -------------------------------------------------------------

struct LatticeCmd {
  FieldOpts f;
  int N = 0;
  std::string matrix;
  int n = 2;
  int window = 1;
};

void run_snf(const Globals& g, const LatticeCmd& c) {
  PadicField<FiniteField> K(WittRing<FiniteField>(c.f.field(), c.N));
  auto A = K.parse_matrix(c.matrix);
  auto s = lattice::smith_normal_form(K, A);
  std::string mu;
  for (std::size_t i = 0; i < s.mu.size(); ++i) mu += (i ? "," : "") + std::to_string(s.mu[i]);
  emit(g, "mu: " + mu + "\nU: " + K.format_matrix(s.U) + "\nV: " + K.format_matrix(s.V),
       {{"mu", s.mu}, {"U", K.format_matrix(s.U)}, {"V", K.format_matrix(s.V)}});
}

void run_classify(const Globals& g, const LatticeCmd& c) {
  PadicField<FiniteField> K(WittRing<FiniteField>(c.f.field(), c.N));
  auto cell = lattice::classify_cell(K, K.parse_matrix(c.matrix));
  emit(g, cell.format(), {{"cell", cell.format()}});
}

void run_enumerate(const Globals& g, const LatticeCmd& c) {
  auto F = c.f.field();
  auto list = lattice::enumerate_lattices(c.n, F.order(), c.window, g.jobs);
  std::string text;
  json arr = json::array();
  for (const auto& [L, cell] : list) {
    text += cell.format() + "  " + L.format(F) + "\n";
    arr.push_back({{"cell", cell.format()}, {"lattice", L.format(F)}, {"diag", L.diag}});
  }
  text += std::to_string(list.size()) + " lattices\n";
  emit(g, text, {{"n", c.n}, {"q", F.order()}, {"window", c.window}, {"count", list.size()}, {"lattices", arr}});
}

// ---- hilbert -------------------------------------------------------------

struct HilbertCmd {
  FieldOpts f;
  std::string lambda;
  int n = 0, N = 0;
  long bound = -1;
  bool boundary = false;
  std::string ideal_file, family_file, param = "t";
};

void run_hf(const Globals& g, const HilbertCmd& c) {
  std::optional<GradedIdeal> I;
  json j;
  if (!c.ideal_file.empty()) {
    I = hilbert::parse_ideal(read_file(c.ideal_file));
  } else {
    if (c.lambda.empty()) throw UsageError("hilbert hf needs --lambda or --ideal-file");
    if (c.N <= 0) throw UsageError("--N is required with --lambda");
    auto lambda = Cocharacter::parse(c.lambda);
    if (c.n && c.n != lambda.size()) throw UsageError("--n " + std::to_string(c.n) + " does not match --lambda " + lambda.format());
    I = hilbert::ideal_I_lambda(c.f.field(), lambda, c.N, c.boundary);
    j["lambda"] = lambda.format();
  }
  const long bound = c.bound >= 0 ? c.bound : hilbert::default_bound(I->prime(), I->length());
  I->basis(g.limits());
  auto hf = hilbert::hilbert_function(*I, bound);
  j["n"] = I->n();
  j["N"] = I->length();
  j["p"] = I->prime();
  j["q"] = I->ring().field().order();
  j["bound"] = bound;
  j["hilbert_function"] = hf;
  emit(g, hilbert::format_hf(hf), j);
}

void run_stable(const Globals& g, const HilbertCmd& c) {
  if (c.ideal_file.empty()) throw UsageError("hilbert stable needs --ideal-file");
  auto I = hilbert::parse_ideal(read_file(c.ideal_file));
  I.basis(g.limits());
  auto r = hilbert::module_stability(I);
  emit(g, r.stable ? "stable" : "not stable (" + r.failure + ")", {{"stable", r.stable}, {"failure", r.failure}});
}

void run_limit(const Globals& g, const HilbertCmd& c) {
  if (c.family_file.empty()) throw UsageError("hilbert limit needs --family-file");
  auto I = hilbert::parse_ideal(read_file(c.family_file));
  auto limit = hilbert::flat_limit(I, c.param, g.limits());
  GradedIdeal L(limit.ring(), limit.n(), limit.length(), limit.basis(g.limits()));
  json basis = json::array();
  for (const auto& p : L.basis()) basis.push_back(L.ring().format(p));
  emit(g, hilbert::format_ideal(L), {{"n", L.n()}, {"N", L.length()}, {"basis", basis}, {"ideal", hilbert::format_ideal(L)}});
}

// ---- grass ---------------------------------------------------------------

struct GrassCmd {
  int n = 2;
  unsigned q = 2;
  int window = 1;
  std::string oracle = "witt";
  std::string lambda;
  int samples = 20;
  int N = 0;
  std::string ideal_file;
};

int run_count(const Globals& g, const GrassCmd& c) {
  std::vector<CellTable> tables;
  if (c.oracle == "witt" || c.oracle == "both") tables.push_back(grassmann::witt_cell_table(c.n, c.q, c.window, g.jobs));
  if (c.oracle == "zadic" || c.oracle == "both") tables.push_back(grassmann::zadic_cell_table(c.n, c.q, c.window, g.jobs));
  const bool agree = tables.size() < 2 || tables[0] == tables[1];
  std::string text;
  if (tables.size() == 1) {
    text = tables[0].format();
  } else {
    for (const auto& t : tables) text += t.provenance + ": " + t.format() + "\n";
    text += agree ? "agree" : "DISAGREE";
  }
  json arr = json::array();
  for (const auto& t : tables) arr.push_back(t.to_json());
  emit(g, text, {{"n", c.n}, {"q", c.q}, {"window", c.window}, {"tables", arr}, {"agree", agree}});
  return agree ? 0 : 1;
}

int run_image(const Globals& g, const GrassCmd& c) {
  if (c.lambda.empty()) throw UsageError("grass image needs --lambda");
  std::optional<int> N;
  if (c.N > 0) N = c.N;
  auto r = grassmann::image_check(Cocharacter::parse(c.lambda), c.q, c.samples, g.seed, N);
  std::string text = "lambda " + r.lambda.format() + ", q=" + std::to_string(r.q) + ", N=" + std::to_string(r.N) + "\nobserved:";
  for (const auto& [cell, k] : r.observed) text += " " + cell.format() + "x" + std::to_string(k);
  text += "\nrealized:";
  for (const auto& cell : r.realized) text += " " + cell.format();
  text += std::string("\nall observed cells below lambda: ") + (r.all_observed_below ? "yes" : "no");
  text += std::string("\nall cells below lambda realized: ") + (r.all_realized ? "yes" : "no");
  if (r.witness) {
    text += "\nnon-injectivity: " + std::to_string(r.witness->ideals.size()) + " stable ideals with Hilbert function " +
            r.witness->hilbert_function + " over " + r.witness->lattice;
    for (const auto& s : r.witness->ideals) text += "\n  " + s;
  }
  text += std::string("\n") + (r.ok() ? "ok" : "FAILED");
  emit(g, text, r.to_json());
  return r.ok() ? 0 : 1;
}

void run_points(const Globals& g, const GrassCmd& c) {
  if (c.ideal_file.empty()) throw UsageError("grass points needs --ideal-file");
  auto I = hilbert::parse_ideal(read_file(c.ideal_file));
  auto P = grassmann::points_lattice(I);
  const auto& F = I.ring().field();
  emit(g, "cell " + P.cell.format() + "\nlattice " + P.lattice.format(F) + "\npoints " + std::to_string(P.points),
       {{"cell", P.cell.format()}, {"lattice", P.lattice.format(F)}, {"points", P.points}, {"Lambda", P.Lambda}, {"window", P.window}, {"diag", P.diag}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Witt vectors, Greenberg realization and the Witt vector affine Grassmannian at desk scale"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--cache-dir", g.cache_dir, "structure polynomial cache directory (default $WITTGRASS_CACHE_DIR)");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "json", "lines"}));
  app.add_option("--jobs", g.jobs, "worker threads for enumerations")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--max-basis", g.max_basis, "Groebner basis size guard");
  app.add_option("--max-reductions", g.max_reductions, "Groebner reduction guard");

  // witt
  auto* witt = app.add_subcommand("witt", "truncated Witt vector arithmetic")->require_subcommand(1);
  WittCmd wc;
  for (const char* op : {"add", "mul", "sub", "neg", "inv", "teich", "frob", "ver", "pshift"}) {
    auto* s = witt->add_subcommand(op, std::string(op) + " of Witt vector literals");
    add_field(s, wc.f);
    s->add_option("--N", wc.N, "Witt length")->required();
    s->add_flag("--laurent", wc.laurent, "coefficients in F_q[t, t^-1]");
    s->add_option("args", wc.args, "Witt vector literals such as (1,0)");
    s->callback([&, op] { wc.op = op; });
  }
  unsigned tp = 0;
  int tN = 0;
  auto* wtable = witt->add_subcommand("table", "print the integral structure polynomials");
  wtable->add_option("--p", tp, "prime")->required();
  wtable->add_option("--N", tN, "Witt length")->required();

  // greenberg
  auto* gb = app.add_subcommand("greenberg", "Greenberg realization")->require_subcommand(1);
  GreenbergCmd gc;
  auto* realize = gb->add_subcommand("realize", "realize a polynomial map or ideal over W_N");
  add_field(realize, gc.f);
  realize->add_option("--N", gc.N, "Witt length")->required();
  realize->add_option("--map", gc.map, "Witt polynomials in T1..Td separated by ';'");
  realize->add_option("--ideal", gc.ideal, "ideal generators separated by ';'");
  realize->add_option("--arity", gc.arity, "number of variables (default: largest T index)");

  // lattice
  auto* lat = app.add_subcommand("lattice", "lattices over W(F_q)[1/p]")->require_subcommand(1);
  LatticeCmd lc;
  auto* snf = lat->add_subcommand("snf", "Smith normal form of a matrix");
  auto* classify = lat->add_subcommand("classify", "Schubert cell of a determinant-one matrix");
  for (auto* s : {snf, classify}) {
    add_field(s, lc.f);
    s->add_option("--N", lc.N, "working precision")->required();
    s->add_option("--matrix", lc.matrix, "rows separated by ';', entries like p^-1*(1,0)")->required();
  }
  auto* enumerate = lat->add_subcommand("enumerate", "all special lattices in a window");
  add_field(enumerate, lc.f, false);
  enumerate->add_option("--n", lc.n, "rank");
  enumerate->add_option("--window", lc.window, "window w");

  // hilbert
  auto* hil = app.add_subcommand("hilbert", "graded ideals of lattice schemes")->require_subcommand(1);
  HilbertCmd hc;
  auto* hf = hil->add_subcommand("hf", "Hilbert function");
  add_field(hf, hc.f, false);
  hf->add_option("--lambda", hc.lambda, "dominant cocharacter, e.g. 1,-1");
  hf->add_option("--n", hc.n, "rank (must match --lambda)");
  hf->add_option("--N", hc.N, "Witt length");
  hf->add_option("--bound", hc.bound, "largest degree (default 4 p^(N-1))");
  hf->add_flag("--boundary", hc.boundary, "allow N = lambda~_1");
  hf->add_option("--ideal-file", hc.ideal_file, "ideal file instead of --lambda");
  auto* stable = hil->add_subcommand("stable", "module-stability test");
  stable->add_option("--ideal-file", hc.ideal_file, "ideal file")->required();
  auto* limit = hil->add_subcommand("limit", "flat limit at t = 0 of a family");
  limit->add_option("--family-file", hc.family_file, "ideal file with param=t")->required();
  limit->add_option("--param", hc.param, "family parameter");

  // grass
  auto* grass = app.add_subcommand("grass", "Grassmannian-level checks")->require_subcommand(1);
  GrassCmd rc;
  auto* count = grass->add_subcommand("count", "cell table of special lattices");
  count->add_option("--n", rc.n, "rank");
  count->add_option("--q", rc.q, "field size");
  count->add_option("--window", rc.window, "window w");
  count->add_option("--oracle", rc.oracle, "enumeration")->check(CLI::IsMember({"witt", "zadic", "both"}));
  auto* image = grass->add_subcommand("image", "sampled image of the orbit closure");
  image->add_option("--lambda", rc.lambda, "dominant cocharacter")->required();
  image->add_option("--q", rc.q, "field size");
  image->add_option("--samples", rc.samples, "orbit samples");
  image->add_option("--N", rc.N, "Witt length (default lambda~_1)");
  auto* points = grass->add_subcommand("points", "lattice cut out by the F_q-points of an ideal");
  points->add_option("--ideal-file", rc.ideal_file, "ideal file")->required();

  // selftest
  auto* self = app.add_subcommand("selftest", "run the invariant suite");
  selftest::Options so;
  self->add_option("--p", so.p, "prime");
  self->add_option("--N", so.N, "Witt length");
  self->add_option("--q", so.q, "field size (defaults to p^2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!g.cache_dir.empty()) structure::Cache::instance().set_directory(std::filesystem::path(g.cache_dir));
    auto lines_only = [&](bool allowed) {
      if (g.format == "lines" && !allowed) throw UsageError("--format lines is only available for greenberg realize");
    };
    lines_only(realize->parsed());

    if (witt->parsed()) {
      if (wtable->parsed()) {
        witt_table(g, tp, tN);
      } else if (wc.laurent) {
        PolyRing L(wc.f.field(), {Variable{"t", 0, 0, true}});
        run_witt(g, wc, L);
      } else {
        run_witt(g, wc, wc.f.field());
      }
    } else if (realize->parsed()) {
      run_greenberg(g, gc);
    } else if (snf->parsed()) {
      run_snf(g, lc);
    } else if (classify->parsed()) {
      run_classify(g, lc);
    } else if (enumerate->parsed()) {
      if (lc.f.p == 0 && lc.f.q == 0) lc.f.q = 2;
      run_enumerate(g, lc);
    } else if (hf->parsed()) {
      run_hf(g, hc);
    } else if (stable->parsed()) {
      run_stable(g, hc);
    } else if (limit->parsed()) {
      run_limit(g, hc);
    } else if (count->parsed()) {
      return run_count(g, rc);
    } else if (image->parsed()) {
      return run_image(g, rc);
    } else if (points->parsed()) {
      run_points(g, rc);
    } else if (self->parsed()) {
      so.jobs = g.jobs;
      so.seed = g.seed;
      return selftest::run(so, std::cout, g.json());
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const LimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SizeGuard& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceGuard& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SaturationGuard& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
