#include "skelpair/cli.hpp"

#include <chrono>
#include <sstream>

#include <CLI11.hpp>

#include "skelpair/errors.hpp"
#include "skelpair/io.hpp"
#include "skelpair/pairing.hpp"

namespace skelpair {

namespace {

struct Config {
  std::string format = "auto";
  std::string out_path;
  int verbosity = 0;
  int d = 0;
  int n = 0;
  int m = 0;
  std::string graph_path;
  std::vector<std::string> files;
  std::vector<int> levels;
  bool monomials = false;
};

struct Context {
  Config cfg;
  std::ostream& out;
  std::ostream& err;

  void emit(const std::string& text) const {
    if (cfg.out_path.empty() || cfg.out_path == "-") out << text;
    else write_text(text, cfg.out_path);
  }
  bool csv() const { return cfg.format == "csv"; }
  void log(const std::string& msg) const {
    if (cfg.verbosity > 0) err << msg << "\n";
  }
};

Graph load_graph(const Config& cfg) {
  if (cfg.graph_path.empty()) return standard_interval();
  return graph_from_json(read_json_file(cfg.graph_path));
}

void require_d(const Config& cfg) {
  if (cfg.d < 1) throw Error(ErrorKind::InvalidArgument, "--d must be a positive integer");
}

std::vector<LoadedFunction> load_functions(const Context& ctx, const Graph& g) {
  std::vector<LoadedFunction> fs;
  for (const auto& path : ctx.cfg.files) {
    fs.push_back(function_from_json(read_json_file(path), g, ctx.cfg.d));
    if (fs.back().expr)
      for (const auto& w : fs.back().expr->continuity_warnings()) ctx.err << "warning: " << path << ": " << w << "\n";
  }
  if (static_cast<int>(fs.size()) != ctx.cfg.d + 1)
    throw Error(ErrorKind::InvalidArgument, "expected " + std::to_string(ctx.cfg.d + 1) + " function files, got " +
                                                std::to_string(fs.size()));
  return fs;
}

std::vector<ExprFunction> expr_functions(const Context& ctx, const Graph& g) {
  std::vector<ExprFunction> out;
  for (auto& f : load_functions(ctx, g)) {
    if (!f.expr) throw Error(ErrorKind::SchemaError, "this command needs expression functions, got a grid");
    out.push_back(*f.expr);
  }
  return out;
}

DegreeTable table_for(const Context& ctx, int d) {
  auto t0 = std::chrono::steady_clock::now();
  DegreeTable t = build_degree_table(d);
  std::ostringstream msg;
  msg << "degree table d=" << d << ": " << t.size() << " chain monomials in "
      << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s";
  ctx.log(msg.str());
  return t;
}

LimitOptions limit_options(const Config& cfg) {
  LimitOptions o;
  o.m = cfg.m;
  return o;
}

int run_chow_table(const Context& ctx) {
  require_d(ctx.cfg);
  DegreeTable t = table_for(ctx, ctx.cfg.d);
  if (ctx.cfg.monomials) ctx.emit(ctx.csv() ? monomial_table_to_csv(t) : dump(monomial_table_to_json(t)));
  else ctx.emit(ctx.csv() ? fdegree_table_to_csv(t) : dump(fdegree_table_to_json(t)));
  return 0;
}

int run_chow_vanishing(const Context& ctx) {
  require_d(ctx.cfg);
  DegreeTable t = table_for(ctx, ctx.cfg.d);
  VanishingReport r = check_vanishing(t);
  ctx.emit(dump(vanishing_to_json(r)));
  return r.ok() ? 0 : 1;
}

int run_pair_exact(const Context& ctx) {
  require_d(ctx.cfg);
  Graph g = load_graph(ctx.cfg);
  std::vector<GridFunction> grids;
  for (auto& f : load_functions(ctx, g)) {
    if (f.grid) {
      if (ctx.cfg.n > 0 && f.grid->n() != ctx.cfg.n)
        throw Error(ErrorKind::LevelMismatch, "grid at level " + std::to_string(f.grid->n()) + " but --n " +
                                                  std::to_string(ctx.cfg.n));
      grids.push_back(*f.grid);
    } else {
      if (ctx.cfg.n < 1) throw Error(ErrorKind::InvalidArgument, "--n is required for expression inputs");
      grids.push_back(standard_approximation(*f.expr, ctx.cfg.n));
    }
  }
  DegreeTable t = table_for(ctx, ctx.cfg.d);
  ctx.emit(dump(report_to_json(pair_exact(grids, t))));
  return 0;
}

int run_pair_limit(const Context& ctx) {
  require_d(ctx.cfg);
  Graph g = load_graph(ctx.cfg);
  auto fs = expr_functions(ctx, g);
  DegreeTable t = table_for(ctx, ctx.cfg.d);
  VanishingReport proof = check_vanishing(t);
  ctx.emit(dump(report_to_json(pair_limit(fs, t, &proof, limit_options(ctx.cfg)))));
  return 0;
}

int run_pair_zhang2(const Context& ctx) {
  if (ctx.cfg.d != 0 && ctx.cfg.d != 2) throw Error(ErrorKind::InvalidArgument, "zhang2 is the d=2 formula");
  Context c2{ctx.cfg, ctx.out, ctx.err};
  c2.cfg.d = 2;
  Graph g = load_graph(c2.cfg);
  auto fs = expr_functions(c2, g);
  Zhang2 z = pair_zhang2(fs[0], fs[1], fs[2], limit_options(c2.cfg));
  json j = {{"smooth", z.smooth}, {"singular", z.singular}, {"total", z.total}};
  ctx.emit(dump(j));
  return 0;
}

int run_pair_cube3(const Context& ctx) {
  if (ctx.cfg.d != 0 && ctx.cfg.d != 3) throw Error(ErrorKind::InvalidArgument, "cube3 is the d=3 formula");
  Context c3{ctx.cfg, ctx.out, ctx.err};
  c3.cfg.d = 3;
  Graph g = load_graph(c3.cfg);
  auto fs = expr_functions(c3, g);
  DegreeTable t = table_for(ctx, 3);
  double v = pair_cube3(fs, t, limit_options(c3.cfg));
  ctx.emit(dump(json{{"value", v}}));
  return 0;
}

int run_converge(const Context& ctx) {
  require_d(ctx.cfg);
  if (ctx.cfg.levels.empty()) throw Error(ErrorKind::InvalidArgument, "--levels is required");
  Graph g = load_graph(ctx.cfg);
  auto fs = expr_functions(ctx, g);
  DegreeTable t = table_for(ctx, ctx.cfg.d);
  VanishingReport proof = check_vanishing(t);
  auto rows = convergence_table(fs, ctx.cfg.levels, t, &proof, limit_options(ctx.cfg));
  ctx.emit(ctx.csv() ? convergence_to_csv(rows) : dump(convergence_to_json(rows)));
  return 0;
}

int run_demo_counterexample(const Context& ctx) {
  const int n = ctx.cfg.n > 0 ? ctx.cfg.n : 1;
  DegreeTable t = table_for(ctx, 2);
  Counterexample ce = counterexample_triple(n, t);
  if (ctx.cfg.format == "json") ctx.emit(dump(json{{"n", n}, {"value", to_string(ce.value)}}));
  else ctx.emit(to_string(ce.value) + "\n");
  return 0;
}

// d=1 identity on I: <f0,f1> = -int (D f0)(D f1), here for x^2 and x^3 at level n
int run_demo_d1(const Context& ctx) {
  const int n = ctx.cfg.n > 0 ? ctx.cfg.n : 4;
  DegreeTable t = table_for(ctx, 1);
  Graph I = standard_interval();
  auto f0 = standard_approximation(ExprFunction::uniform(I, 1, Smoothness::Cubes, "x1^2"), n);
  auto f1 = standard_approximation(ExprFunction::uniform(I, 1, Smoothness::Cubes, "x1^3"), n);
  Rational pairing = pair_exact({f0, f1}, t).value.q;
  Rational integral = 0;
  for (int i = 0; i < n; ++i) {
    std::vector<int> a{i}, b{i + 1};
    Rational s0 = (f0.at(0, b) - f0.at(0, a)) * n, s1 = (f1.at(0, b) - f1.at(0, a)) * n;
    integral -= s0 * s1 / n;
  }
  integral.canonicalize();
  if (ctx.cfg.format == "json")
    ctx.emit(dump(json{{"n", n}, {"pairing", to_string(pairing)}, {"minus_integral", to_string(integral)},
                       {"equal", pairing == integral}}));
  else ctx.emit("pairing " + to_string(pairing) + "\nminus_integral " + to_string(integral) + "\n");
  return pairing == integral ? 0 : 4;
}

void error_json(std::ostream& err, const std::string& kind, const std::string& message,
                const std::map<std::string, std::string>& detail = {}) {
  json j = {{"error", kind}, {"message", message}};
  if (!detail.empty()) j["detail"] = detail;
  err << j.dump() << "\n";
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Context ctx{Config{}, out, err};
  Config& cfg = ctx.cfg;
  CLI::App app{"Intersection pairings on powers of metrized graphs", "skelpair"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", cfg.format, "json or csv (demos print plain text unless json)")
      ->check(CLI::IsMember({"auto", "json", "csv", "text"}));
  app.add_option("--out", cfg.out_path, "write output to this file");
  app.add_flag("-v,--verbose", cfg.verbosity, "progress on stderr");

  std::function<int()> action;
  auto bind = [&](CLI::App* sub, int (*fn)(const Context&)) {
    sub->callback([&action, &ctx, fn]() { action = [&ctx, fn]() { return fn(ctx); }; });
  };

  auto* chow = app.add_subcommand("chow", "combinatorial Chow ring of the cube");
  chow->require_subcommand(1);
  auto* table = chow->add_subcommand("table", "F-degree table (or --monomials for ldeg of monomials)");
  table->add_option("--d", cfg.d)->required();
  table->add_flag("--monomials", cfg.monomials);
  bind(table, run_chow_table);
  auto* van = chow->add_subcommand("vanishing", "check the vanishing condition; exit 1 on violations");
  van->add_option("--d", cfg.d)->required();
  bind(van, run_chow_vanishing);

  auto* pair = app.add_subcommand("pair", "intersection pairings");
  pair->require_subcommand(1);
  auto add_pair = [&](const char* name, const char* help, int (*fn)(const Context&), bool with_n) {
    auto* s = pair->add_subcommand(name, help);
    s->add_option("--graph", cfg.graph_path, "graph JSON (default: the interval I)")->check(CLI::ExistingFile);
    s->add_option("--d", cfg.d);
    if (with_n) s->add_option("--n", cfg.n, "lattice level");
    s->add_option("--m", cfg.m, "quadrature points per axis");
    s->add_option("files", cfg.files, "function JSON files")->required()->check(CLI::ExistingFile);
    bind(s, fn);
  };
  add_pair("exact", "exact pairing of grid (or standard-approximated) functions", run_pair_exact, true);
  add_pair("limit", "limit pairing of expression functions", run_pair_limit, false);
  add_pair("zhang2", "d=2 smooth + singular formula", run_pair_zhang2, false);
  add_pair("cube3", "d=3 formula for cube-smooth functions", run_pair_cube3, false);

  auto* conv = app.add_subcommand("converge", "exact pairings of standard approximations vs the limit");
  conv->add_option("--graph", cfg.graph_path)->check(CLI::ExistingFile);
  conv->add_option("--d", cfg.d)->required();
  conv->add_option("--levels", cfg.levels)->delimiter(',')->required();
  conv->add_option("--m", cfg.m);
  conv->add_option("files", cfg.files)->required()->check(CLI::ExistingFile);
  bind(conv, run_converge);

  auto* demo = app.add_subcommand("demo", "built-in examples");
  demo->require_subcommand(1);
  auto* ce = demo->add_subcommand("counterexample", "triangle-wave triple at level n");
  ce->add_option("--n", cfg.n)->required()->check(CLI::PositiveNumber);
  bind(ce, run_demo_counterexample);
  auto* d1 = demo->add_subcommand("d1-fakt", "d=1 pairing equals minus the integral of the derivative product");
  d1->add_option("--n", cfg.n)->check(CLI::PositiveNumber);
  bind(d1, run_demo_d1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    error_json(err, "UsageError", e.what());
    return 2;
  }
  if (!action) {
    error_json(err, "UsageError", "no command given");
    return 2;
  }
  try {
    return action();
  } catch (const Error& e) {
    error_json(err, std::string(to_string(e.kind())), e.what(), e.detail());
    return is_input_error(e.kind()) ? 3 : 4;
  } catch (const json::exception& e) {
    error_json(err, "SchemaError", e.what());
    return 3;
  } catch (const std::bad_alloc&) {
    error_json(err, "TooLarge", "out of memory");
    return 4;
  } catch (const std::exception& e) {
    error_json(err, "InternalError", e.what());
    return 4;
  }
}

}  // namespace skelpair
