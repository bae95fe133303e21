// adeglab: command-line front end to the core library.
//
// Exit codes: 0 success, 1 usage or precondition, 2 budget or numerical
// limits, 3 failed internal invariant.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adeglab/amplify.hpp"
#include "adeglab/cache.hpp"
#include "adeglab/degrees.hpp"
#include "adeglab/errors.hpp"
#include "adeglab/experiments.hpp"
#include "adeglab/expr.hpp"
#include "adeglab/gadgets.hpp"
#include "adeglab/json_io.hpp"
#include "adeglab/spectral.hpp"

namespace {

using namespace adeglab;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitLimit = 2;
constexpr int kExitInvariant = 3;

struct Globals {
  std::string mode = "exact";
  std::string out;
  std::uint64_t seed = 1;
  int jobs = 1;
  bool no_cache = false;
  std::string cache_dir;
  std::string command_line;
};

class Session {
 public:
  explicit Session(const Globals& g) : globals_(g) {
    if (g.mode == "float") {
      options_.mode = lp::Mode::floating();
    } else if (g.mode != "exact") {
      throw PreconditionError("--mode must be exact or float");
    }
    if (!g.no_cache) {
      cache_.emplace(g.cache_dir.empty() ? DegreeCache::default_directory() : std::filesystem::path(g.cache_dir));
      options_.cache = &*cache_;
    }
  }

  const DegreeOptions& options() const { return options_; }
  const Globals& globals() const { return globals_; }
  DegreeCache& cache() {
    if (!cache_) cache_.emplace(DegreeCache::default_directory());
    return *cache_;
  }

  Manifest manifest(const std::string& experiment) const {
    Manifest m;
    m.add("tool", "adeglab " + std::string(library_version()))
        .add("experiment", experiment)
        .add("command", globals_.command_line)
        .add("mode", globals_.mode)
        .add("seed", std::to_string(globals_.seed));
    return m;
  }

  void emit(const std::string& text) const {
    if (globals_.out.empty() || globals_.out == "-") {
      std::cout << text;
      if (!text.empty() && text.back() != '\n') std::cout << '\n';
      return;
    }
    std::ofstream file(globals_.out, std::ios::binary);
    if (!file) throw PreconditionError("cannot write " + globals_.out);
    file << text;
    if (!text.empty() && text.back() != '\n') file << '\n';
  }

  void emit(const Json& j) const { emit(j.dump(2)); }

 private:
  Globals globals_;
  DegreeOptions options_;
  std::optional<DegreeCache> cache_;
};

Rational parse_epsilon(const std::string& text) { return parse_rational(text); }

Json certificate_summary(const DegreeCertificate& c) {
  Json optima = Json::array();
  for (const auto& v : c.optimum_by_degree) optima.push_back(rational_to_json(v));
  return {{"degree", c.degree}, {"epsilon", rational_to_json(c.epsilon)}, {"optimum_by_degree", optima},
          {"exact", c.exact}};
}

// --- analyze --------------------------------------------------------------

struct AnalyzeArgs {
  std::string expr;
  std::string eps = "1/3";
  bool certificates = false;
};

int run_analyze(Session& s, const AnalyzeArgs& a) {
  const auto parsed = parse_function_expr(a.expr);
  const auto f = evaluate_expr(parsed);
  const Rational eps = parse_epsilon(a.eps);
  const auto exact = exact_degree(f);
  const auto approx = approx_degree(f, eps, s.options());
  const auto sign = sign_degree(f, s.options());
  const auto one_sided = one_sided_approx_degree(f, eps, s.options());
  const auto spectral = spectral_sensitivity(f);
  Json j = {{"expression", print_function_expr(parsed)},
            {"literal", to_literal(f)},
            {"arity", f.arity()},
            {"class", std::string(to_string(classify(f)))},
            {"monotone", is_monotone(f)},
            {"degree", exact.degree},
            {"approx_degree", certificate_summary(approx)},
            {"sign_degree", sign.degree},
            {"one_sided_degree", certificate_summary(one_sided)},
            {"lambda", spectral.lambda},
            {"max_sensitivity", max_sensitivity(f)}};
  if (a.certificates) {
    j["certificates"] = {{"exact", certificate_to_json(exact)},
                         {"approx", certificate_to_json(approx)},
                         {"sign", certificate_to_json(sign)},
                         {"one_sided", certificate_to_json(one_sided)}};
  }
  s.emit(j);
  return kExitOk;
}

// --- dual -----------------------------------------------------------------

struct DualArgs {
  std::string expr;
  std::string eps = "1/3";
  int degree = 1;
  bool one_sided = false;
};

int run_dual(Session& s, const DualArgs& a) {
  const auto f = function_from_expr(a.expr);
  const Rational eps = parse_epsilon(a.eps);
  const auto result = a.one_sided ? one_sided_dual_witness(f, eps, a.degree, s.options())
                                  : dual_witness(f, eps, a.degree, s.options());
  Json j;
  if (const auto* w = std::get_if<DualWitness>(&result)) {
    j = {{"kind", "witness"}, {"witness", witness_to_json(*w)}};
  } else {
    j = {{"kind", "refutation"}, {"refutation", refutation_to_json(std::get<Refutation>(result))}};
  }
  s.emit(j);
  return kExitOk;
}

// --- simulate-gates -------------------------------------------------------

int run_simulate(Session& s, const std::string& expr) {
  const auto h = function_from_expr(expr);
  auto and_circuit = simulate_and2(h);
  auto or_circuit = simulate_or2(h);
  const auto block = find_min_sensitive_block2(h);
  Json gadget = nullptr;
  if (const auto g = find_negation_gadget(h)) {
    Json fixed = Json::object();
    for (const auto& [i, bit] : g->fixed.values) fixed["x" + std::to_string(i)] = bit ? 1 : 0;
    gadget = {{"fixed", fixed}, {"free", g->free_index}};
  }
  Json j = {{"literal", to_literal(h)},
            {"class", std::string(to_string(classify(h)))},
            {"negation_gadget", gadget},
            {"sensitive_block",
             {{"point", bitstring(index_of(block.point), h.arity())},
              {"i", block.i},
              {"j", block.j},
              {"orientation", block.orientation ? "OR" : "AND"}}},
            {"and2", circuit_to_json(and_circuit)},
            {"or2", circuit_to_json(or_circuit)}};
  s.emit(j);
  return and_circuit.verified && or_circuit.verified ? kExitOk : kExitInvariant;
}

// --- census ---------------------------------------------------------------

struct CensusArgs {
  int arity = 3;
  std::optional<std::uint64_t> sample;
  std::string format = "json";
  bool entries = false;
};

int run_census(Session& s, const CensusArgs& a) {
  const auto report = gadget_census(a.arity, a.sample, s.globals().seed, s.globals().jobs);
  if (a.format == "csv") {
    std::ostringstream out;
    write_census_csv(out, report, s.manifest("gadget_census"));
    s.emit(out.str());
  } else {
    Json j = census_to_json(report, a.entries);
    j["manifest"] = s.manifest("gadget_census").to_json();
    s.emit(j);
  }
  const bool count_ok = !report.expected_qualifying || *report.expected_qualifying == report.qualifying;
  return report.passed == report.qualifying && count_ok ? kExitOk : kExitInvariant;
}

// --- compose-table --------------------------------------------------------

struct ComposeArgs {
  std::string pairs_file;
  std::string eps = "1/3";
  std::string format = "csv";
  bool no_runtime = false;
};

std::vector<std::pair<NamedFunction, NamedFunction>> read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read pairs file " + path);
  std::vector<std::pair<NamedFunction, NamedFunction>> pairs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto sep = line.find(';');
    if (sep == std::string::npos) {
      throw PreconditionError(path + ":" + std::to_string(line_no) + ": expected 'f ; g'");
    }
    pairs.emplace_back(named(line.substr(0, sep)), named(line.substr(sep + 1)));
  }
  return pairs;
}

int run_compose(Session& s, const ComposeArgs& a) {
  const auto pairs = a.pairs_file.empty() ? default_composition_grid() : read_pairs(a.pairs_file);
  CompositionOptions options;
  options.epsilon = parse_epsilon(a.eps);
  options.degree = s.options();
  options.jobs = s.globals().jobs;
  const auto rows = composition_table(pairs, options);
  auto manifest = s.manifest("composition_table");
  manifest.add("epsilon", to_string(options.epsilon)).add("pairs", std::to_string(pairs.size()));
  std::ostringstream out;
  if (a.format == "jsonl") {
    write_rows_jsonl(out, rows, manifest, !a.no_runtime);
  } else {
    write_rows_csv(out, rows, manifest, !a.no_runtime);
  }
  s.emit(out.str());
  int code = kExitOk;
  for (const auto& r : rows) {
    if (!r.error.empty()) code = std::max(code, kExitLimit);
    else if (!r.sandwich_ok) code = kExitInvariant;
  }
  return code;
}

// --- amplify --------------------------------------------------------------

struct AmplifyArgs {
  std::string outer = "AND2";
  std::string inner = "XOR2";
  std::string middle = "MAJ";
  int t = 1;
  std::string eps = "1/3";
  std::string delta = "1/4";
  bool suite = false;
  std::string format = "json";
};

int run_amplify(Session& s, const AmplifyArgs& a) {
  const Rational eps = parse_epsilon(a.eps);
  const Rational delta = parse_epsilon(a.delta);
  std::vector<PipelineConfig> configs;
  if (a.suite) {
    configs = default_pipeline_suite(eps, delta, s.options());
  } else {
    const auto outer = named(a.outer);
    const auto inner = named(a.inner);
    PipelineConfig c;
    c.outer = outer.fn;
    c.inner = inner.fn;
    c.outer_label = outer.id;
    c.inner_label = inner.id;
    c.t = a.t;
    c.epsilon = eps;
    c.delta = delta;
    c.options = s.options();
    std::string upper = a.middle;
    for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (upper == "MAJ" || upper == "AND") {
      c.middle = parse_middle(upper);
    } else {
      c.middle = Middle::Given;
      c.given = function_from_expr(a.middle);
    }
    configs.push_back(std::move(c));
  }
  const auto outcomes = pipeline_suite(configs, s.globals().jobs);
  auto manifest = s.manifest("amplifier_pipeline");
  manifest.add("epsilon", to_string(eps)).add("delta", to_string(delta));
  if (a.format == "csv") {
    std::ostringstream out;
    write_pipeline_csv(out, outcomes, manifest);
    s.emit(out.str());
  } else {
    Json reports = Json::array();
    for (const auto& o : outcomes) {
      reports.push_back(o.report ? report_to_json(*o.report) : Json{{"label", o.label}, {"error", o.error}});
    }
    s.emit(a.suite ? Json{{"manifest", manifest.to_json()}, {"reports", reports}} : reports.at(0));
  }
  int code = kExitOk;
  for (const auto& o : outcomes) {
    if (!o.report) {
      code = std::max(code, o.invariant_error ? kExitInvariant : kExitLimit);
    } else if (!o.report->invariants_ok()) {
      code = kExitInvariant;
    }
  }
  return code;
}

// --- maj-projection -------------------------------------------------------

struct ProjectionArgs {
  int n = 5;
  std::string base = "MAJ3";
  int d_max = 6;
  std::uint64_t attempts = 100000;
};

int run_projection(Session& s, const ProjectionArgs& a) {
  MajorityProjectionOptions options;
  options.d_max = a.d_max;
  options.seed = s.globals().seed;
  options.attempts_per_depth = a.attempts;
  const auto base = parse_majority_base(a.base);
  const auto r = majority_projection(a.n, base, options);
  Json leaves = Json::array();
  for (const auto& t : r.projection.targets) {
    leaves.push_back(t.is_var() ? "x" + std::to_string(t.value) : std::to_string(t.value));
  }
  Json j = {{"n", a.n},
            {"base", std::string(to_string(base))},
            {"seed", s.globals().seed},
            {"found", r.found},
            {"depth", r.found ? Json(r.depth) : Json(nullptr)},
            {"attempts_by_depth", r.attempts_by_depth},
            {"leaves", leaves}};
  s.emit(j);
  return r.found ? kExitOk : kExitLimit;
}

// --- cache gc -------------------------------------------------------------

int run_cache_gc(Session& s, bool all) {
  auto& cache = s.cache();
  const auto report = cache.gc(all);
  s.emit(Json{{"directory", cache.directory().string()}, {"kept", report.kept}, {"removed", report.removed}});
  return kExitOk;
}

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) out += ' ';
    out += argv[i];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate-degree laboratory: degrees, dual witnesses, gadgets and amplifiers"};
  app.require_subcommand(1);
  Globals globals;
  globals.command_line = join_args(argc, argv);
  app.add_option("--mode", globals.mode, "LP arithmetic: exact or float")
      ->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--out", globals.out, "Write output here instead of stdout");
  app.add_option("--seed", globals.seed, "Seed for randomized searches and samples");
  app.add_option("--jobs", globals.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--no-cache", globals.no_cache, "Do not read or write the degree cache");
  app.add_option("--cache-dir", globals.cache_dir, "Cache directory (default $ADEGLAB_CACHE_DIR)");

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Exact, approximate, sign and one-sided degree, and lambda");
  analyze_cmd->add_option("expr", analyze.expr, "Function expression, e.g. 'MAJ3^2'")->required();
  analyze_cmd->add_option("--eps", analyze.eps, "Error threshold as a rational, e.g. 1/3");
  analyze_cmd->add_flag("--certificates", analyze.certificates, "Include full certificates");

  DualArgs dual;
  auto* dual_cmd = app.add_subcommand("dual", "Dual witness of a given purity, or a refutation");
  dual_cmd->add_option("expr", dual.expr)->required();
  dual_cmd->add_option("--eps", dual.eps);
  dual_cmd->add_option("--degree", dual.degree, "Purity degree")->required();
  dual_cmd->add_flag("--one-sided", dual.one_sided);

  std::string simulate_expr;
  auto* simulate_cmd = app.add_subcommand("simulate-gates", "AND2/OR2 circuits from copies of a function");
  simulate_cmd->add_option("expr", simulate_expr)->required();

  CensusArgs census;
  auto* census_cmd = app.add_subcommand("census", "Gadget census over all or sampled functions");
  census_cmd->add_option("--arity", census.arity)->required();
  census_cmd->add_option("--sample", census.sample, "Check this many random qualifying functions");
  census_cmd->add_option("--format", census.format)->check(CLI::IsMember({"json", "csv"}));
  census_cmd->add_flag("--entries", census.entries, "List every function in JSON output");

  ComposeArgs compose_args;
  auto* compose_cmd = app.add_subcommand("compose-table", "Degree table for composed pairs");
  compose_cmd->add_option("--pairs", compose_args.pairs_file, "File of 'f ; g' lines (default: built-in grid)");
  compose_cmd->add_option("--eps", compose_args.eps);
  compose_cmd->add_option("--format", compose_args.format)->check(CLI::IsMember({"csv", "jsonl"}));
  compose_cmd->add_flag("--no-runtime", compose_args.no_runtime, "Omit the runtime column");

  AmplifyArgs amplify;
  auto* amplify_cmd = app.add_subcommand("amplify", "Run the amplifier pipeline on f o middle_t o g");
  amplify_cmd->add_option("--outer", amplify.outer);
  amplify_cmd->add_option("--inner", amplify.inner);
  amplify_cmd->add_option("--middle", amplify.middle, "MAJ, AND, or an amplifier expression");
  amplify_cmd->add_option("--t", amplify.t, "Copies per outer variable");
  amplify_cmd->add_option("--eps", amplify.eps);
  amplify_cmd->add_option("--delta", amplify.delta);
  amplify_cmd->add_flag("--suite", amplify.suite, "Run the built-in grid instead");
  amplify_cmd->add_option("--format", amplify.format)->check(CLI::IsMember({"json", "csv"}));

  ProjectionArgs projection;
  auto* projection_cmd = app.add_subcommand("maj-projection", "Find MAJ_n as a projection of a recursive tree");
  projection_cmd->add_option("--n", projection.n)->required();
  projection_cmd->add_option("--base", projection.base, "MAJ3 or AND2oOR2");
  projection_cmd->add_option("--d-max", projection.d_max);
  projection_cmd->add_option("--attempts", projection.attempts, "Labellings tried per depth");

  bool gc_all = false;
  auto* cache_cmd = app.add_subcommand("cache", "Degree cache maintenance");
  cache_cmd->require_subcommand(1);
  auto* gc_cmd = cache_cmd->add_subcommand("gc", "Remove stale entries");
  gc_cmd->add_flag("--all", gc_all, "Remove every entry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    Session session(globals);
    if (*analyze_cmd) return run_analyze(session, analyze);
    if (*dual_cmd) return run_dual(session, dual);
    if (*simulate_cmd) return run_simulate(session, simulate_expr);
    if (*census_cmd) return run_census(session, census);
    if (*compose_cmd) return run_compose(session, compose_args);
    if (*amplify_cmd) return run_amplify(session, amplify);
    if (*projection_cmd) return run_projection(session, projection);
    if (*gc_cmd) return run_cache_gc(session, gc_all);
  } catch (const PreconditionError& e) {
    std::cerr << "adeglab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const LimitError& e) {
    std::cerr << "adeglab: limit: " << e.what() << '\n';
    return kExitLimit;
  } catch (const NumericalError& e) {
    std::cerr << "adeglab: numerical: " << e.what() << '\n';
    return kExitLimit;
  } catch (const InvariantError& e) {
    std::cerr << "adeglab: invariant violated: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "adeglab: internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitUsage;
}
