#include "adeglab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "adeglab/errors.hpp"
#include "adeglab/expr.hpp"
#include "adeglab/spectral.hpp"

#ifndef ADEGLAB_VERSION
#define ADEGLAB_VERSION "unknown"
#endif

namespace adeglab {

std::string_view library_version() { return ADEGLAB_VERSION; }

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& job) {
  const std::size_t workers = std::min<std::size_t>(std::max(jobs, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            job(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

NamedFunction named(std::string_view expr) {
  const auto parsed = parse_function_expr(expr);
  return {print_function_expr(parsed), evaluate_expr(parsed)};
}

Manifest& Manifest::add(std::string key, std::string value) {
  entries.emplace_back(std::move(key), std::move(value));
  return *this;
}

void Manifest::write_comments(std::ostream& out) const {
  for (const auto& [key, value] : entries) out << "# " << key << ": " << value << '\n';
}

Json Manifest::to_json() const {
  Json j = Json::object();
  for (const auto& [key, value] : entries) j[key] = value;
  return j;
}

namespace {

long long elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
}

std::string fixed(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.9f", value);
  return buffer;
}

}  // namespace

// --- composition table ----------------------------------------------------

std::vector<std::pair<NamedFunction, NamedFunction>> default_composition_grid() {
  const char* pairs[][2] = {{"AND2", "XOR2"}, {"XOR2", "XOR2"}, {"MAJ3", "MAJ3"}, {"OR2", "AND2"},
                            {"AND2", "OR2"},  {"AND3", "OR3"},  {"OR3", "AND3"},  {"MAJ3", "XOR2"},
                            {"XOR2", "MAJ3"}, {"AND2", "MAJ3"}, {"OR4", "AND3"},  {"XOR3", "AND4"}};
  std::vector<std::pair<NamedFunction, NamedFunction>> out;
  for (const auto& [f, g] : pairs) out.emplace_back(named(f), named(g));
  return out;
}

std::vector<ExperimentRow> composition_table(const std::vector<std::pair<NamedFunction, NamedFunction>>& pairs,
                                             const CompositionOptions& options) {
  std::vector<ExperimentRow> rows(pairs.size());
  parallel_for(pairs.size(), options.jobs, [&](std::size_t k) {
    const auto start = std::chrono::steady_clock::now();
    const auto& [f, g] = pairs[k];
    ExperimentRow& row = rows[k];
    row.f_id = f.id;
    row.g_id = g.id;
    row.total_arity = f.fn.arity() * g.fn.arity();
    try {
      const BooleanFunction fg = compose(f.fn, g.fn);
      row.adeg_f = approx_degree(f.fn, options.epsilon, options.degree).degree;
      row.adeg_g = approx_degree(g.fn, options.epsilon, options.degree).degree;
      row.adeg_fg = approx_degree(fg, options.epsilon, options.degree).degree;
      row.deg_f = exact_degree(f.fn).degree;
      row.deg_g = exact_degree(g.fn).degree;
      row.deg_fg = exact_degree(fg).degree;
      row.lambda_f = spectral_sensitivity(f.fn).lambda;
      row.lambda_g = spectral_sensitivity(g.fn).lambda;
      row.lambda_fg = spectral_sensitivity(fg).lambda;
      const int product = row.adeg_f * row.adeg_g;
      row.ratio = product == 0 ? Rational(0) : Rational(row.adeg_fg) / product;
      row.sandwich_ok =
          std::max(row.adeg_f, row.adeg_g) <= row.adeg_fg && row.adeg_fg <= row.deg_f * row.deg_g;
    } catch (const LimitError& e) {
      row.error = std::string("limit: ") + e.what();
    } catch (const NumericalError& e) {
      row.error = std::string("numerical: ") + e.what();
    }
    row.runtime_ms = elapsed_ms(start);
  });
  return rows;
}

Json row_to_json(const ExperimentRow& row, bool with_runtime) {
  Json j = {{"f", row.f_id},
            {"g", row.g_id},
            {"total_arity", row.total_arity},
            {"adeg_f", row.adeg_f},
            {"adeg_g", row.adeg_g},
            {"adeg_fg", row.adeg_fg},
            {"deg_f", row.deg_f},
            {"deg_g", row.deg_g},
            {"deg_fg", row.deg_fg},
            {"lambda_f", row.lambda_f},
            {"lambda_g", row.lambda_g},
            {"lambda_fg", row.lambda_fg},
            {"ratio", rational_to_json(row.ratio)},
            {"sandwich_ok", row.sandwich_ok},
            {"error", row.error}};
  if (with_runtime) j["runtime_ms"] = row.runtime_ms;
  return j;
}

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows, const Manifest& manifest,
                    bool with_runtime) {
  manifest.write_comments(out);
  out << "f,g,total_arity,adeg_f,adeg_g,adeg_fg,deg_f,deg_g,deg_fg,lambda_f,lambda_g,lambda_fg,ratio,"
         "sandwich_ok,error";
  if (with_runtime) out << ",runtime_ms";
  out << '\n';
  for (const auto& r : rows) {
    out << csv_escape(r.f_id) << ',' << csv_escape(r.g_id) << ',' << r.total_arity << ',' << r.adeg_f << ','
        << r.adeg_g << ',' << r.adeg_fg << ',' << r.deg_f << ',' << r.deg_g << ',' << r.deg_fg << ','
        << fixed(r.lambda_f) << ',' << fixed(r.lambda_g) << ',' << fixed(r.lambda_fg) << ',' << to_string(r.ratio)
        << ',' << r.sandwich_ok << ',' << csv_escape(r.error);
    if (with_runtime) out << ',' << r.runtime_ms;
    out << '\n';
  }
}

void write_rows_jsonl(std::ostream& out, const std::vector<ExperimentRow>& rows, const Manifest& manifest,
                      bool with_runtime) {
  out << Json{{"manifest", manifest.to_json()}}.dump() << '\n';
  for (const auto& r : rows) out << row_to_json(r, with_runtime).dump() << '\n';
}

// --- gadget census --------------------------------------------------------

std::uint64_t qualifying_count(int t) {
  if (t < 2 || t > 5) throw PreconditionError("qualifying_count: t must be in 2..5");
  // Functions depending on all t variables: sum_k (-1)^(t-k) C(t,k) 2^(2^k).
  std::int64_t sum = 0;
  std::int64_t binom = 1;
  for (int k = 0; k <= t; ++k) {
    if (k > 0) binom = binom * (t - k + 1) / k;
    const std::int64_t term = binom * static_cast<std::int64_t>(std::uint64_t{1} << (1u << k));
    sum += ((t - k) % 2 == 0) ? term : -term;
  }
  return static_cast<std::uint64_t>(sum) - 4;
}

namespace {

CensusEntry check_census_function(const BooleanFunction& h) {
  CensusEntry e;
  e.function = h;
  try {
    const auto and_circuit = simulate_and2(h);
    const auto or_circuit = simulate_or2(h);
    e.and_depth = and_circuit.depth();
    e.or_depth = or_circuit.depth();
    e.block = find_min_sensitive_block2(h);
    if (!and_circuit.verified || !or_circuit.verified) {
      e.failure = "circuit not verified";
    } else if (e.and_depth > 3 || e.or_depth > 3) {
      e.failure = "depth above 3";
    } else if (!is_min_sensitive_block2(h, e.block)) {
      e.failure = "sensitive block does not re-verify";
    }
  } catch (const Error& err) {
    e.failure = err.what();
  }
  e.passed = e.failure.empty();
  return e;
}

bool qualifies(const BooleanFunction& h) {
  const auto c = classify(h);
  return c == FunctionClass::MonotoneOther || c == FunctionClass::NonMonotoneOther;
}

}  // namespace

CensusReport gadget_census(int t, std::optional<std::uint64_t> sample, std::uint64_t seed, int jobs) {
  if (t < 2 || t > 16) throw PreconditionError("census: t must be in 2..16");
  if (!sample && t > 4) throw PreconditionError("census: t > 4 needs a sample size");
  CensusReport report;
  report.t = t;
  report.sample = sample;
  report.seed = seed;

  std::vector<BooleanFunction> functions;
  if (!sample) {
    const std::uint64_t count = std::uint64_t{1} << (1u << t);
    report.examined = count;
    for (std::uint64_t table = 0; table < count; ++table) {
      auto h = BooleanFunction::from_words(t, {table});
      if (qualifies(h)) functions.push_back(std::move(h));
    }
    report.expected_qualifying = qualifying_count(t);
  } else {
    std::mt19937_64 rng(seed);
    const std::size_t words = BooleanFunction::word_count(t);
    const std::uint64_t mask = t >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (1u << t)) - 1;
    while (functions.size() < *sample) {
      std::vector<std::uint64_t> table(words);
      for (auto& w : table) w = rng() & mask;
      ++report.examined;
      auto h = BooleanFunction::from_words(t, std::move(table));
      if (qualifies(h)) functions.push_back(std::move(h));
    }
  }
  report.qualifying = functions.size();
  report.entries.resize(functions.size());
  parallel_for(functions.size(), jobs, [&](std::size_t k) { report.entries[k] = check_census_function(functions[k]); });
  report.passed = static_cast<std::uint64_t>(
      std::count_if(report.entries.begin(), report.entries.end(), [](const CensusEntry& e) { return e.passed; }));
  return report;
}

Json census_to_json(const CensusReport& report, bool with_entries) {
  std::map<int, std::uint64_t> and_depths, or_depths;
  for (const auto& e : report.entries) {
    if (!e.passed) continue;
    ++and_depths[e.and_depth];
    ++or_depths[e.or_depth];
  }
  auto histogram = [](const std::map<int, std::uint64_t>& m) {
    Json j = Json::object();
    for (const auto& [depth, count] : m) j[std::to_string(depth)] = count;
    return j;
  };
  Json j = {{"t", report.t},
            {"sample", report.sample ? Json(*report.sample) : Json(nullptr)},
            {"seed", report.seed},
            {"examined", report.examined},
            {"qualifying", report.qualifying},
            {"expected_qualifying",
             report.expected_qualifying ? Json(*report.expected_qualifying) : Json(nullptr)},
            {"passed", report.passed},
            {"and_depths", histogram(and_depths)},
            {"or_depths", histogram(or_depths)}};
  Json failures = Json::array();
  for (const auto& e : report.entries) {
    if (!e.passed) failures.push_back({{"function", to_literal(e.function)}, {"failure", e.failure}});
  }
  j["failures"] = failures;
  if (with_entries) {
    Json entries = Json::array();
    for (const auto& e : report.entries) {
      entries.push_back({{"function", to_literal(e.function)},
                         {"passed", e.passed},
                         {"and_depth", e.and_depth},
                         {"or_depth", e.or_depth},
                         {"block_point", bitstring(index_of(e.block.point), report.t)},
                         {"block_pair", {e.block.i, e.block.j}}});
    }
    j["entries"] = entries;
  }
  return j;
}

void write_census_csv(std::ostream& out, const CensusReport& report, const Manifest& manifest) {
  manifest.write_comments(out);
  out << "# examined: " << report.examined << '\n'
      << "# qualifying: " << report.qualifying << '\n'
      << "# passed: " << report.passed << '\n';
  if (report.expected_qualifying) out << "# expected_qualifying: " << *report.expected_qualifying << '\n';
  out << "function,passed,and_depth,or_depth,block_point,block_i,block_j,block_orientation,failure\n";
  for (const auto& e : report.entries) {
    out << to_literal(e.function) << ',' << e.passed << ',' << e.and_depth << ',' << e.or_depth << ','
        << (e.block.point.empty() ? "" : bitstring(index_of(e.block.point), report.t)) << ',' << e.block.i << ','
        << e.block.j << ',' << e.block.orientation << ',' << csv_escape(e.failure) << '\n';
  }
}

// --- amplifier pipeline suite ---------------------------------------------

std::vector<PipelineConfig> default_pipeline_suite(const Rational& epsilon, const Rational& delta,
                                                   const DegreeOptions& options) {
  auto make = [&](const char* f, const char* g, Middle middle, int t) {
    const auto nf = named(f);
    const auto ng = named(g);
    PipelineConfig c;
    c.outer = nf.fn;
    c.inner = ng.fn;
    c.outer_label = nf.id;
    c.inner_label = ng.id;
    c.middle = middle;
    c.t = t;
    c.epsilon = epsilon;
    c.delta = delta;
    c.options = options;
    return c;
  };
  std::vector<PipelineConfig> out;
  for (const char* f : {"AND2", "OR2", "XOR2"}) {
    for (const char* g : {"XOR2", "OR2"}) {
      for (const int t : {1, 3}) out.push_back(make(f, g, Middle::Maj, t));
    }
  }
  out.push_back(make("AND2", "MAJ3", Middle::Maj, 1));
  out.push_back(make("AND2", "OR2", Middle::And, 2));
  return out;
}

std::vector<PipelineOutcome> pipeline_suite(const std::vector<PipelineConfig>& configs, int jobs) {
  std::vector<PipelineOutcome> out(configs.size());
  parallel_for(configs.size(), jobs, [&](std::size_t k) {
    const auto& c = configs[k];
    auto& o = out[k];
    o.label = (c.outer_label.empty() ? to_literal(c.outer) : c.outer_label) + " / " +
              std::string(to_string(c.middle)) + std::to_string(c.t) + " / " +
              (c.inner_label.empty() ? to_literal(c.inner) : c.inner_label);
    try {
      o.report = verify_amplifier_pipeline(c);
    } catch (const InvariantError& e) {
      o.error = e.what();
      o.invariant_error = true;
    } catch (const Error& e) {
      o.error = e.what();
    }
  });
  return out;
}

void write_pipeline_csv(std::ostream& out, const std::vector<PipelineOutcome>& outcomes, const Manifest& manifest) {
  manifest.write_comments(out);
  for (const auto& o : outcomes) {
    if (!o.report) out << "# failed: " << o.label << ": " << o.error << '\n';
  }
  out << report_csv_header() << '\n';
  for (const auto& o : outcomes) {
    if (o.report) out << report_csv_row(*o.report) << '\n';
  }
}

}  // namespace adeglab
