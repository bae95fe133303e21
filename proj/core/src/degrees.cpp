#include "adeglab/degrees.hpp"

#include <bit>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "adeglab/cache.hpp"
#include "adeglab/errors.hpp"
#include "adeglab/symmetry.hpp"

namespace adeglab {

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::Exact: return "exact";
    case Measure::Approx: return "approx";
    case Measure::Sign: return "sign";
    case Measure::OneSided: return "one_sided";
  }
  return "?";
}

Measure parse_measure(std::string_view text) {
  if (text == "exact") return Measure::Exact;
  if (text == "approx") return Measure::Approx;
  if (text == "sign") return Measure::Sign;
  if (text == "one_sided") return Measure::OneSided;
  throw PreconditionError("unknown measure '" + std::string(text) + "'");
}

namespace {

// Above this many (orbit, subset) incidences the reduced LP is not built.
constexpr std::uint64_t kMaxIncidence = 50'000'000;

void check_epsilon(const Rational& epsilon) {
  if (epsilon <= 0 || epsilon >= Rational(1, 2)) {
    throw PreconditionError("epsilon must satisfy 0 < epsilon < 1/2, got " + to_string(epsilon));
  }
}

/// The cube modulo the symmetries of f. For every input orbit the
/// representative x carries m_M(x) = #{S in M : S subset of x} for every
/// monomial orbit M, which is all a symmetric polynomial needs.
struct ReducedSpace {
  BooleanFunction f;
  OrbitPartition orbits;
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> incidence;
  std::vector<int> orbit_degree;
};

ReducedSpace make_space(const BooleanFunction& f, bool use_symmetry) {
  if (f.arity() > kMaxDenseArity) {
    throw LimitError("degree LPs support arity <= " + std::to_string(kMaxDenseArity));
  }
  ReducedSpace space{f, orbit_partition(f.arity(), use_symmetry ? verified_symmetries(f)
                                                                : std::vector<Permutation>{}),
                     {}, {}};
  const auto& orbits = space.orbits;
  std::uint64_t work = 0;
  for (auto rep : orbits.representative) work += std::uint64_t{1} << std::popcount(rep);
  if (work > kMaxIncidence) {
    throw LimitError("degree LP for this function is too large (" + std::to_string(orbits.count()) +
                     " input orbits)");
  }
  space.orbit_degree.resize(orbits.count());
  for (int o = 0; o < orbits.count(); ++o) space.orbit_degree[o] = std::popcount(orbits.representative[o]);
  space.incidence.resize(orbits.count());
  std::vector<std::int64_t> count(orbits.count(), 0);
  std::vector<std::uint32_t> touched;
  for (int o = 0; o < orbits.count(); ++o) {
    const std::uint64_t x = orbits.representative[o];
    touched.clear();
    // Every subset of x, including x itself and the empty set.
    for (std::uint64_t s = x;; s = (s - 1) & x) {
      const auto m = orbits.orbit_of[s];
      if (count[m]++ == 0) touched.push_back(m);
      if (s == 0) break;
    }
    auto& row = space.incidence[o];
    for (auto m : touched) {
      row.emplace_back(m, count[m]);
      count[m] = 0;
    }
  }
  return space;
}

struct Level {
  Rational optimum;
  MultilinearPolynomial poly;
  std::vector<Rational> orbit_dual;  // per input orbit, before normalization
  bool exact = true;
};

lp::Outcome run_lp(const lp::Problem& problem, const lp::Mode& mode, const DegreeOptions& options,
                   const std::string& tag) {
  lp::Options lp_options;
  lp_options.mode = mode;
  lp_options.max_exact_nonzeros = options.max_exact_nonzeros;
  if (!options.dump_dir.empty()) {
    std::filesystem::create_directories(options.dump_dir);
    lp_options.dump_path = (std::filesystem::path(options.dump_dir) / (tag + ".lp")).string();
  }
  auto out = lp::solve(problem, lp_options);
  if (out.status != lp::Status::Optimal) {
    throw InvariantError("degree LP " + tag + " returned " + std::string(lp::to_string(out.status)) +
                         " although it is always feasible and bounded");
  }
  return out;
}

/// Solves the degree-D LP of the given measure on the reduced space.
/// Approx/OneSided: minimize the error e. Sign: maximize the margin t <= 1.
Level solve_level(const ReducedSpace& space, Measure measure, int D, const lp::Mode& mode,
                  const DegreeOptions& options) {
  const auto& orbits = space.orbits;
  const auto& f = space.f;
  std::vector<int> column_of(orbits.count(), -1);
  int columns = 0;
  for (int m = 0; m < orbits.count(); ++m) {
    if (space.orbit_degree[m] <= D) column_of[m] = columns++;
  }
  const int extra = columns;  // error or margin variable
  lp::Problem problem;
  problem.objective.assign(columns + 1, 0);
  problem.objective[extra] = 1;
  problem.bounds.assign(columns + 1, lp::VariableBounds::free());
  // Row indices per orbit: (lower-side row, upper-side row), -1 when absent.
  std::vector<std::pair<int, int>> rows(orbits.count(), {-1, -1});

  auto base_row = [&](int o, const Rational& scale) {
    std::vector<Rational> coeffs(columns + 1, 0);
    for (const auto& [m, cnt] : space.incidence[o]) {
      if (column_of[m] >= 0) coeffs[column_of[m]] = scale * cnt;
    }
    return coeffs;
  };

  if (measure == Measure::Sign) {
    problem.sense = lp::Sense::Maximize;
    problem.bounds[extra] = {std::nullopt, Rational(1)};
    for (int o = 0; o < orbits.count(); ++o) {
      const bool value = f.at(orbits.representative[o]);
      // -(1 - 2f) p(x) + t <= 0
      auto coeffs = base_row(o, value ? 1 : -1);
      coeffs[extra] = 1;
      rows[o].first = static_cast<int>(problem.constraints.size());
      problem.constraints.push_back({std::move(coeffs), lp::Relation::LessEqual, 0});
    }
  } else {
    problem.sense = lp::Sense::Minimize;
    problem.bounds[extra] = lp::VariableBounds{};
    for (int o = 0; o < orbits.count(); ++o) {
      const bool value = f.at(orbits.representative[o]);
      auto coeffs = base_row(o, 1);
      auto upper = coeffs;
      upper[extra] = -1;
      rows[o].first = static_cast<int>(problem.constraints.size());
      problem.constraints.push_back({std::move(upper), lp::Relation::LessEqual, value ? 1 : 0});
      if (measure == Measure::Approx || value) {
        coeffs[extra] = 1;
        rows[o].second = static_cast<int>(problem.constraints.size());
        problem.constraints.push_back({std::move(coeffs), lp::Relation::GreaterEqual, value ? 1 : 0});
      }
    }
  }

  std::ostringstream tag;
  tag << std::hex << f.hash() << std::dec << "-" << to_string(measure) << "-d" << D;
  const auto out = run_lp(problem, mode, options, tag.str());

  Level level;
  level.exact = out.exact;
  level.optimum = out.objective;
  level.poly = MultilinearPolynomial(f.arity());
  for (std::uint64_t k = 0; k < f.size(); ++k) {
    const int col = column_of[orbits.orbit_of[k]];
    if (col >= 0) level.poly.add_term(static_cast<MultilinearPolynomial::Monomial>(k), out.primal[col]);
  }
  level.orbit_dual.resize(orbits.count());
  for (int o = 0; o < orbits.count(); ++o) {
    Rational psi = 0;
    if (rows[o].first >= 0) psi += out.dual[rows[o].first];
    if (rows[o].second >= 0) psi += out.dual[rows[o].second];
    if (measure == Measure::Sign) {
      // Multipliers are >= 0; the witness carries the sign of 2f - 1.
      if (!f.at(orbits.representative[o])) psi = -psi;
    }
    level.orbit_dual[o] = std::move(psi);
  }
  return level;
}

Level solve_level_escalating(const ReducedSpace& space, Measure measure, int D, const Rational& epsilon,
                             const DegreeOptions& options) {
  if (options.mode.is_exact()) return solve_level(space, measure, D, options.mode, options);
  Level level = solve_level(space, measure, D, options.mode, options);
  if (measure == Measure::Sign) return level;
  if (std::fabs(level.optimum.get_d() - epsilon.get_d()) >= options.escalation_margin) return level;
  try {
    return solve_level(space, measure, D, lp::Mode::exact(), options);
  } catch (const LimitError& e) {
    throw NumericalError("float optimum at degree " + std::to_string(D) + " is within " +
                         std::to_string(options.escalation_margin) +
                         " of epsilon and exact escalation failed: " + e.what());
  }
}

/// Expands per-orbit dual values into a normalized witness of purity D + 1.
/// Returns nullopt when the dual vanishes.
std::optional<DualWitness> make_witness(const ReducedSpace& space, const Level& level, Measure measure,
                                        int D, const Rational& epsilon) {
  const auto& orbits = space.orbits;
  Rational l1 = 0;
  for (const auto& v : level.orbit_dual) l1 += abs(v);
  if (l1 == 0) return std::nullopt;
  DualWitness w;
  w.measure = measure;
  w.arity = space.f.arity();
  w.purity_degree = D + 1;
  w.epsilon = epsilon;
  w.exact = level.exact;
  std::vector<Rational> per_point(orbits.count());
  for (int o = 0; o < orbits.count(); ++o) {
    per_point[o] = level.orbit_dual[o] / (l1 * static_cast<long>(orbits.size[o]));
  }
  w.values.resize(space.f.size());
  w.correlation = 0;
  for (std::uint64_t k = 0; k < space.f.size(); ++k) {
    w.values[k] = per_point[orbits.orbit_of[k]];
    if (space.f.at(k)) w.correlation += w.values[k];
  }
  return w;
}

Rational one_sided_error(const MultilinearPolynomial& p, const BooleanFunction& f) {
  const auto values = point_values(p);
  Rational worst = 0;
  for (std::uint64_t k = 0; k < values.size(); ++k) {
    const Rational e = f.at(k) ? abs(values[k] - 1) : values[k];
    if (e > worst) worst = e;
  }
  return worst;
}

bool close_or_below(const Rational& value, const Rational& bound, double tolerance, bool exact) {
  return exact ? value <= bound : value.get_d() <= bound.get_d() + tolerance;
}

/// Shared ascending search for the approx and one-sided measures.
DegreeCertificate threshold_degree(const BooleanFunction& f, const Rational& epsilon, Measure measure,
                                   const DegreeOptions& options) {
  check_epsilon(epsilon);
  if (options.cache) {
    if (auto hit = options.cache->load(f, measure, epsilon, options.mode)) return *hit;
  }
  const ReducedSpace space = make_space(f, options.use_symmetry);
  DegreeCertificate cert;
  cert.measure = measure;
  cert.arity = f.arity();
  cert.epsilon = epsilon;
  std::optional<Level> previous;
  for (int d = 0; d <= f.arity(); ++d) {
    Level level;
    if (d == f.arity() && d > 0) {
      level.optimum = 0;
      level.poly = interpolate(f);
    } else {
      level = solve_level_escalating(space, measure, d, epsilon, options);
    }
    cert.optimum_by_degree.push_back(level.optimum);
    cert.exact = cert.exact && level.exact;
    if (level.optimum <= epsilon || (!level.exact && level.optimum.get_d() <= epsilon.get_d())) {
      cert.degree = d;
      cert.approximant = level.poly;
      if (d > 0) {
        auto w = make_witness(space, *previous, measure, d - 1, epsilon);
        if (!w || !(w->correlation > epsilon)) {
          throw InvariantError("LP at degree " + std::to_string(d - 1) +
                               " exceeded epsilon but produced no witness beating it");
        }
        cert.witness = std::move(*w);
      }
      break;
    }
    previous = std::move(level);
  }
  const auto verdict = verify_certificate(cert, f);
  if (!verdict.ok) throw InvariantError(std::string(to_string(measure)) + " certificate failed: " + verdict.detail);
  if (options.cache) options.cache->store(f, measure, epsilon, options.mode, cert);
  return cert;
}

WitnessOrRefutation threshold_witness(const BooleanFunction& f, const Rational& epsilon, int d,
                                      Measure measure, const DegreeOptions& options) {
  check_epsilon(epsilon);
  if (d < 1) throw PreconditionError("dual witness purity degree must be >= 1");
  if (d - 1 >= f.arity()) {
    // Orthogonality to every monomial forces psi = 0.
    return Refutation{measure, d, epsilon, 0, interpolate(f), true};
  }
  const ReducedSpace space = make_space(f, options.use_symmetry);
  const Level level = solve_level_escalating(space, measure, d - 1, epsilon, options);
  if (level.optimum > epsilon) {
    auto w = make_witness(space, level, measure, d - 1, epsilon);
    if (w && w->correlation > epsilon) {
      const auto verdict = verify_witness(*w, f);
      if (!verdict.ok) throw InvariantError("dual witness failed verification: " + verdict.detail);
      return std::move(*w);
    }
    throw InvariantError("LP optimum exceeds epsilon but the dual does not");
  }
  Refutation r{measure, d, epsilon, level.optimum, level.poly, level.exact};
  const auto verdict = verify_refutation(r, f);
  if (!verdict.ok) throw InvariantError("refutation failed verification: " + verdict.detail);
  return r;
}

}  // namespace

DegreeCertificate exact_degree(const BooleanFunction& f) {
  DegreeCertificate cert;
  cert.measure = Measure::Exact;
  cert.arity = f.arity();
  cert.approximant = interpolate(f);
  cert.degree = cert.approximant->degree();
  return cert;
}

DegreeCertificate approx_degree(const BooleanFunction& f, const Rational& epsilon, const DegreeOptions& options) {
  return threshold_degree(f, epsilon, Measure::Approx, options);
}

DegreeCertificate one_sided_approx_degree(const BooleanFunction& f, const Rational& epsilon,
                                          const DegreeOptions& options) {
  return threshold_degree(f, epsilon, Measure::OneSided, options);
}

WitnessOrRefutation dual_witness(const BooleanFunction& f, const Rational& epsilon, int d,
                                 const DegreeOptions& options) {
  return threshold_witness(f, epsilon, d, Measure::Approx, options);
}

WitnessOrRefutation one_sided_dual_witness(const BooleanFunction& f, const Rational& epsilon, int d,
                                           const DegreeOptions& options) {
  return threshold_witness(f, epsilon, d, Measure::OneSided, options);
}

DegreeCertificate sign_degree(const BooleanFunction& f, const DegreeOptions& options) {
  if (options.cache) {
    if (auto hit = options.cache->load(f, Measure::Sign, 0, options.mode)) return *hit;
  }
  const ReducedSpace space = make_space(f, options.use_symmetry);
  DegreeCertificate cert;
  cert.measure = Measure::Sign;
  cert.arity = f.arity();
  cert.epsilon = 0;
  std::optional<Level> previous;
  for (int d = 0; d <= f.arity(); ++d) {
    Level level;
    if (d == f.arity() && d > 0) {
      // 1 - 2f has (1 - 2f)^2 = 1 on the cube.
      level.optimum = 1;
      level.poly = MultilinearPolynomial::constant(f.arity(), 1) - Rational(2) * interpolate(f);
    } else {
      level = solve_level(space, Measure::Sign, d, options.mode, options);
    }
    cert.optimum_by_degree.push_back(level.optimum);
    cert.exact = cert.exact && level.exact;
    const bool positive = level.exact ? level.optimum > 0 : level.optimum.get_d() > 0.5;
    if (positive) {
      cert.degree = d;
      level.poly *= 1 / level.optimum;
      cert.approximant = std::move(level.poly);
      if (d > 0) {
        auto w = make_witness(space, *previous, Measure::Sign, d - 1, 0);
        if (!w) throw InvariantError("sign LP infeasible but its dual vanished");
        cert.witness = std::move(*w);
      }
      break;
    }
    previous = std::move(level);
  }
  const auto verdict = verify_certificate(cert, f);
  if (!verdict.ok) throw InvariantError("sign certificate failed: " + verdict.detail);
  if (options.cache) options.cache->store(f, Measure::Sign, 0, options.mode, cert);
  return cert;
}

bool is_full_sign_degree(const BooleanFunction& f, const DegreeOptions& options) {
  return sign_degree(f, options).degree == f.arity();
}

// --- verification ----------------------------------------------------------

Verdict verify_witness(const DualWitness& w, const BooleanFunction& f, double tolerance) {
  Verdict v;
  if (w.arity != f.arity() || w.values.size() != f.size()) {
    v.fail("witness size does not match the function");
    return v;
  }
  const bool exact = w.exact;
  auto near = [&](const Rational& a, const Rational& b) {
    return exact ? a == b : std::fabs(a.get_d() - b.get_d()) <= tolerance;
  };
  Rational l1 = 0, corr = 0;
  for (std::uint64_t k = 0; k < f.size(); ++k) {
    l1 += abs(w.values[k]);
    if (f.at(k)) corr += w.values[k];
  }
  if (!near(l1, 1)) v.fail("l1 mass is " + to_string(l1) + ", not 1");
  if (!near(corr, w.correlation)) v.fail("stored correlation does not match sum psi f");
  if (!(corr > w.epsilon)) v.fail("correlation " + to_string(corr) + " does not exceed epsilon " + to_string(w.epsilon));
  for (std::uint64_t k = 0; k < f.size(); ++k) {
    const Rational& psi = w.values[k];
    if (w.measure == Measure::OneSided && !f.at(k) && !close_or_below(psi, 0, tolerance, exact)) {
      v.fail("one-sided witness is positive on a 0-input (index " + std::to_string(k) + ")");
    }
    if (w.measure == Measure::Sign) {
      const Rational signed_value = f.at(k) ? Rational(-psi) : psi;
      if (!close_or_below(signed_value, 0, tolerance, exact)) {
        v.fail("sign witness disagrees with 2f - 1 at index " + std::to_string(k));
      }
    }
  }
  // Superset sums give sum_x psi(x) [S subset of x] for every S at once.
  std::vector<Rational> sums = w.values;
  for (int i = 0; i < f.arity(); ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint64_t k = 0; k < f.size(); ++k) {
      if (!(k & bit)) sums[k] += sums[k | bit];
    }
  }
  for (std::uint64_t s = 0; s < f.size(); ++s) {
    if (std::popcount(s) < w.purity_degree && !near(sums[s], 0)) {
      v.fail("witness correlates with the monomial over " + bitstring(s, f.arity()));
      break;
    }
  }
  return v;
}

Verdict verify_refutation(const Refutation& r, const BooleanFunction& f, double tolerance) {
  Verdict v;
  if (r.approximant.arity() != f.arity()) {
    v.fail("approximant arity mismatch");
    return v;
  }
  if (r.approximant.degree() >= r.purity_degree) v.fail("approximant degree is not below the purity degree");
  const Rational err = r.measure == Measure::OneSided ? one_sided_error(r.approximant, f)
                                                      : linf_error(r.approximant, f);
  if (!close_or_below(err, r.optimum, tolerance, r.exact)) v.fail("approximant error exceeds the stated optimum");
  if (!close_or_below(r.optimum, r.epsilon, tolerance, r.exact)) v.fail("refutation optimum exceeds epsilon");
  return v;
}

Verdict verify_certificate(const DegreeCertificate& c, const BooleanFunction& f, double tolerance) {
  Verdict v;
  if (c.arity != f.arity()) {
    v.fail("certificate arity mismatch");
    return v;
  }
  if (!c.approximant) {
    v.fail("missing approximant");
    return v;
  }
  const auto& p = *c.approximant;
  if (p.arity() != f.arity()) {
    v.fail("approximant arity mismatch");
    return v;
  }
  if (p.degree() > c.degree) v.fail("approximant degree exceeds the certified degree");
  switch (c.measure) {
    case Measure::Exact:
      if (!(p == interpolate(f))) v.fail("approximant is not the interpolant");
      if (p.degree() != c.degree) v.fail("exact degree differs from the interpolant degree");
      return v;
    case Measure::Approx:
      if (!close_or_below(linf_error(p, f), c.epsilon, tolerance, c.exact)) v.fail("approximant error exceeds epsilon");
      break;
    case Measure::OneSided:
      if (!close_or_below(one_sided_error(p, f), c.epsilon, tolerance, c.exact)) {
        v.fail("approximant violates the one-sided bounds");
      }
      break;
    case Measure::Sign: {
      const auto values = point_values(p);
      for (std::uint64_t k = 0; k < f.size(); ++k) {
        const Rational margin = f.at(k) ? Rational(-values[k]) : values[k];
        const bool ok = c.exact ? margin > 0 : margin.get_d() >= 1 - tolerance;
        if (!ok) {
          v.fail("approximant does not sign-represent f at index " + std::to_string(k));
          break;
        }
      }
      break;
    }
  }
  if (c.degree > 0) {
    if (!c.witness) {
      v.fail("missing dual witness");
    } else {
      if (c.witness->measure != c.measure) v.fail("witness measure mismatch");
      if (c.witness->purity_degree != c.degree) v.fail("witness purity differs from the degree");
      if (c.witness->epsilon != c.epsilon) v.fail("witness epsilon differs from the certificate");
      const auto wv = verify_witness(*c.witness, f, tolerance);
      if (!wv.ok) v.fail("witness: " + wv.detail);
    }
  }
  return v;
}

// --- JSON ------------------------------------------------------------------

Json witness_to_json(const DualWitness& w) {
  Json values = Json::array();
  for (const auto& v : w.values) values.push_back(to_string(v));
  return {{"measure", to_string(w.measure)},
          {"arity", w.arity},
          {"purity_degree", w.purity_degree},
          {"epsilon", to_string(w.epsilon)},
          {"correlation", to_string(w.correlation)},
          {"exact", w.exact},
          {"values", std::move(values)}};
}

DualWitness witness_from_json(const Json& j) {
  try {
    DualWitness w;
    w.measure = parse_measure(j.at("measure").get<std::string>());
    w.arity = j.at("arity").get<int>();
    w.purity_degree = j.at("purity_degree").get<int>();
    w.epsilon = rational_from_json(j.at("epsilon"));
    w.correlation = rational_from_json(j.at("correlation"));
    w.exact = j.at("exact").get<bool>();
    for (const auto& v : j.at("values")) w.values.push_back(rational_from_json(v));
    return w;
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("malformed witness JSON: ") + e.what());
  }
}

Json refutation_to_json(const Refutation& r) {
  return {{"measure", to_string(r.measure)},
          {"purity_degree", r.purity_degree},
          {"epsilon", to_string(r.epsilon)},
          {"optimum", to_string(r.optimum)},
          {"exact", r.exact},
          {"approximant", polynomial_to_json(r.approximant)}};
}

Json certificate_to_json(const DegreeCertificate& c) {
  Json optima = Json::array();
  for (const auto& e : c.optimum_by_degree) optima.push_back(to_string(e));
  return {{"measure", to_string(c.measure)},
          {"arity", c.arity},
          {"degree", c.degree},
          {"epsilon", to_string(c.epsilon)},
          {"exact", c.exact},
          {"approximant", c.approximant ? polynomial_to_json(*c.approximant) : Json(nullptr)},
          {"witness", c.witness ? witness_to_json(*c.witness) : Json(nullptr)},
          {"optimum_by_degree", std::move(optima)}};
}

DegreeCertificate certificate_from_json(const Json& j) {
  try {
    DegreeCertificate c;
    c.measure = parse_measure(j.at("measure").get<std::string>());
    c.arity = j.at("arity").get<int>();
    c.degree = j.at("degree").get<int>();
    c.epsilon = rational_from_json(j.at("epsilon"));
    c.exact = j.at("exact").get<bool>();
    if (!j.at("approximant").is_null()) c.approximant = polynomial_from_json(j.at("approximant"));
    if (!j.at("witness").is_null()) c.witness = witness_from_json(j.at("witness"));
    for (const auto& e : j.at("optimum_by_degree")) c.optimum_by_degree.push_back(rational_from_json(e));
    return c;
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("malformed certificate JSON: ") + e.what());
  }
}

}  // namespace adeglab
