// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "adeglab/amplify.hpp"
#include "adeglab/degrees.hpp"
#include "adeglab/experiments.hpp"
#include "adeglab/expr.hpp"
#include "adeglab/gadgets.hpp"
#include "adeglab/polynomial.hpp"
#include "adeglab/spectral.hpp"

namespace {

using namespace adeglab;

const Rational kThird(1, 3);

/// Collects the first failure of a criterion; later ones are counted.
class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_++ == 0) first_ = what;
  }
  bool ok() const { return failures_ == 0; }
  std::string summary() const {
    if (ok()) return {};
    return first_ + (failures_ > 1 ? " (+" + std::to_string(failures_ - 1) + " more)" : "");
  }

 private:
  int failures_ = 0;
  std::string first_;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<std::string(Check&)> run;
};

BooleanFunction fn(Builtin b, int n) { return make_builtin(b, n); }

std::string spectral(Check& check) {
  struct Case {
    const char* expr;
    double expected;
    double tol;
  };
  const Case cases[] = {{"AND2", std::sqrt(2.0), 1e-9},
                        {"MAJ3", 2.0, 1e-9},
                        {"MAJ3^2", 4.0, 1e-9},
                        {"AND2 o OR2", 2.0, 1e-9},
                        {"(AND2 o OR2)^2", 4.0, 1e-6}};
  std::ostringstream note;
  for (const auto& c : cases) {
    const double lambda = spectral_sensitivity(function_from_expr(c.expr)).lambda;
    const double err = std::abs(lambda - c.expected);
    check.require(err <= c.tol, std::string(c.expr) + " gave " + std::to_string(lambda));
    note << c.expr << "=" << lambda << " ";
  }
  return note.str();
}

void require_certified(Check& check, const DegreeCertificate& c, const BooleanFunction& f, int expected,
                       const std::string& label) {
  check.require(c.degree == expected, label + " degree " + std::to_string(c.degree));
  check.require(c.exact, label + " not exact");
  check.require(c.approximant.has_value(), label + " missing upper-bound certificate");
  check.require(expected == 0 || c.witness.has_value(), label + " missing lower-bound certificate");
  const auto v = verify_certificate(c, f);
  check.require(v.ok, label + ": " + v.detail);
}

std::string degree_oracles(Check& check) {
  require_certified(check, approx_degree(fn(Builtin::And, 2), kThird), fn(Builtin::And, 2), 1, "adeg AND2");
  for (int n = 1; n <= 4; ++n) {
    const auto f = fn(Builtin::Parity, n);
    require_certified(check, approx_degree(f, kThird), f, n, "adeg PARITY" + std::to_string(n));
  }
  require_certified(check, sign_degree(fn(Builtin::Maj, 3)), fn(Builtin::Maj, 3), 1, "sign MAJ3");
  require_certified(check, sign_degree(fn(Builtin::Parity, 2)), fn(Builtin::Parity, 2), 2, "sign PARITY2");
  require_certified(check, one_sided_approx_degree(fn(Builtin::Or, 2), kThird), fn(Builtin::Or, 2), 1, "odeg OR2");
  return "8 answers, certificates re-verified";
}

std::string duality(Check& check) {
  int count = 0;
  for (int n = 0; n <= 3; ++n) {
    for (std::uint64_t t = 0; t < (std::uint64_t{1} << (1 << n)); ++t) {
      const auto f = BooleanFunction::from_words(n, {t});
      const std::string label = to_literal(f);
      ++count;
      const auto c = approx_degree(f, kThird);
      // A lower bound of 0 needs no witness; witnesses start at purity 1.
      if (c.degree > 0) {
        const auto at = dual_witness(f, kThird, c.degree);
        const auto* w = std::get_if<DualWitness>(&at);
        check.require(w != nullptr, label + ": no witness at " + std::to_string(c.degree));
        if (w) {
          check.require(w->exact && w->correlation > kThird, label + ": weak witness");
          check.require(verify_witness(*w, f).ok, label + ": witness fails verification");
        }
      }
      const auto above = dual_witness(f, kThird, c.degree + 1);
      const auto* r = std::get_if<Refutation>(&above);
      check.require(r != nullptr, label + ": witness above the degree");
      if (r) check.require(r->exact && verify_refutation(*r, f).ok, label + ": refutation fails verification");
    }
  }
  return std::to_string(count) + " functions";
}

std::string census(Check& check) {
  const auto full = gadget_census(3, std::nullopt, 1);
  check.require(full.qualifying == 214, "t=3 qualifying " + std::to_string(full.qualifying));
  check.require(qualifying_count(3) == 214, "inclusion-exclusion count");
  check.require(full.expected_qualifying == full.qualifying, "t=3 count disagrees with closed form");
  check.require(full.passed == full.qualifying, "t=3 failures");
  const auto sampled = gadget_census(4, 1000, 4);
  check.require(sampled.qualifying == 1000, "t=4 sampled " + std::to_string(sampled.qualifying));
  check.require(sampled.passed == sampled.qualifying, "t=4 failures");
  return "t=3 " + std::to_string(full.passed) + "/" + std::to_string(full.qualifying) + ", t=4 " +
         std::to_string(sampled.passed) + "/" + std::to_string(sampled.qualifying);
}

MultilinearPolynomial random_polynomial(int arity, std::mt19937_64& rng) {
  MultilinearPolynomial p(arity);
  const auto all = (MultilinearPolynomial::Monomial{1} << arity) - 1;
  const int terms = 1 + static_cast<int>(rng() % 10);
  for (int k = 0; k < terms; ++k) {
    p.add_term(static_cast<MultilinearPolynomial::Monomial>(rng()) & all,
               Rational(static_cast<long>(rng() % 21) - 10) / static_cast<long>(1 + rng() % 7));
  }
  return p;
}

std::string amplifier(Check& check) {
  const Rational epsilon = kThird;
  std::mt19937_64 rng(5);
  std::ostringstream note;
  for (const auto& [name, g, copies] : {std::tuple{"PARITY2", fn(Builtin::Parity, 2), 2},
                                        std::tuple{"OR2", fn(Builtin::Or, 2), 2},
                                        std::tuple{"MAJ3", fn(Builtin::Maj, 3), 1}}) {
    const auto c = approx_degree(g, (1 - epsilon) / 2);
    check.require(c.witness.has_value(), std::string(name) + ": no witness");
    if (!c.witness) continue;
    const auto s = split_dual(*c.witness);
    const Rational e1 = mu_expectation(s, g, 1);
    const Rational e0 = mu_expectation(s, g, 0);
    check.require(e1 > 1 - epsilon, std::string(name) + ": E_mu1 = " + e1.get_str());
    check.require(e0 < epsilon, std::string(name) + ": E_mu0 = " + e0.get_str());
    const int blocks = 2;
    const int arity = blocks * copies * g.arity();
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = random_polynomial(arity, rng);
      const int after = apply_L(p, s, blocks, copies).degree();
      check.require(after <= p.degree() / s.purity_degree, std::string(name) + ": degree reduction");
    }
    note << name << " E1=" << e1 << " E0=" << e0 << "; ";
  }

  PipelineConfig config;
  config.outer = fn(Builtin::Or, 2);
  config.inner = fn(Builtin::Parity, 2);
  config.middle = Middle::Maj;
  config.t = 3;
  config.epsilon = epsilon;
  config.delta = Rational(1, 4);
  config.outer_label = "OR2";
  config.inner_label = "PARITY2";
  const auto r = verify_amplifier_pipeline(config);
  check.require(r.total_arity == 12, "pipeline arity");
  check.require(r.invariants_ok(), "pipeline invariants");
  check.require(r.approx_error_of_Lp <= config.delta + config.epsilon,
                "||Lp - f|| = " + r.approx_error_of_Lp.get_str());
  note << "12-bit ||Lp - f|| = " << r.approx_error_of_Lp;
  return note.str();
}

std::string projection(Check& check, MajorityBase base, int d_max) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = majority_projection(5, base, {.d_max = d_max, .seed = 1});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string label(to_string(base));
  check.require(r.found, label + ": not found");
  check.require(secs < 60, label + ": took " + std::to_string(secs) + " s");
  if (!r.found) return label + " not found";
  check.require(r.depth <= d_max, label + ": depth " + std::to_string(r.depth));
  check.require(evaluate_projected_tree(base, r.depth, r.projection, 5) == fn(Builtin::Maj, 5),
                label + ": projection does not compute MAJ5");
  return label + " d=" + std::to_string(r.depth);
}

std::string projections(Check& check) {
  return projection(check, MajorityBase::Maj3, 6) + ", " + projection(check, MajorityBase::AndOr, 8);
}

std::string sandwich(Check& check) {
  const auto grid = default_composition_grid();
  check.require(grid.size() == 12, "grid size");
  CompositionOptions options;
  Manifest manifest;
  manifest.add("seed", "1");
  std::string first;
  for (int run = 0; run < 2; ++run) {
    const auto rows = composition_table(grid, options);
    for (const auto& row : rows) {
      const std::string label = row.f_id + " o " + row.g_id;
      check.require(row.error.empty(), label + ": " + row.error);
      check.require(row.total_arity <= 12, label + ": arity");
      check.require(row.sandwich_ok, label + ": sandwich violated");
    }
    std::ostringstream csv;
    write_rows_csv(csv, rows, manifest, false);
    if (run == 0) {
      first = csv.str();
    } else {
      check.require(csv.str() == first, "rerun is not byte-identical");
    }
  }
  return "12 rows, rerun identical";
}

// Inputs x + delta stay inside the cube, the regime where the amplifier uses
// the bound.
std::string robustness(Check& check) {
  std::mt19937_64 rng(8);
  const Rational delta(1, 10);
  int violations = 0;
  const int trials = 10000;
  for (int trial = 0; trial < trials; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<std::uint64_t> words(BooleanFunction::word_count(n));
    for (auto& w : words) w = rng();
    if (n < 6) words[0] &= (std::uint64_t{1} << (1 << n)) - 1;
    const auto p = interpolate(BooleanFunction::from_words(n, words));
    const auto x = bits_of(rng() % (std::uint64_t{1} << n), n);
    RealPoint d(n);
    for (int i = 0; i < n; ++i) {
      const Rational mag = Rational(static_cast<long>(rng() % 1001)) / (10000 * n);
      d[i] = x[i] ? -mag : mag;
    }
    if (!robustness_probe(p, x, d, delta)) ++violations;
  }
  check.require(violations == 0, std::to_string(violations) + " violations");
  return std::to_string(trials) + " trials, " + std::to_string(violations) + " violations";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "spectral sensitivity values", 30, spectral},
      {2, "degree oracles with certificates", 60, degree_oracles},
      {3, "duality on all functions of arity <= 3", 600, duality},
      {4, "gadget census", 300, census},
      {5, "amplifier machinery", 900, amplifier},
      {6, "majority projections", 120, projections},
      {7, "composition sandwich", 1800, sandwich},
      {8, "robustness", 60, robustness},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Check check;
    std::string note;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      note = c.run(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    check.require(secs < c.budget_s, "over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget");
    if (!check.ok()) ++failed;
    std::printf("%s [%d] %s (%.2f s): %s\n", check.ok() ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                check.ok() ? note.c_str() : check.summary().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
