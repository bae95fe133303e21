#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "adeglab/boolfn.hpp"
#include "adeglab/json_io.hpp"
#include "adeglab/lp.hpp"
#include "adeglab/polynomial.hpp"

namespace adeglab {

class DegreeCache;

enum class Measure { Exact, Approx, Sign, OneSided };

std::string_view to_string(Measure m);
Measure parse_measure(std::string_view text);

/// Dual object psi on {0,1}^n certifying a degree lower bound.
///
/// Approx: sum |psi| = 1, sum psi f = correlation > epsilon, psi orthogonal to
/// every monomial of degree < purity_degree.
/// OneSided: additionally psi <= 0 on f^{-1}(0).
/// Sign: psi (2f - 1) >= 0 everywhere (correlation is then 1/2); certifies
/// that no polynomial of degree < purity_degree sign-represents f.
struct DualWitness {
  Measure measure = Measure::Approx;
  int arity = 0;
  std::vector<Rational> values;  // indexed like truth tables
  int purity_degree = 0;
  Rational epsilon;
  Rational correlation;
  /// False when the witness came from a float solve; it is then verified
  /// only within the float tolerance.
  bool exact = true;

  bool one_sided() const { return measure == Measure::OneSided; }
};

/// LP proof that no witness of the requested purity beats epsilon: the best
/// achievable correlation is `optimum` <= epsilon, and `approximant` is a
/// polynomial of degree < purity_degree with error `optimum`.
struct Refutation {
  Measure measure = Measure::Approx;
  int purity_degree = 0;
  Rational epsilon;
  Rational optimum;
  MultilinearPolynomial approximant;
  bool exact = true;
};

using WitnessOrRefutation = std::variant<DualWitness, Refutation>;

struct DegreeCertificate {
  Measure measure = Measure::Exact;
  int arity = 0;
  int degree = 0;
  /// Threshold used (zero for exact and sign degree).
  Rational epsilon;
  /// Proves degree is achievable.
  std::optional<MultilinearPolynomial> approximant;
  /// Proves nothing smaller is (absent when degree = 0).
  std::optional<DualWitness> witness;
  /// Optimal error E(d) at every degree tried, in ascending order (approx
  /// and one-sided); for sign degree the optimal margin at each degree.
  std::vector<Rational> optimum_by_degree;
  bool exact = true;
};

struct DegreeOptions {
  lp::Mode mode = lp::Mode::exact();
  std::size_t max_exact_nonzeros = 20000;
  /// Reduce LPs to orbits of the verified input symmetries of f.
  bool use_symmetry = true;
  /// Float answers closer than this to the threshold are re-solved exactly.
  double escalation_margin = 1e-5;
  /// When non-empty, every LP is dumped here in CPLEX LP format.
  std::string dump_dir;
  /// Optional result cache (not owned).
  DegreeCache* cache = nullptr;
};

DegreeCertificate exact_degree(const BooleanFunction& f);

/// Least d with a degree-d polynomial within epsilon of f everywhere.
/// Requires 0 < epsilon < 1/2.
DegreeCertificate approx_degree(const BooleanFunction& f, const Rational& epsilon,
                                const DegreeOptions& options = {});

/// Witness of purity d with correlation > epsilon, or a refutation.
WitnessOrRefutation dual_witness(const BooleanFunction& f, const Rational& epsilon, int d,
                                 const DegreeOptions& options = {});

DegreeCertificate sign_degree(const BooleanFunction& f, const DegreeOptions& options = {});
bool is_full_sign_degree(const BooleanFunction& f, const DegreeOptions& options = {});

/// Least d admitting p with |p - 1| <= epsilon on f^{-1}(1) and p <= epsilon
/// on f^{-1}(0).
DegreeCertificate one_sided_approx_degree(const BooleanFunction& f, const Rational& epsilon,
                                          const DegreeOptions& options = {});
WitnessOrRefutation one_sided_dual_witness(const BooleanFunction& f, const Rational& epsilon, int d,
                                           const DegreeOptions& options = {});

struct Verdict {
  bool ok = true;
  std::string detail;

  void fail(std::string why) {
    if (ok) detail = std::move(why);
    ok = false;
  }
};

/// Re-checks every defining property of a witness against f. Exact witnesses
/// are checked exactly; float witnesses within `tolerance`.
Verdict verify_witness(const DualWitness& w, const BooleanFunction& f, double tolerance = 1e-7);
Verdict verify_refutation(const Refutation& r, const BooleanFunction& f, double tolerance = 1e-7);
/// Upper bound from the approximant and lower bound from the witness.
Verdict verify_certificate(const DegreeCertificate& c, const BooleanFunction& f,
                           double tolerance = 1e-7);

Json witness_to_json(const DualWitness& w);
DualWitness witness_from_json(const Json& j);
Json refutation_to_json(const Refutation& r);
Json certificate_to_json(const DegreeCertificate& c);
DegreeCertificate certificate_from_json(const Json& j);

}  // namespace adeglab
