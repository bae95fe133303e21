#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adeglab/boolfn.hpp"
#include "adeglab/degrees.hpp"
#include "adeglab/polynomial.hpp"

namespace adeglab {

/// The two conditional distributions of a dual witness psi:
/// psi = (mu1 - mu0) / 2 with mu1 on {psi > 0} and mu0 on {psi < 0}.
struct SplitDual {
  int inner_arity = 0;
  std::vector<Rational> mu0;
  std::vector<Rational> mu1;
  Rational epsilon_threshold;
  int purity_degree = 0;
};

/// Requires an exact witness of purity >= 1 (so that sum psi = 0).
SplitDual split_dual(const DualWitness& w);

/// E_{x ~ mu_side}[g(x)], exactly.
Rational mu_expectation(const SplitDual& s, const BooleanFunction& g, int side);

/// The averaging operator on polynomials over n_blocks * copies blocks of
/// s.inner_arity bits (block (i, k) holds x_{ik}; blocks of the same i are
/// adjacent). Each block factor becomes (1 - z_i) E_mu0 + z_i E_mu1.
MultilinearPolynomial apply_L(const MultilinearPolynomial& p, const SplitDual& s, int n_blocks, int copies);

enum class Middle { Maj, And, Given };

std::string_view to_string(Middle m);
Middle parse_middle(std::string_view text);

struct PipelineConfig {
  BooleanFunction outer;
  BooleanFunction inner;
  Middle middle = Middle::Maj;
  /// Copies per outer variable (MAJ_t / AND_t); ignored for Given.
  int t = 1;
  /// The amplifier for Middle::Given; the inner function is then given o g.
  std::optional<BooleanFunction> given;
  Rational epsilon{1, 3};
  Rational delta{1, 4};
  std::string outer_label;
  std::string inner_label;
  DegreeOptions options;
};

struct PipelineCheck {
  std::string name;
  bool ok = true;
  std::string detail;
};

struct AmplifierReport {
  std::string outer;
  std::string inner;
  Middle middle = Middle::Maj;
  int t = 1;
  Rational epsilon;
  Rational delta;
  /// Arity of f o middle o g.
  int total_arity = 0;
  int d_inner = 0;
  Rational e_mu1;
  Rational e_mu0;
  /// max over b of |z'_b - b|, where z'_b is the exact probability that
  /// one middle gadget outputs 1 when every copy is drawn from mu_b.
  Rational z_deviation;
  int deg_before = 0;
  int deg_after = 0;
  /// ||f - Lh|| and ||Lh - Lp_h|| on the small cube.
  Rational lh_error;
  Rational contraction_error;
  /// ||f - Lp_h||.
  Rational approx_error_of_Lp;
  Rational bound_used;
  /// approx_error_of_Lp <= delta + epsilon.
  bool bound_met = false;
  /// z_deviation <= delta / n, the hypothesis of the robustness step.
  bool deviation_within = false;
  /// adeg_{delta+epsilon}(f), when delta + epsilon < 1/2.
  std::optional<int> adeg_f_at_bound;
  std::vector<PipelineCheck> checks;
  long long runtime_ms = 0;

  bool invariants_ok() const;
};

/// Runs the lower-bound argument on one finite instance: inner witness,
/// split, approximant of h = f o middle o g, L applied, every step measured.
/// Failed invariants are recorded in `checks`, not thrown. Degenerate inner
/// witnesses throw InvariantError; oversized LPs throw LimitError.
AmplifierReport verify_amplifier_pipeline(const PipelineConfig& config);

Json report_to_json(const AmplifierReport& r);
/// Fixed column order; runtime last.
std::string report_csv_header();
std::string report_csv_row(const AmplifierReport& r);

}  // namespace adeglab
