#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adeglab/rational.hpp"

namespace adeglab::lp {

enum class Sense { Maximize, Minimize };
enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Status { Optimal, Infeasible, Unbounded };

std::string_view to_string(Status s);

struct Constraint {
  std::vector<Rational> coeffs;
  Relation relation = Relation::LessEqual;
  Rational rhs;
};

/// Per-variable bounds; an empty optional means unbounded on that side.
/// The default is the usual x >= 0.
struct VariableBounds {
  std::optional<Rational> lower = Rational(0);
  std::optional<Rational> upper;

  static VariableBounds free() { return {std::nullopt, std::nullopt}; }
  static VariableBounds at_least(const Rational& l) { return {l, std::nullopt}; }
  static VariableBounds between(const Rational& l, const Rational& u) { return {l, u}; }
};

struct Problem {
  Sense sense = Sense::Maximize;
  std::vector<Rational> objective;
  std::vector<Constraint> constraints;
  /// Either empty (all variables default to x >= 0) or one entry per variable.
  std::vector<VariableBounds> bounds;

  int num_variables() const { return static_cast<int>(objective.size()); }
  std::size_t nonzeros() const;
  VariableBounds bounds_of(int j) const { return bounds.empty() ? VariableBounds{} : bounds[j]; }
  /// Throws PreconditionError on ragged rows or inconsistent bounds.
  void validate() const;
};

struct Mode {
  enum class Kind { Exact, Float };
  Kind kind = Kind::Exact;
  double tolerance = 1e-7;

  static Mode exact() { return {Kind::Exact, 0.0}; }
  static Mode floating(double tolerance = 1e-7) { return {Kind::Float, tolerance}; }
  bool is_exact() const { return kind == Kind::Exact; }
};

struct Options {
  Mode mode = Mode::exact();
  /// Exact mode refuses problems with more nonzeros than this (LimitError).
  std::size_t max_exact_nonzeros = 20000;
  std::size_t max_iterations = 200000;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_streak_limit = 50;
  /// When non-empty the problem is written here in CPLEX LP format first.
  std::string dump_path;
};

/// Solution with certificates. When Optimal, `dual` holds one multiplier per
/// constraint with the sign convention of the stated sense: for maximization
/// <= rows have y >= 0 and >= rows y <= 0 (reversed for minimization).
struct Outcome {
  Status status = Status::Infeasible;
  std::vector<Rational> primal;
  std::vector<Rational> dual;
  Rational objective;
  bool exact = true;
  double max_violation = 0.0;
  double duality_gap = 0.0;
  std::size_t iterations = 0;
};

/// Two-phase dense simplex (Dantzig pricing, Bland's rule on degenerate
/// streaks). Every Optimal outcome is re-verified (primal feasibility, dual
/// sign feasibility and zero duality gap) before it is returned; exact mode
/// verifies in exact arithmetic, float mode within `mode.tolerance`.
///
/// Throws LimitError (size cap, exact iteration cap), NumericalError (float
/// mode iteration cap or failed float verification) and InvariantError
/// (failed exact verification).
Outcome solve(const Problem& problem, const Options& options = {});

struct CertificateCheck {
  bool ok = false;
  Rational violation;  // exact worst violation (feasibility / dual sign)
  Rational gap;        // |primal objective - dual bound|
  std::string detail;
};

/// Independent optimality check of an outcome against the original problem.
CertificateCheck verify_optimality(const Problem& problem, const Outcome& outcome,
                                   const Rational& tolerance = 0);

/// CPLEX LP text format (coefficients printed as decimals).
void write_lp_format(const Problem& problem, std::ostream& out);

}  // namespace adeglab::lp
