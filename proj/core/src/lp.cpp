#include "adeglab/lp.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "adeglab/errors.hpp"

namespace adeglab::lp {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
  }
  return "?";
}

std::size_t Problem::nonzeros() const {
  std::size_t nz = 0;
  for (const auto& c : objective) nz += c != 0;
  for (const auto& row : constraints) {
    for (const auto& a : row.coeffs) nz += a != 0;
  }
  return nz;
}

void Problem::validate() const {
  if (objective.empty()) throw PreconditionError("LP needs at least one variable");
  const std::size_t n = objective.size();
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (constraints[i].coeffs.size() != n) {
      throw PreconditionError("LP row " + std::to_string(i) + " has " +
                              std::to_string(constraints[i].coeffs.size()) + " coefficients, expected " +
                              std::to_string(n));
    }
  }
  if (!bounds.empty() && bounds.size() != n) throw PreconditionError("LP bounds size mismatch");
  for (const auto& b : bounds) {
    if (b.lower && b.upper && *b.lower > *b.upper) throw PreconditionError("LP bound lower > upper");
  }
}

namespace {

// ---------------------------------------------------------------------------
// Standard form: maximize cost.x' subject to rows.x' (rel) rhs, x' >= 0,
// rhs >= 0. Original variables are recovered as shift + sign*x'[pos] - x'[neg].

struct VarMap {
  int pos = -1;
  int neg = -1;
  int sign = 1;
  Rational shift;
};

struct StandardForm {
  int columns = 0;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  std::vector<Relation> relation;
  std::vector<bool> flipped;
  std::vector<int> origin;  // original constraint index, -1 for bound rows
  std::vector<Rational> cost;
  std::vector<VarMap> vars;
};

StandardForm to_standard_form(const Problem& p) {
  StandardForm sf;
  const int n = p.num_variables();
  std::vector<std::pair<int, Rational>> upper_rows;  // (column, range)
  sf.vars.resize(n);
  for (int j = 0; j < n; ++j) {
    const auto b = p.bounds_of(j);
    auto& v = sf.vars[j];
    v.pos = sf.columns++;
    if (b.lower) {
      v.shift = *b.lower;
      if (b.upper) upper_rows.emplace_back(v.pos, *b.upper - *b.lower);
    } else if (b.upper) {
      v.shift = *b.upper;
      v.sign = -1;
    } else {
      v.neg = sf.columns++;
    }
  }
  const Rational obj_sign = p.sense == Sense::Maximize ? 1 : -1;
  sf.cost.assign(sf.columns, 0);
  for (int j = 0; j < n; ++j) {
    const Rational c = obj_sign * p.objective[j];
    sf.cost[sf.vars[j].pos] += c * sf.vars[j].sign;
    if (sf.vars[j].neg >= 0) sf.cost[sf.vars[j].neg] -= c;
  }

  auto add_row = [&](std::vector<Rational> coeffs, Relation rel, Rational rhs, int origin) {
    bool flipped = false;
    // A >= row with zero rhs is flipped as well so that it needs no artificial.
    if (rhs < 0 || (rhs == 0 && rel == Relation::GreaterEqual)) {
      for (auto& a : coeffs) a = -a;
      rhs = -rhs;
      flipped = true;
      if (rel == Relation::LessEqual) rel = Relation::GreaterEqual;
      else if (rel == Relation::GreaterEqual) rel = Relation::LessEqual;
    }
    sf.rows.push_back(std::move(coeffs));
    sf.relation.push_back(rel);
    sf.rhs.push_back(std::move(rhs));
    sf.flipped.push_back(flipped);
    sf.origin.push_back(origin);
  };

  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const auto& con = p.constraints[i];
    std::vector<Rational> coeffs(sf.columns, 0);
    Rational rhs = con.rhs;
    for (int j = 0; j < n; ++j) {
      const Rational& a = con.coeffs[j];
      if (a == 0) continue;
      const auto& v = sf.vars[j];
      rhs -= a * v.shift;
      coeffs[v.pos] += a * v.sign;
      if (v.neg >= 0) coeffs[v.neg] -= a;
    }
    add_row(std::move(coeffs), con.relation, std::move(rhs), static_cast<int>(i));
  }
  for (auto& [col, range] : upper_rows) {
    std::vector<Rational> coeffs(sf.columns, 0);
    coeffs[col] = 1;
    add_row(std::move(coeffs), Relation::LessEqual, range, -1);
  }
  return sf;
}

// ---------------------------------------------------------------------------
// Arithmetic policies.

struct ExactOps {
  using T = Rational;
  int sign(const T& v) const { return sgn(v); }
  T from(const Rational& r) const { return r; }
  Rational to_rational(const T& v) const { return v; }
  void submul(T& a, const T& f, const T& b, T& tmp) const {
    mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), b.get_mpq_t());
    mpq_sub(a.get_mpq_t(), a.get_mpq_t(), tmp.get_mpq_t());
  }
  bool less(const T& a, const T& b) const { return a < b; }
};

struct FloatOps {
  using T = double;
  double eps = 1e-10;
  int sign(double v) const { return v > eps ? 1 : (v < -eps ? -1 : 0); }
  double from(const Rational& r) const { return r.get_d(); }
  Rational to_rational(double v) const { return Rational(v); }
  void submul(double& a, double f, double b, double&) const { a -= f * b; }
  bool less(double a, double b) const { return a < b - eps; }
};

enum class ColumnKind { Structural, Slack, Surplus, Artificial };

template <class Ops>
class Tableau {
 public:
  using T = typename Ops::T;

  Tableau(const StandardForm& sf, Ops ops, const Options& options)
      : ops_(ops), options_(options), m_(static_cast<int>(sf.rows.size())) {
    kind_.assign(sf.columns, ColumnKind::Structural);
    identity_col_.assign(m_, -1);
    std::vector<std::pair<int, int>> extra;  // (row, +1/-1) for slack/surplus
    for (int r = 0; r < m_; ++r) {
      if (sf.relation[r] == Relation::LessEqual) {
        identity_col_[r] = add_column(ColumnKind::Slack);
      } else {
        if (sf.relation[r] == Relation::GreaterEqual) extra.emplace_back(r, add_column(ColumnKind::Surplus));
        identity_col_[r] = add_column(ColumnKind::Artificial);
      }
    }
    n_ = static_cast<int>(kind_.size());
    rows_.assign(m_, std::vector<T>(n_ + 1, ops_.from(0)));
    basis_.assign(m_, -1);
    for (int r = 0; r < m_; ++r) {
      for (int j = 0; j < sf.columns; ++j) {
        if (sf.rows[r][j] != 0) rows_[r][j] = ops_.from(sf.rows[r][j]);
      }
      rows_[r][n_] = ops_.from(sf.rhs[r]);
      rows_[r][identity_col_[r]] = ops_.from(1);
      basis_[r] = identity_col_[r];
    }
    for (auto [r, col] : extra) rows_[r][col] = ops_.from(-1);
    structural_cost_.assign(n_, ops_.from(0));
    for (int j = 0; j < sf.columns; ++j) structural_cost_[j] = ops_.from(sf.cost[j]);
  }

  Status solve() {
    bool has_artificial = false;
    for (auto k : kind_) has_artificial |= k == ColumnKind::Artificial;
    if (has_artificial) {
      std::vector<T> cost(n_, ops_.from(0));
      for (int j = 0; j < n_; ++j) {
        if (kind_[j] == ColumnKind::Artificial) cost[j] = ops_.from(-1);
      }
      std::vector<bool> allowed(n_, true);
      run(cost, allowed, true);
      if (ops_.sign(z_[n_]) < 0) return Status::Infeasible;
      drive_out_artificials();
    }
    std::vector<bool> allowed(n_);
    for (int j = 0; j < n_; ++j) allowed[j] = kind_[j] != ColumnKind::Artificial;
    return run(structural_cost_, allowed, lex_positive()) ? Status::Optimal : Status::Unbounded;
  }

  /// Values of the standard-form structural columns.
  std::vector<T> column_values(int structural_columns) const {
    std::vector<T> x(structural_columns, ops_.from(0));
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < structural_columns) x[basis_[r]] = rows_[r][n_];
    }
    return x;
  }

  /// Dual multiplier of every standard-form row (maximization convention).
  std::vector<T> row_duals() const {
    std::vector<T> y(m_);
    for (int r = 0; r < m_; ++r) y[r] = z_[identity_col_[r]];
    return y;
  }

  std::size_t iterations() const { return iterations_; }

 private:
  int add_column(ColumnKind kind) {
    kind_.push_back(kind);
    return static_cast<int>(kind_.size()) - 1;
  }

  void price(const std::vector<T>& cost) {
    z_.assign(n_ + 1, ops_.from(0));
    T tmp;
    for (int j = 0; j < n_; ++j) z_[j] = -cost[j];
    for (int r = 0; r < m_; ++r) {
      const T& cb = cost[basis_[r]];
      if (ops_.sign(cb) == 0) continue;
      const T neg = -cb;
      for (int j = 0; j <= n_; ++j) {
        if (ops_.sign(rows_[r][j]) != 0) ops_.submul(z_[j], neg, rows_[r][j], tmp);
      }
    }
  }

  // Every row (rhs, B^-1 row) lexicographically positive: the precondition
  // under which the lexicographic ratio test cannot cycle.
  bool lex_positive() const {
    for (int r = 0; r < m_; ++r) {
      int s = ops_.sign(rows_[r][n_]);
      for (int i = 0; s == 0 && i < m_; ++i) s = ops_.sign(rows_[r][identity_col_[i]]);
      if (s <= 0) return false;
    }
    return true;
  }

  // Is row a lexicographically smaller than row b after division by their
  // (positive) entries in column j?
  bool lex_less(int a, int b, int j) const {
    T lhs, rhs;
    auto compare = [&](int col) {
      lhs = rows_[a][col] * rows_[b][j];
      rhs = rows_[b][col] * rows_[a][j];
      return ops_.less(lhs, rhs) ? -1 : (ops_.less(rhs, lhs) ? 1 : 0);
    };
    if (const int c = compare(n_)) return c < 0;
    for (int i = 0; i < m_; ++i) {
      if (const int c = compare(identity_col_[i])) return c < 0;
    }
    return false;
  }

  // Dantzig pricing. With `lexicographic` the leaving row is chosen by the
  // lexicographic ratio test, which never cycles; otherwise ties go to the
  // smallest basic index and Bland's rule takes over after a streak of
  // degenerate pivots. Returns false when unbounded.
  bool run(const std::vector<T>& cost, const std::vector<bool>& allowed, bool lexicographic) {
    price(cost);
    std::vector<bool> basic(n_, false);
    for (int b : basis_) basic[b] = true;
    int degenerate_streak = 0;
    for (;;) {
      const bool bland = !lexicographic && degenerate_streak >= options_.degenerate_streak_limit;
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (!allowed[j] || basic[j] || ops_.sign(z_[j]) >= 0) continue;
        if (enter < 0) {
          enter = j;
          if (bland) break;
        } else if (ops_.less(z_[j], z_[enter])) {
          enter = j;
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      T best;
      for (int r = 0; r < m_; ++r) {
        if (ops_.sign(rows_[r][enter]) <= 0) continue;
        T ratio = rows_[r][n_] / rows_[r][enter];
        bool better = leave < 0 || ops_.less(ratio, best);
        if (!better && !ops_.less(best, ratio)) {
          better = lexicographic ? lex_less(r, leave, enter) : basis_[r] < basis_[leave];
        }
        if (better) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return false;

      if (++iterations_ > options_.max_iterations) {
        if constexpr (std::is_same_v<T, double>) {
          throw NumericalError("simplex iteration cap exhausted in float mode");
        } else {
          throw LimitError("simplex iteration cap exhausted");
        }
      }
      degenerate_streak = ops_.sign(best) == 0 ? degenerate_streak + 1 : 0;
      basic[basis_[leave]] = false;
      basic[enter] = true;
      pivot(leave, enter);
    }
  }

  void pivot(int r, int j) {
    T tmp;
    auto& prow = rows_[r];
    const T inv = ops_.from(1) / prow[j];
    std::vector<int> nz;
    for (int k = 0; k <= n_; ++k) {
      if (ops_.sign(prow[k]) != 0) {
        prow[k] *= inv;
        nz.push_back(k);
      } else {
        prow[k] = ops_.from(0);
      }
    }
    prow[j] = ops_.from(1);
    auto eliminate = [&](std::vector<T>& row) {
      if (ops_.sign(row[j]) == 0) return;
      const T factor = row[j];
      for (int k : nz) ops_.submul(row[k], factor, prow[k], tmp);
      row[j] = ops_.from(0);
    };
    for (int i = 0; i < m_; ++i) {
      if (i != r) eliminate(rows_[i]);
    }
    eliminate(z_);
    basis_[r] = j;
  }

  void drive_out_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (kind_[basis_[r]] != ColumnKind::Artificial) continue;
      for (int j = 0; j < n_; ++j) {
        if (kind_[j] != ColumnKind::Artificial && ops_.sign(rows_[r][j]) != 0) {
          pivot(r, j);
          break;
        }
      }
    }
  }

  Ops ops_;
  const Options& options_;
  int m_;
  int n_ = 0;
  std::vector<ColumnKind> kind_;
  std::vector<int> identity_col_;
  std::vector<std::vector<T>> rows_;
  std::vector<int> basis_;
  std::vector<T> z_;
  std::vector<T> structural_cost_;
  std::size_t iterations_ = 0;
};

template <class Ops>
Outcome run_simplex(const Problem& problem, const StandardForm& sf, Ops ops, const Options& options) {
  Tableau<Ops> tableau(sf, ops, options);
  Outcome out;
  out.exact = options.mode.is_exact();
  out.status = tableau.solve();
  out.iterations = tableau.iterations();
  if (out.status != Status::Optimal) return out;

  const auto cols = tableau.column_values(sf.columns);
  const int n = problem.num_variables();
  out.primal.resize(n);
  for (int j = 0; j < n; ++j) {
    const auto& v = sf.vars[j];
    Rational x = v.shift + v.sign * ops.to_rational(cols[v.pos]);
    if (v.neg >= 0) x -= ops.to_rational(cols[v.neg]);
    out.primal[j] = std::move(x);
  }
  const auto y = tableau.row_duals();
  out.dual.assign(problem.constraints.size(), 0);
  const Rational sense_sign = problem.sense == Sense::Maximize ? 1 : -1;
  for (std::size_t r = 0; r < y.size(); ++r) {
    if (sf.origin[r] < 0) continue;
    Rational d = ops.to_rational(y[r]);
    if (sf.flipped[r]) d = -d;
    out.dual[sf.origin[r]] = sense_sign * d;
  }
  out.objective = 0;
  for (int j = 0; j < n; ++j) out.objective += problem.objective[j] * out.primal[j];
  return out;
}

}  // namespace

CertificateCheck verify_optimality(const Problem& problem, const Outcome& outcome,
                                   const Rational& tolerance) {
  CertificateCheck check;
  check.violation = 0;
  check.gap = 0;
  const int n = problem.num_variables();
  if (outcome.status != Status::Optimal || static_cast<int>(outcome.primal.size()) != n ||
      outcome.dual.size() != problem.constraints.size()) {
    check.detail = "outcome is not an optimal solution of this problem";
    return check;
  }
  auto note = [&](const Rational& amount, const std::string& what) {
    if (amount > check.violation) {
      check.violation = amount;
      check.detail = what;
    }
  };
  const bool maximize = problem.sense == Sense::Maximize;

  // Primal feasibility.
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const auto& con = problem.constraints[i];
    Rational activity = 0;
    for (int j = 0; j < n; ++j) {
      if (con.coeffs[j] != 0) activity += con.coeffs[j] * outcome.primal[j];
    }
    const Rational excess = activity - con.rhs;
    const std::string where = "row " + std::to_string(i);
    if (con.relation != Relation::GreaterEqual && excess > 0) note(excess, where + " above rhs");
    if (con.relation != Relation::LessEqual && excess < 0) note(-excess, where + " below rhs");
    // Dual sign feasibility.
    const Rational& y = outcome.dual[i];
    const bool needs_nonneg = (con.relation == Relation::LessEqual) == maximize;
    if (con.relation != Relation::Equal) {
      if (needs_nonneg && y < 0) note(-y, where + " dual sign");
      if (!needs_nonneg && y > 0) note(y, where + " dual sign");
    }
  }
  for (int j = 0; j < n; ++j) {
    const auto b = problem.bounds_of(j);
    if (b.lower && outcome.primal[j] < *b.lower) note(*b.lower - outcome.primal[j], "variable below bound");
    if (b.upper && outcome.primal[j] > *b.upper) note(outcome.primal[j] - *b.upper, "variable above bound");
  }

  // Dual bound: b.y plus the best bound contribution of each reduced cost.
  Rational dual_bound = 0;
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    dual_bound += problem.constraints[i].rhs * outcome.dual[i];
  }
  for (int j = 0; j < n; ++j) {
    Rational r = problem.objective[j];
    for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
      if (problem.constraints[i].coeffs[j] != 0) r -= problem.constraints[i].coeffs[j] * outcome.dual[i];
    }
    if (r == 0) continue;
    const auto b = problem.bounds_of(j);
    // For maximization a positive reduced cost pushes toward the upper bound.
    const bool toward_upper = (r > 0) == maximize;
    const auto& bound = toward_upper ? b.upper : b.lower;
    if (!bound) {
      note(abs(r), "reduced cost of variable " + std::to_string(j) + " has no bound to rest on");
      continue;
    }
    dual_bound += r * *bound;
  }
  check.gap = abs(dual_bound - outcome.objective);
  check.ok = check.violation <= tolerance && check.gap <= tolerance;
  if (check.ok) check.detail.clear();
  else if (check.gap > tolerance && check.detail.empty()) check.detail = "duality gap";
  return check;
}

Outcome solve(const Problem& problem, const Options& options) {
  problem.validate();
  if (!options.dump_path.empty()) {
    std::ofstream out(options.dump_path);
    if (!out) throw PreconditionError("cannot write LP dump to " + options.dump_path);
    write_lp_format(problem, out);
  }
  const StandardForm sf = to_standard_form(problem);
  if (options.mode.is_exact()) {
    if (problem.nonzeros() > options.max_exact_nonzeros) {
      throw LimitError("exact LP has " + std::to_string(problem.nonzeros()) +
                       " nonzeros, cap is " + std::to_string(options.max_exact_nonzeros));
    }
    Outcome out = run_simplex(problem, sf, ExactOps{}, options);
    if (out.status == Status::Optimal) {
      const auto check = verify_optimality(problem, out);
      if (!check.ok) throw InvariantError("exact LP certificate failed: " + check.detail);
    }
    return out;
  }
  Outcome out = run_simplex(problem, sf, FloatOps{}, options);
  if (out.status == Status::Optimal) {
    const auto check = verify_optimality(problem, out, Rational(options.mode.tolerance));
    out.max_violation = check.violation.get_d();
    out.duality_gap = check.gap.get_d();
    if (!check.ok) {
      throw NumericalError("float LP certificate failed (" + check.detail +
                           ", violation " + std::to_string(out.max_violation) + ", gap " +
                           std::to_string(out.duality_gap) + ")");
    }
  }
  return out;
}

void write_lp_format(const Problem& problem, std::ostream& out) {
  auto term = [](const Rational& c, int j, bool first) {
    std::ostringstream s;
    s << std::setprecision(17);
    const double v = c.get_d();
    if (first) s << v << " x" << j + 1;
    else s << (v < 0 ? " - " : " + ") << std::fabs(v) << " x" << j + 1;
    return s.str();
  };
  auto linear = [&](const std::vector<Rational>& coeffs) {
    std::string expr;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      if (coeffs[j] == 0) continue;
      expr += term(coeffs[j], static_cast<int>(j), expr.empty());
    }
    return expr.empty() ? std::string("0 x1") : expr;
  };
  out << std::setprecision(17);
  out << "\\ written by adeglab\n";
  out << (problem.sense == Sense::Maximize ? "Maximize\n" : "Minimize\n");
  out << " obj: " << linear(problem.objective) << "\n";
  out << "Subject To\n";
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const auto& c = problem.constraints[i];
    const char* rel = c.relation == Relation::LessEqual ? "<=" : (c.relation == Relation::Equal ? "=" : ">=");
    out << " c" << i + 1 << ": " << linear(c.coeffs) << " " << rel << " " << c.rhs.get_d() << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < problem.num_variables(); ++j) {
    const auto b = problem.bounds_of(j);
    out << " ";
    if (b.lower) out << b.lower->get_d();
    else out << "-inf";
    out << " <= x" << j + 1 << " <= ";
    if (b.upper) out << b.upper->get_d();
    else out << "+inf";
    out << "\n";
  }
  out << "End\n";
}

}  // namespace adeglab::lp
