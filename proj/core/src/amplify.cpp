#include "adeglab/amplify.hpp"

#include <chrono>
#include <map>
#include <sstream>

#include "adeglab/errors.hpp"

namespace adeglab {

SplitDual split_dual(const DualWitness& w) {
  if (w.purity_degree < 1) throw PreconditionError("split_dual: witness of purity 0 need not sum to zero");
  if (!w.exact) throw PreconditionError("split_dual: exact witness required");
  SplitDual s;
  s.inner_arity = w.arity;
  s.epsilon_threshold = w.epsilon;
  s.purity_degree = w.purity_degree;
  s.mu0.assign(w.values.size(), Rational(0));
  s.mu1.assign(w.values.size(), Rational(0));
  Rational plus = 0, minus = 0;
  for (std::size_t x = 0; x < w.values.size(); ++x) {
    const Rational& v = w.values[x];
    if (v > 0) {
      s.mu1[x] = 2 * v;
      plus += v;
    } else if (v < 0) {
      s.mu0[x] = -2 * v;
      minus -= v;
    }
  }
  if (plus != Rational(1, 2) || minus != Rational(1, 2)) {
    throw InvariantError("split_dual: positive and negative parts carry " + to_string(plus) + " and " +
                         to_string(minus));
  }
  return s;
}

Rational mu_expectation(const SplitDual& s, const BooleanFunction& g, int side) {
  if (g.arity() != s.inner_arity) throw PreconditionError("mu_expectation: arity mismatch");
  if (side != 0 && side != 1) throw PreconditionError("mu_expectation: side must be 0 or 1");
  const auto& mu = side == 1 ? s.mu1 : s.mu0;
  Rational sum = 0;
  for (std::uint64_t x = 0; x < g.size(); ++x) {
    if (g.at(x)) sum += mu[x];
  }
  return sum;
}

namespace {

// E_mu[prod_{j in S} x_j] for every S: superset sums of mu.
std::vector<Rational> monomial_moments(const std::vector<Rational>& mu, int m) {
  std::vector<Rational> out = mu;
  for (int i = 0; i < m; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t s = 0; s < out.size(); ++s) {
      if (!(s & bit)) out[s] += out[s | bit];
    }
  }
  return out;
}

Rational pow(const Rational& base, int e) {
  Rational out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

Rational binomial(int n, int k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return Rational(out);
}

// Pr[MAJ_t = 1] for t independent coins of bias e.
Rational majority_tail(const Rational& e, int t) {
  Rational sum = 0;
  for (int k = t / 2 + 1; k <= t; ++k) sum += binomial(t, k) * pow(e, k) * pow(1 - e, t - k);
  return sum;
}

Rational max_abs_difference(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Rational d = abs(a[i] - b[i]);
    if (d > worst) worst = d;
  }
  return worst;
}

std::vector<Rational> table_values(const BooleanFunction& f) {
  std::vector<Rational> v(f.size());
  for (std::uint64_t x = 0; x < f.size(); ++x) v[x] = f.at(x) ? 1 : 0;
  return v;
}

}  // namespace

MultilinearPolynomial apply_L(const MultilinearPolynomial& p, const SplitDual& s, int n_blocks, int copies) {
  const int m = s.inner_arity;
  if (n_blocks < 0 || copies < 1 || p.arity() != n_blocks * copies * m) {
    throw PreconditionError("apply_L: polynomial arity " + std::to_string(p.arity()) + " does not match " +
                            std::to_string(n_blocks) + " blocks of " + std::to_string(copies) + " x " +
                            std::to_string(m) + " bits");
  }
  const auto e0 = monomial_moments(s.mu0, m);
  const auto e1 = monomial_moments(s.mu1, m);
  const MultilinearPolynomial::Monomial sub_mask = (MultilinearPolynomial::Monomial{1} << m) - 1;

  std::map<MultilinearPolynomial::Monomial, Rational> acc;
  for (const auto& [mono, coeff] : p.terms()) {
    std::map<MultilinearPolynomial::Monomial, Rational> image{{0, coeff}};
    for (int i = 0; i < n_blocks; ++i) {
      Rational a = 1, b1 = 1;
      for (int k = 0; k < copies; ++k) {
        const auto sub = (mono >> ((i * copies + k) * m)) & sub_mask;
        a *= e0[sub];
        b1 *= e1[sub];
      }
      // Product of the affine factors collapses to a + (b1 - a) z_i on the cube.
      const Rational slope = b1 - a;
      if (slope == 0) {
        for (auto& [_, c] : image) c *= a;
        continue;
      }
      std::map<MultilinearPolynomial::Monomial, Rational> next;
      const auto zi = MultilinearPolynomial::Monomial{1} << i;
      for (const auto& [z, c] : image) {
        if (a != 0) next[z] += c * a;
        next[z | zi] += c * slope;
      }
      image = std::move(next);
    }
    for (const auto& [z, c] : image) acc[z] += c;
  }
  MultilinearPolynomial out(n_blocks);
  for (const auto& [z, c] : acc) out.add_term(z, c);
  return out;
}

std::string_view to_string(Middle m) {
  switch (m) {
    case Middle::Maj: return "MAJ";
    case Middle::And: return "AND";
    case Middle::Given: return "given";
  }
  return "?";
}

Middle parse_middle(std::string_view text) {
  std::string upper(text);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "MAJ") return Middle::Maj;
  if (upper == "AND") return Middle::And;
  if (upper == "GIVEN") return Middle::Given;
  throw PreconditionError("unknown middle '" + std::string(text) + "' (expected MAJ, AND or given)");
}

bool AmplifierReport::invariants_ok() const {
  for (const auto& c : checks) {
    if (!c.ok) return false;
  }
  return true;
}

AmplifierReport verify_amplifier_pipeline(const PipelineConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const Rational& eps = config.epsilon;
  const Rational& delta = config.delta;
  if (eps <= 0 || eps >= Rational(1, 2)) throw PreconditionError("pipeline: need 0 < epsilon < 1/2");
  if (delta <= 0 || delta >= Rational(1, 2)) throw PreconditionError("pipeline: need 0 < delta < 1/2");
  const auto& f = config.outer;
  const auto& g = config.inner;
  const int n = f.arity();
  if (n < 1) throw PreconditionError("pipeline: outer function needs at least one variable");

  // inner_fn is the function the witness is taken for; copies of it sit under
  // each outer variable.
  BooleanFunction inner_fn = g;
  BooleanFunction middle_fn;
  int copies = config.t;
  switch (config.middle) {
    case Middle::Maj:
      if (copies < 1 || copies % 2 == 0) throw PreconditionError("pipeline: MAJ middle needs odd t");
      middle_fn = make_builtin(Builtin::Maj, copies);
      break;
    case Middle::And:
      if (copies < 1) throw PreconditionError("pipeline: AND middle needs t >= 1");
      middle_fn = make_builtin(Builtin::And, copies);
      break;
    case Middle::Given:
      if (!config.given) throw PreconditionError("pipeline: given middle needs an amplifier function");
      inner_fn = compose(*config.given, g);
      middle_fn = make_builtin(Builtin::Identity, 1);
      copies = 1;
      break;
  }
  const BooleanFunction h = compose(f, compose(middle_fn, inner_fn));
  if (h.arity() > kMaxDenseArity) {
    throw LimitError("pipeline: f o middle o g has " + std::to_string(h.arity()) + " variables, cap is " +
                     std::to_string(kMaxDenseArity));
  }

  AmplifierReport r;
  r.outer = config.outer_label.empty() ? to_literal(f) : config.outer_label;
  r.inner = config.inner_label.empty() ? to_literal(g) : config.inner_label;
  r.middle = config.middle;
  r.t = config.middle == Middle::Given ? config.given->arity() : config.t;
  r.epsilon = eps;
  r.delta = delta;
  r.total_arity = h.arity();
  auto check = [&r](std::string name, bool ok, std::string detail) {
    r.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  const bool one_sided = config.middle == Middle::And;
  const DegreeCertificate inner_cert = one_sided
                                           ? one_sided_approx_degree(inner_fn, eps, config.options)
                                           : approx_degree(inner_fn, (1 - eps) / 2, config.options);
  if (!inner_cert.witness) throw PreconditionError("pipeline: inner function has degree 0, nothing to amplify");
  r.d_inner = inner_cert.degree;
  const SplitDual split = split_dual(*inner_cert.witness);
  r.e_mu1 = mu_expectation(split, inner_fn, 1);
  r.e_mu0 = mu_expectation(split, inner_fn, 0);

  Rational q0, q1;
  if (one_sided) {
    check("mu1_support", r.e_mu1 == 1, "E_mu1[g] = " + to_string(r.e_mu1));
    check("mu0_bound", r.e_mu0 < 1 - 2 * eps, "E_mu0[g] = " + to_string(r.e_mu0));
    if (r.e_mu0 >= 1) throw InvariantError("pipeline: degenerate one-sided witness, E_mu0[g] = 1");
    q0 = pow(r.e_mu0, copies);
    q1 = pow(r.e_mu1, copies);
  } else {
    check("mu1_lemma", r.e_mu1 > 1 - eps, "E_mu1[g] = " + to_string(r.e_mu1));
    check("mu0_lemma", r.e_mu0 < eps, "E_mu0[g] = " + to_string(r.e_mu0));
    if (r.e_mu1 <= Rational(1, 2) || r.e_mu0 >= Rational(1, 2)) {
      throw InvariantError("pipeline: degenerate witness, mu-errors " + to_string(1 - r.e_mu1) + " and " +
                           to_string(r.e_mu0) + " reach 1/2");
    }
    q0 = config.middle == Middle::Maj ? majority_tail(r.e_mu0, copies) : r.e_mu0;
    q1 = config.middle == Middle::Maj ? majority_tail(r.e_mu1, copies) : r.e_mu1;
  }
  r.z_deviation = std::max(q0, Rational(1 - q1));
  r.deviation_within = r.z_deviation <= delta / n;

  const DegreeCertificate h_cert = approx_degree(h, eps, config.options);
  const MultilinearPolynomial& p_h = *h_cert.approximant;
  r.deg_before = p_h.degree();
  const MultilinearPolynomial lp = apply_L(p_h, split, n, copies);
  r.deg_after = lp.degree();
  check("degree_reduction", r.deg_after <= r.deg_before / r.d_inner,
        std::to_string(r.deg_after) + " vs floor(" + std::to_string(r.deg_before) + "/" +
            std::to_string(r.d_inner) + ")");

  // Lh two ways: L applied to the interpolant of h, and the multilinear
  // extension of f at z'.
  const auto lh = point_values(apply_L(interpolate(h), split, n, copies));
  const MultilinearPolynomial f_poly = interpolate(f);
  std::vector<Rational> lh_direct(f.size());
  RealPoint zp(n);
  for (std::uint64_t z = 0; z < f.size(); ++z) {
    for (int i = 0; i < n; ++i) zp[i] = (z >> i) & 1 ? q1 : q0;
    lh_direct[z] = eval_poly(f_poly, zp);
  }
  check("lh_closed_form", lh == lh_direct, "L h agrees with f evaluated at z'");

  const auto lp_values = point_values(lp);
  const auto f_values = table_values(f);
  r.lh_error = max_abs_difference(f_values, lh);
  r.contraction_error = max_abs_difference(lh, lp_values);
  check("contraction", r.contraction_error <= eps, "||Lh - Lp_h|| = " + to_string(r.contraction_error));
  r.approx_error_of_Lp = max_abs_difference(f_values, lp_values);
  r.bound_used = delta + eps;
  r.bound_met = r.approx_error_of_Lp <= r.bound_used;
  if (r.deviation_within) {
    check("robustness", r.lh_error <= delta, "||f - Lh|| = " + to_string(r.lh_error));
  }
  if (r.bound_used < Rational(1, 2)) {
    r.adeg_f_at_bound = approx_degree(f, r.bound_used, config.options).degree;
    if (r.bound_met) {
      check("lower_bound_chain", *r.adeg_f_at_bound <= r.deg_after,
            "adeg(f) = " + std::to_string(*r.adeg_f_at_bound) + " at delta + epsilon");
    }
  }
  r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                     .count();
  return r;
}

Json report_to_json(const AmplifierReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  Json j = {{"outer", r.outer},
            {"inner", r.inner},
            {"middle", std::string(to_string(r.middle))},
            {"t", r.t},
            {"epsilon", rational_to_json(r.epsilon)},
            {"delta", rational_to_json(r.delta)},
            {"total_arity", r.total_arity},
            {"d_inner", r.d_inner},
            {"e_mu1", rational_to_json(r.e_mu1)},
            {"e_mu0", rational_to_json(r.e_mu0)},
            {"z_deviation", rational_to_json(r.z_deviation)},
            {"deg_before", r.deg_before},
            {"deg_after", r.deg_after},
            {"lh_error", rational_to_json(r.lh_error)},
            {"contraction_error", rational_to_json(r.contraction_error)},
            {"approx_error_of_Lp", rational_to_json(r.approx_error_of_Lp)},
            {"bound_used", rational_to_json(r.bound_used)},
            {"bound_met", r.bound_met},
            {"deviation_within", r.deviation_within},
            {"adeg_f_at_bound", r.adeg_f_at_bound ? Json(*r.adeg_f_at_bound) : Json(nullptr)},
            {"invariants_ok", r.invariants_ok()},
            {"checks", checks},
            {"runtime_ms", r.runtime_ms}};
  return j;
}

std::string report_csv_header() {
  return "outer,inner,middle,t,epsilon,delta,total_arity,d_inner,e_mu1,e_mu0,z_deviation,deg_before,"
         "deg_after,lh_error,contraction_error,approx_error_of_Lp,bound_used,bound_met,deviation_within,"
         "adeg_f_at_bound,invariants_ok,runtime_ms";
}

std::string report_csv_row(const AmplifierReport& r) {
  std::ostringstream out;
  out << csv_escape(r.outer) << ',' << csv_escape(r.inner) << ',' << to_string(r.middle) << ',' << r.t << ','
      << to_string(r.epsilon) << ',' << to_string(r.delta) << ',' << r.total_arity << ',' << r.d_inner << ','
      << to_string(r.e_mu1) << ',' << to_string(r.e_mu0) << ',' << to_string(r.z_deviation) << ','
      << r.deg_before << ',' << r.deg_after << ',' << to_string(r.lh_error) << ','
      << to_string(r.contraction_error) << ',' << to_string(r.approx_error_of_Lp) << ','
      << to_string(r.bound_used) << ',' << r.bound_met << ',' << r.deviation_within << ','
      << (r.adeg_f_at_bound ? std::to_string(*r.adeg_f_at_bound) : "") << ',' << r.invariants_ok() << ','
      << r.runtime_ms;
  return out.str();
}

}  // namespace adeglab
