#include "adeglab/polynomial.hpp"

#include <bit>

#include "adeglab/errors.hpp"

namespace adeglab {

namespace {

void check_dense(int arity, const char* what) {
  if (arity > kMaxDenseArity) {
    throw LimitError(std::string(what) + ": arity " + std::to_string(arity) + " exceeds " +
                     std::to_string(kMaxDenseArity));
  }
}

}  // namespace

MultilinearPolynomial::MultilinearPolynomial(int arity) : arity_(arity) {
  if (arity < 0 || arity > kMaxArity) {
    throw PreconditionError("polynomial arity must be in 0.." + std::to_string(kMaxArity));
  }
}

MultilinearPolynomial MultilinearPolynomial::constant(int arity, const Rational& c) {
  MultilinearPolynomial p(arity);
  p.add_term(0, c);
  return p;
}

MultilinearPolynomial MultilinearPolynomial::monomial(int arity, Monomial vars, const Rational& c) {
  MultilinearPolynomial p(arity);
  p.add_term(vars, c);
  return p;
}

int MultilinearPolynomial::degree() const {
  int d = 0;
  for (const auto& [vars, c] : terms_) d = std::max(d, std::popcount(vars));
  return d;
}

Rational MultilinearPolynomial::coefficient(Monomial vars) const {
  auto it = terms_.find(vars);
  return it == terms_.end() ? Rational(0) : it->second;
}

void MultilinearPolynomial::add_term(Monomial vars, const Rational& c) {
  if (arity_ < kMaxArity && (vars >> arity_) != 0) {
    throw PreconditionError("monomial mentions a variable beyond arity " + std::to_string(arity_));
  }
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(vars, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultilinearPolynomial& MultilinearPolynomial::operator+=(const MultilinearPolynomial& other) {
  if (other.arity_ != arity_) throw PreconditionError("polynomial arity mismatch");
  for (const auto& [vars, c] : other.terms_) add_term(vars, c);
  return *this;
}

MultilinearPolynomial& MultilinearPolynomial::operator-=(const MultilinearPolynomial& other) {
  if (other.arity_ != arity_) throw PreconditionError("polynomial arity mismatch");
  for (const auto& [vars, c] : other.terms_) add_term(vars, -c);
  return *this;
}

MultilinearPolynomial& MultilinearPolynomial::operator*=(const Rational& scale) {
  if (scale == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [vars, c] : terms_) c *= scale;
  return *this;
}

MultilinearPolynomial operator*(const MultilinearPolynomial& a, const MultilinearPolynomial& b) {
  if (a.arity_ != b.arity_) throw PreconditionError("polynomial arity mismatch");
  MultilinearPolynomial out(a.arity_);
  for (const auto& [va, ca] : a.terms_) {
    for (const auto& [vb, cb] : b.terms_) out.add_term(va | vb, ca * cb);
  }
  return out;
}

MultilinearPolynomial interpolate(const BooleanFunction& f) {
  const int n = f.arity();
  check_dense(n, "interpolate");
  // Coefficients of a 0/1-valued function are integers of magnitude <= 2^n,
  // so the transform runs exactly in 64-bit integers.
  std::vector<std::int64_t> c(f.size());
  for (std::uint64_t k = 0; k < f.size(); ++k) c[k] = f.at(k) ? 1 : 0;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint64_t k = 0; k < f.size(); ++k) {
      if (k & bit) c[k] -= c[k ^ bit];
    }
  }
  MultilinearPolynomial p(n);
  for (std::uint64_t k = 0; k < f.size(); ++k) {
    if (c[k] != 0) p.add_term(static_cast<MultilinearPolynomial::Monomial>(k), Rational(c[k]));
  }
  return p;
}

MultilinearPolynomial from_point_values(int arity, std::vector<Rational> values) {
  check_dense(arity, "from_point_values");
  const std::uint64_t size = std::uint64_t{1} << arity;
  if (values.size() != size) throw PreconditionError("from_point_values: wrong number of values");
  for (int i = 0; i < arity; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint64_t k = 0; k < size; ++k) {
      if (k & bit) values[k] -= values[k ^ bit];
    }
  }
  MultilinearPolynomial p(arity);
  for (std::uint64_t k = 0; k < size; ++k) {
    if (values[k] != 0) p.add_term(static_cast<MultilinearPolynomial::Monomial>(k), values[k]);
  }
  return p;
}

std::vector<Rational> point_values(const MultilinearPolynomial& p) {
  const int n = p.arity();
  check_dense(n, "point_values");
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<Rational> v(size);
  for (const auto& [vars, c] : p.terms()) v[vars] = c;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint64_t k = 0; k < size; ++k) {
      if (k & bit) v[k] += v[k ^ bit];
    }
  }
  return v;
}

Rational eval_poly(const MultilinearPolynomial& p, std::span<const Rational> x) {
  if (static_cast<int>(x.size()) != p.arity()) {
    throw PreconditionError("eval_poly: point has " + std::to_string(x.size()) +
                            " coordinates, polynomial has arity " + std::to_string(p.arity()));
  }
  Rational total = 0;
  Rational term;
  for (const auto& [vars, c] : p.terms()) {
    term = c;
    for (auto rest = vars; rest != 0 && term != 0; rest &= rest - 1) term *= x[std::countr_zero(rest)];
    total += term;
  }
  return total;
}

Rational eval_at_index(const MultilinearPolynomial& p, std::uint64_t index) {
  Rational total = 0;
  for (const auto& [vars, c] : p.terms()) {
    if ((vars & index) == vars) total += c;
  }
  return total;
}

Rational linf_error(const MultilinearPolynomial& p, const BooleanFunction& f) {
  if (p.arity() != f.arity()) throw PreconditionError("linf_error: arity mismatch");
  const auto values = point_values(p);
  Rational worst = 0;
  for (std::uint64_t k = 0; k < values.size(); ++k) {
    Rational err = values[k] - (f.at(k) ? 1 : 0);
    if (err < 0) err = -err;
    if (err > worst) worst = err;
  }
  return worst;
}

bool robustness_probe(const MultilinearPolynomial& p, std::span<const int> x,
                      std::span<const Rational> delta, const Rational& bound) {
  const int n = p.arity();
  if (static_cast<int>(x.size()) != n || static_cast<int>(delta.size()) != n) {
    throw PreconditionError("robustness_probe: dimension mismatch");
  }
  if (bound <= 0) throw PreconditionError("robustness_probe: bound must be positive");
  if (n > 0) {
    const Rational radius = bound / n;
    for (const auto& d : delta) {
      if (abs(d) > radius) throw PreconditionError("robustness_probe: ||delta||_inf exceeds bound/n");
    }
  }
  for (const auto& v : point_values(p)) {
    if (v < 0 || v > 1) throw PreconditionError("robustness_probe: p leaves [0,1] on the cube");
  }
  RealPoint shifted(n);
  for (int i = 0; i < n; ++i) shifted[i] = Rational(x[i]) + delta[i];
  const Rational base = eval_at_index(p, index_of(x));
  return abs(base - eval_poly(p, shifted)) <= bound;
}

}  // namespace adeglab
