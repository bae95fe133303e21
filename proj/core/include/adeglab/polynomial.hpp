#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "adeglab/boolfn.hpp"
#include "adeglab/rational.hpp"

namespace adeglab {

/// Exact multilinear polynomial over the {0,1} monomial basis.
///
/// Monomials are variable subsets encoded as bitmasks (bit i-1 <-> x_i).
/// Zero coefficients are never stored.
class MultilinearPolynomial {
 public:
  using Monomial = std::uint32_t;
  static constexpr int kMaxArity = 32;

  explicit MultilinearPolynomial(int arity = 0);

  static MultilinearPolynomial constant(int arity, const Rational& c);
  static MultilinearPolynomial monomial(int arity, Monomial vars, const Rational& c = 1);

  int arity() const { return arity_; }
  /// Largest monomial size; 0 for constants and for the zero polynomial.
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  Rational coefficient(Monomial vars) const;

  void add_term(Monomial vars, const Rational& c);

  MultilinearPolynomial& operator+=(const MultilinearPolynomial& other);
  MultilinearPolynomial& operator-=(const MultilinearPolynomial& other);
  MultilinearPolynomial& operator*=(const Rational& scale);

  friend MultilinearPolynomial operator+(MultilinearPolynomial a, const MultilinearPolynomial& b) {
    return a += b;
  }
  friend MultilinearPolynomial operator-(MultilinearPolynomial a, const MultilinearPolynomial& b) {
    return a -= b;
  }
  friend MultilinearPolynomial operator*(MultilinearPolynomial a, const Rational& s) { return a *= s; }
  friend MultilinearPolynomial operator*(const Rational& s, MultilinearPolynomial a) { return a *= s; }
  /// Product reduced with x_i^2 = x_i.
  friend MultilinearPolynomial operator*(const MultilinearPolynomial& a, const MultilinearPolynomial& b);

  friend bool operator==(const MultilinearPolynomial& a, const MultilinearPolynomial& b) {
    return a.arity_ == b.arity_ && a.terms_ == b.terms_;
  }

 private:
  int arity_;
  std::map<Monomial, Rational> terms_;
};

using RealPoint = std::vector<Rational>;

/// Maximum arity for dense transforms over all 2^n points.
inline constexpr int kMaxDenseArity = 20;

/// The unique multilinear polynomial agreeing with f on the cube (subset
/// Moebius transform).
MultilinearPolynomial interpolate(const BooleanFunction& f);

/// Polynomial with the given values on {0,1}^n (index order as in truth tables).
MultilinearPolynomial from_point_values(int arity, std::vector<Rational> values);

/// Values of p at every Boolean point (zeta transform), index order as in
/// truth tables.
std::vector<Rational> point_values(const MultilinearPolynomial& p);

Rational eval_poly(const MultilinearPolynomial& p, std::span<const Rational> x);
/// Evaluation at a Boolean point given as a table index.
Rational eval_at_index(const MultilinearPolynomial& p, std::uint64_t index);

/// max over the cube of |p(x) - f(x)|.
Rational linf_error(const MultilinearPolynomial& p, const BooleanFunction& f);

/// |p(x) - p(x + delta)| <= bound where x is Boolean.
///
/// Preconditions (checked, PreconditionError): p takes values in [0,1] on
/// the cube and ||delta||_inf <= bound / n.
bool robustness_probe(const MultilinearPolynomial& p, std::span<const int> x,
                      std::span<const Rational> delta, const Rational& bound);

}  // namespace adeglab
