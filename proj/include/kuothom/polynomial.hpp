#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "kuothom/order.hpp"
#include "kuothom/rational.hpp"

namespace kuothom {

/// Exponent vector of a monomial in a fixed number of variables.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<std::uint32_t> exponents);
  static Monomial one(std::size_t nvars) { return Monomial(std::vector<std::uint32_t>(nvars, 0)); }

  std::size_t size() const { return exponents_.size(); }
  std::uint64_t degree() const { return degree_; }
  std::uint32_t operator[](std::size_t i) const { return exponents_[i]; }
  const std::vector<std::uint32_t>& exponents() const { return exponents_; }

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<std::uint32_t> exponents_;
  std::uint64_t degree_ = 0;
};

/// Graded order: lower total degree first; within a degree, lexicographically
/// larger exponent vectors first, so x precedes y and x^2 precedes x*y.
/// This is the canonical term order and the float summation order.
struct GradedOrder {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate polynomial with exact rational coefficients.
/// Variables are indexed from 0. No zero coefficient is ever stored.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, GradedOrder>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t index);
  static Polynomial term(const Monomial& m, const Rational& c);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(const Monomial& m) const;
  Rational constant_term() const { return coefficient(Monomial::one(nvars_)); }

  /// Highest total degree; 0 for the zero polynomial.
  std::uint64_t degree() const;

  /// Lowest total degree of a nonzero term; infinity for the zero polynomial.
  Order order_at_origin() const;

  /// Formal partial derivative with respect to variable `index`.
  Polynomial partial(std::size_t index) const;

  /// Drops every term of total degree above r.
  Polynomial jet(std::uint64_t r) const;

  Polynomial pow(unsigned k) const;

  /// Sets each listed variable to zero.
  Polynomial substitute_zero(std::span<const std::size_t> variables) const;

  /// Same polynomial viewed in `nvars` >= nvars() variables.
  Polynomial extended(std::size_t nvars) const;

  Rational evaluate(std::span<const Rational> point) const;

  /// Terms are summed in GradedOrder; each monomial is a left-to-right product
  /// of repeated multiplications, so results are reproducible bit for bit.
  double evaluate(std::span<const double> point) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend Polynomial operator-(Polynomial a);

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void accumulate(const Monomial& m, const Rational& c);
  void check_compatible(const Polynomial& other, const char* op) const;

  std::size_t nvars_ = 0;
  TermMap terms_;
};

/// Double-precision snapshot of a Polynomial for hot evaluation loops.
/// Produces results identical to Polynomial::evaluate(span<const double>).
class FloatPolynomial {
 public:
  FloatPolynomial() = default;
  explicit FloatPolynomial(const Polynomial& p);

  double operator()(std::span<const double> point) const;
  std::size_t nvars() const { return nvars_; }

 private:
  std::size_t nvars_ = 0;
  std::vector<double> coefficients_;
  std::vector<std::uint32_t> exponents_;  // row-major, nvars_ per term
};

/// Dense univariate polynomial in t with exact coefficients; coefficient k
/// multiplies t^k. Trailing zero coefficients are never stored.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coefficients);

  static UniPoly monomial(std::size_t power, const Rational& c);

  bool is_zero() const { return coeffs_.empty(); }
  /// Highest power with a nonzero coefficient; 0 for the zero polynomial.
  std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  Rational coefficient(std::size_t k) const;

  /// Index of the first nonzero coefficient; infinity for zero.
  Order order() const;

  /// Keeps only powers <= max_degree.
  UniPoly truncated(std::size_t max_degree) const;

  Rational evaluate(const Rational& t) const;
  double evaluate(double t) const;

  UniPoly& operator+=(const UniPoly& other);
  UniPoly& operator-=(const UniPoly& other);
  UniPoly& operator*=(const Rational& c);

  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(UniPoly a, const Rational& c) { return a *= c; }

  friend bool operator==(const UniPoly&, const UniPoly&) = default;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Product truncated to powers <= max_degree.
UniPoly multiply_truncated(const UniPoly& a, const UniPoly& b, std::size_t max_degree);

/// Exact p(lambda(t)) for a tuple of univariate polynomials lambda.
UniPoly compose(const Polynomial& p, std::span<const UniPoly> lambda);

/// p(lambda(t)) with every power above max_degree discarded. Equal to
/// compose(p, lambda).truncated(max_degree) but cheaper.
UniPoly compose_truncated(const Polynomial& p, std::span<const UniPoly> lambda,
                          std::size_t max_degree);

}  // namespace kuothom
