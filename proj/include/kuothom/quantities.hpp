#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kuothom/germ.hpp"
#include "kuothom/polynomial.hpp"

namespace kuothom {

/// All k-element subsets of {0, ..., n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k);

/// Determinant of a square polynomial matrix by cofactor expansion along the
/// first row.
Polynomial determinant(const std::vector<std::vector<Polynomial>>& matrix);

/// A Jacobian minor together with the (0-based, increasing) columns it uses.
struct Minor {
  std::vector<std::size_t> columns;
  Polynomial value;
};

/// Symbolic Jacobian minors of a germ:
///   kuo:  D(f_1..f_p)/D(x_i1..x_ip)         for every p-subset of columns,
///   thom: D(f_1..f_p, rho)/D(x_i1..x_ip+1)  for every (p+1)-subset,
/// where rho = x_1^2 + ... + x_n^2. thom is empty when n = p.
class MinorCache {
 public:
  static MinorCache build(const MapGerm& f);

  const std::vector<Minor>& kuo() const { return kuo_; }
  const std::vector<Minor>& thom() const { return thom_; }
  const Polynomial& rho() const { return rho_; }

 private:
  std::vector<Minor> kuo_;
  std::vector<Minor> thom_;
  Polynomial rho_;
};

/// Point evaluation of the Kuo/Thom decomposition.
///   u = |f(x)|, v = |x| * sum |kuo minor|, w = sum |thom minor|,
///   h = v + u, g = w + u, K = K_m(f,x), T = T_m(f,x).
struct KTEvaluation {
  double u = 0, v = 0, w = 0, h = 0, g = 0;
  double K = 0, T = 0;
  unsigned m = 1;
  std::vector<double> point;
};

/// Evaluates the Kuo quantity
///   K_m(f,x) = |x|^m * sum_I |det D(f)/D(x_I)|^m + |f(x)|^m
/// and the Thom quantity
///   T_m(f,x) = sum_J |det D(f,rho)/D(x_J)|^m + |f(x)|^m
/// with Euclidean norms throughout. Each minor is evaluated from its exact
/// symbolic form. Immutable after construction.
class GermQuantities {
 public:
  explicit GermQuantities(MapGerm f);

  const MapGerm& germ() const { return germ_; }
  const MinorCache& minors() const { return minors_; }

  double kuo(unsigned m, std::span<const double> x) const;
  double thom(unsigned m, std::span<const double> x) const;
  KTEvaluation decompose(std::span<const double> x, unsigned m = 1) const;

  /// |f(x)|.
  double map_norm(std::span<const double> x) const;
  /// sum over p-subsets of |kuo minor(x)|.
  double kuo_minor_sum(std::span<const double> x) const;
  /// Euclidean norm of grad f_1; only meaningful for p = 1.
  double gradient_norm(std::span<const double> x) const;

  /// Exact expansion of K_m (resp. T_m) as a polynomial; m must be even so
  /// that every absolute value and norm becomes a polynomial.
  Polynomial kuo_polynomial(unsigned m) const;
  Polynomial thom_polynomial(unsigned m) const;

 private:
  void check_point(std::span<const double> x) const;
  double squared_map_norm(std::span<const double> x) const;

  MapGerm germ_;
  MinorCache minors_;
  std::vector<FloatPolynomial> components_f_;
  std::vector<FloatPolynomial> kuo_f_;
  std::vector<FloatPolynomial> thom_f_;
  std::vector<FloatPolynomial> gradient_f_;
};

/// Generators f_1..f_p followed by the kuo minors (the ideal I_K(f)).
std::vector<Polynomial> ideal_generators_kuo(const MapGerm& f);
/// Generators f_1..f_p followed by the thom minors (the ideal I_T(f)).
std::vector<Polynomial> ideal_generators_thom(const MapGerm& f);

/// base^k by repeated multiplication.
double int_pow(double base, unsigned k);

}  // namespace kuothom
