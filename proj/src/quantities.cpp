#include "kuothom/quantities.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kuothom {

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

Polynomial determinant(const std::vector<std::vector<Polynomial>>& matrix) {
  const std::size_t size = matrix.size();
  if (size == 0) throw std::invalid_argument("determinant of an empty matrix");
  for (const auto& row : matrix)
    if (row.size() != size) throw std::invalid_argument("determinant of a non-square matrix");
  if (size == 1) return matrix[0][0];
  const std::size_t nvars = matrix[0][0].nvars();
  Polynomial det(nvars);
  for (std::size_t col = 0; col < size; ++col) {
    if (matrix[0][col].is_zero()) continue;
    std::vector<std::vector<Polynomial>> sub;
    sub.reserve(size - 1);
    for (std::size_t r = 1; r < size; ++r) {
      std::vector<Polynomial> row;
      row.reserve(size - 1);
      for (std::size_t c = 0; c < size; ++c)
        if (c != col) row.push_back(matrix[r][c]);
      sub.push_back(std::move(row));
    }
    Polynomial term = matrix[0][col] * determinant(sub);
    if (col % 2 == 0) det += term;
    else det -= term;
  }
  return det;
}

MinorCache MinorCache::build(const MapGerm& f) {
  const std::size_t n = f.n();
  const std::size_t p = f.p();
  MinorCache cache;

  std::vector<std::vector<Polynomial>> jacobian(p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < n; ++i) jacobian[j].push_back(f.component(j).partial(i));

  cache.rho_ = Polynomial(n);
  std::vector<Polynomial> rho_row;
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = Polynomial::variable(n, i);
    cache.rho_ += xi * xi;
    rho_row.push_back(xi * Rational(2));
  }

  auto submatrix = [&](const std::vector<std::size_t>& cols, bool with_rho) {
    std::vector<std::vector<Polynomial>> m;
    for (std::size_t j = 0; j < p; ++j) {
      std::vector<Polynomial> row;
      for (auto c : cols) row.push_back(jacobian[j][c]);
      m.push_back(std::move(row));
    }
    if (with_rho) {
      std::vector<Polynomial> row;
      for (auto c : cols) row.push_back(rho_row[c]);
      m.push_back(std::move(row));
    }
    return m;
  };

  for (auto& cols : combinations(n, p)) {
    auto det = determinant(submatrix(cols, false));
    cache.kuo_.push_back({std::move(cols), std::move(det)});
  }
  if (n > p) {
    for (auto& cols : combinations(n, p + 1)) {
      auto det = determinant(submatrix(cols, true));
      cache.thom_.push_back({std::move(cols), std::move(det)});
    }
  }
  return cache;
}

double int_pow(double base, unsigned k) {
  double r = 1.0;
  for (unsigned i = 0; i < k; ++i) r *= base;
  return r;
}

namespace {

// |y|^m given |y|^2; even powers avoid the square root.
double norm_pow(double squared, unsigned m) {
  if (m % 2 == 0) return int_pow(squared, m / 2);
  return int_pow(std::sqrt(squared), m);
}

double sum_abs_pow(const std::vector<FloatPolynomial>& polys, std::span<const double> x,
                   unsigned m) {
  double s = 0.0;
  for (const auto& q : polys) s += int_pow(std::fabs(q(x)), m);
  return s;
}

}  // namespace

GermQuantities::GermQuantities(MapGerm f) : germ_(std::move(f)), minors_(MinorCache::build(germ_)) {
  for (const auto& c : germ_.components()) components_f_.emplace_back(c);
  for (const auto& mnr : minors_.kuo()) kuo_f_.emplace_back(mnr.value);
  for (const auto& mnr : minors_.thom()) thom_f_.emplace_back(mnr.value);
  if (germ_.p() == 1)
    for (std::size_t i = 0; i < germ_.n(); ++i)
      gradient_f_.emplace_back(germ_.component(0).partial(i));
}

void GermQuantities::check_point(std::span<const double> x) const {
  if (x.size() != germ_.n())
    throw std::invalid_argument("point has dimension " + std::to_string(x.size()) +
                                ", germ has n = " + std::to_string(germ_.n()));
}

double GermQuantities::squared_map_norm(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& c : components_f_) {
    const double v = c(x);
    s += v * v;
  }
  return s;
}

double GermQuantities::map_norm(std::span<const double> x) const {
  check_point(x);
  return std::sqrt(squared_map_norm(x));
}

double GermQuantities::kuo_minor_sum(std::span<const double> x) const {
  check_point(x);
  return sum_abs_pow(kuo_f_, x, 1);
}

double GermQuantities::gradient_norm(std::span<const double> x) const {
  check_point(x);
  if (germ_.p() != 1) throw std::invalid_argument("gradient_norm requires p = 1");
  double s = 0.0;
  for (const auto& d : gradient_f_) {
    const double v = d(x);
    s += v * v;
  }
  return std::sqrt(s);
}

double GermQuantities::kuo(unsigned m, std::span<const double> x) const {
  check_point(x);
  if (m == 0) throw std::invalid_argument("m must be positive");
  double sq = 0.0;
  for (double xi : x) sq += xi * xi;
  return norm_pow(sq, m) * sum_abs_pow(kuo_f_, x, m) + norm_pow(squared_map_norm(x), m);
}

double GermQuantities::thom(unsigned m, std::span<const double> x) const {
  check_point(x);
  if (m == 0) throw std::invalid_argument("m must be positive");
  return sum_abs_pow(thom_f_, x, m) + norm_pow(squared_map_norm(x), m);
}

KTEvaluation GermQuantities::decompose(std::span<const double> x, unsigned m) const {
  check_point(x);
  KTEvaluation e;
  double sq = 0.0;
  for (double xi : x) sq += xi * xi;
  e.u = std::sqrt(squared_map_norm(x));
  e.v = std::sqrt(sq) * sum_abs_pow(kuo_f_, x, 1);
  e.w = sum_abs_pow(thom_f_, x, 1);
  e.h = e.v + e.u;
  e.g = e.w + e.u;
  e.m = m;
  e.K = kuo(m, x);
  e.T = thom(m, x);
  e.point.assign(x.begin(), x.end());
  return e;
}

Polynomial GermQuantities::kuo_polynomial(unsigned m) const {
  if (m == 0 || m % 2 != 0) throw std::invalid_argument("symbolic K_m requires even m");
  const std::size_t n = germ_.n();
  Polynomial minor_sum(n);
  for (const auto& mnr : minors_.kuo()) minor_sum += mnr.value.pow(m);
  Polynomial f_sq(n);
  for (const auto& c : germ_.components()) f_sq += c * c;
  return minors_.rho().pow(m / 2) * minor_sum + f_sq.pow(m / 2);
}

Polynomial GermQuantities::thom_polynomial(unsigned m) const {
  if (m == 0 || m % 2 != 0) throw std::invalid_argument("symbolic T_m requires even m");
  const std::size_t n = germ_.n();
  Polynomial out(n);
  for (const auto& mnr : minors_.thom()) out += mnr.value.pow(m);
  Polynomial f_sq(n);
  for (const auto& c : germ_.components()) f_sq += c * c;
  return out + f_sq.pow(m / 2);
}

std::vector<Polynomial> ideal_generators_kuo(const MapGerm& f) {
  auto gens = f.components();
  const auto cache = MinorCache::build(f);
  for (const auto& mnr : cache.kuo()) gens.push_back(mnr.value);
  return gens;
}

std::vector<Polynomial> ideal_generators_thom(const MapGerm& f) {
  auto gens = f.components();
  const auto cache = MinorCache::build(f);
  for (const auto& mnr : cache.thom()) gens.push_back(mnr.value);
  return gens;
}

}  // namespace kuothom
