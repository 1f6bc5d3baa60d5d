#include "kuothom/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace kuothom {

Monomial::Monomial(std::vector<std::uint32_t> exponents) : exponents_(std::move(exponents)) {
  degree_ = std::accumulate(exponents_.begin(), exponents_.end(), std::uint64_t{0});
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  if (a.size() != b.size()) throw std::invalid_argument("monomial variable-count mismatch");
  std::vector<std::uint32_t> e(a.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = a[i] + b[i];
  return Monomial(std::move(e));
}

bool GradedOrder::operator()(const Monomial& a, const Monomial& b) const {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return b.exponents() < a.exponents();
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.accumulate(Monomial::one(nvars), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw std::out_of_range("variable index out of range");
  std::vector<std::uint32_t> e(nvars, 0);
  e[index] = 1;
  return term(Monomial(std::move(e)), Rational(1));
}

Polynomial Polynomial::term(const Monomial& m, const Rational& c) {
  Polynomial p(m.size());
  p.accumulate(m, c);
  return p;
}

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::uint64_t Polynomial::degree() const {
  return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

Order Polynomial::order_at_origin() const {
  return terms_.empty() ? Order::infinity() : Order(terms_.begin()->first.degree());
}

Polynomial Polynomial::partial(std::size_t index) const {
  if (index >= nvars_) throw std::out_of_range("partial: variable index out of range");
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[index] == 0) continue;
    auto e = m.exponents();
    const auto k = e[index]--;
    out.accumulate(Monomial(std::move(e)), c * k);
  }
  return out;
}

Polynomial Polynomial::jet(std::uint64_t r) const {
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m.degree() > r) break;
    out.terms_.emplace_hint(out.terms_.end(), m, c);
  }
  return out;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial result = constant(nvars_, Rational(1));
  Polynomial base = *this;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::substitute_zero(std::span<const std::size_t> variables) const {
  for (auto v : variables)
    if (v >= nvars_) throw std::out_of_range("substitute_zero: variable index out of range");
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    bool vanishes = std::any_of(variables.begin(), variables.end(),
                                [&](std::size_t v) { return m[v] != 0; });
    if (!vanishes) out.terms_.emplace_hint(out.terms_.end(), m, c);
  }
  return out;
}

Polynomial Polynomial::extended(std::size_t nvars) const {
  if (nvars < nvars_) throw std::invalid_argument("extended: cannot drop variables");
  Polynomial out(nvars);
  for (const auto& [m, c] : terms_) {
    auto e = m.exponents();
    e.resize(nvars, 0);
    out.terms_.emplace(Monomial(std::move(e)), c);
  }
  return out;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  if (point.size() != nvars_) throw std::invalid_argument("evaluate: dimension mismatch");
  Rational sum(0);
  for (const auto& [m, c] : terms_) {
    Rational value = c;
    for (std::size_t i = 0; i < nvars_; ++i)
      for (std::uint32_t k = 0; k < m[i]; ++k) value *= point[i];
    sum += value;
  }
  return sum;
}

double Polynomial::evaluate(std::span<const double> point) const {
  if (point.size() != nvars_) throw std::invalid_argument("evaluate: dimension mismatch");
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double value = c.get_d();
    for (std::size_t i = 0; i < nvars_; ++i)
      for (std::uint32_t k = 0; k < m[i]; ++k) value *= point[i];
    sum += value;
  }
  return sum;
}

void Polynomial::check_compatible(const Polynomial& other, const char* op) const {
  if (nvars_ != other.nvars_)
    throw std::invalid_argument(std::string(op) + ": variable-count mismatch (" +
                                std::to_string(nvars_) + " vs " + std::to_string(other.nvars_) +
                                ")");
}

void Polynomial::accumulate(const Monomial& m, const Rational& c) {
  if (kuothom::is_zero(c)) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (kuothom::is_zero(it->second)) terms_.erase(it);
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_compatible(other, "add");
  for (const auto& [m, c] : other.terms_) accumulate(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_compatible(other, "subtract");
  for (const auto& [m, c] : other.terms_) accumulate(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (kuothom::is_zero(c)) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coef] : terms_) coef *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_compatible(b, "multiply");
  Polynomial out(a.nvars_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.accumulate(ma * mb, ca * cb);
  return out;
}

Polynomial operator-(Polynomial a) {
  for (auto& [m, c] : a.terms_) c = -c;
  return a;
}

// ---------------------------------------------------------------------------
// FloatPolynomial

FloatPolynomial::FloatPolynomial(const Polynomial& p) : nvars_(p.nvars()) {
  coefficients_.reserve(p.term_count());
  exponents_.reserve(p.term_count() * nvars_);
  for (const auto& [m, c] : p.terms()) {
    coefficients_.push_back(c.get_d());
    exponents_.insert(exponents_.end(), m.exponents().begin(), m.exponents().end());
  }
}

double FloatPolynomial::operator()(std::span<const double> point) const {
  if (point.size() != nvars_) throw std::invalid_argument("evaluate: dimension mismatch");
  double sum = 0.0;
  const std::uint32_t* e = exponents_.data();
  for (double c : coefficients_) {
    double value = c;
    for (std::size_t i = 0; i < nvars_; ++i, ++e)
      for (std::uint32_t k = 0; k < *e; ++k) value *= point[i];
    sum += value;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// UniPoly

UniPoly::UniPoly(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

UniPoly UniPoly::monomial(std::size_t power, const Rational& c) {
  if (kuothom::is_zero(c)) return {};
  std::vector<Rational> v(power + 1, Rational(0));
  v[power] = c;
  return UniPoly(std::move(v));
}

void UniPoly::trim() {
  while (!coeffs_.empty() && kuothom::is_zero(coeffs_.back())) coeffs_.pop_back();
}

Rational UniPoly::coefficient(std::size_t k) const {
  return k < coeffs_.size() ? coeffs_[k] : Rational(0);
}

Order UniPoly::order() const {
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    if (!kuothom::is_zero(coeffs_[k])) return Order(k);
  return Order::infinity();
}

UniPoly UniPoly::truncated(std::size_t max_degree) const {
  if (coeffs_.size() <= max_degree + 1) return *this;
  return UniPoly(std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + max_degree + 1));
}

Rational UniPoly::evaluate(const Rational& t) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double UniPoly::evaluate(double t) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + it->get_d();
  return acc;
}

UniPoly& UniPoly::operator+=(const UniPoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  trim();
  return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  trim();
  return *this;
}

UniPoly& UniPoly::operator*=(const Rational& c) {
  if (kuothom::is_zero(c)) {
    coeffs_.clear();
    return *this;
  }
  for (auto& x : coeffs_) x *= c;
  return *this;
}

UniPoly multiply_truncated(const UniPoly& a, const UniPoly& b, std::size_t max_degree) {
  if (a.is_zero() || b.is_zero()) return {};
  const auto& ca = a.coefficients();
  const auto& cb = b.coefficients();
  const std::size_t top = std::min(ca.size() + cb.size() - 2, max_degree);
  std::vector<Rational> out(top + 1, Rational(0));
  for (std::size_t i = 0; i < ca.size() && i <= top; ++i) {
    if (is_zero(ca[i])) continue;
    for (std::size_t j = 0; j < cb.size() && i + j <= top; ++j) {
      if (is_zero(cb[j])) continue;
      out[i + j] += ca[i] * cb[j];
    }
  }
  return UniPoly(std::move(out));
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return multiply_truncated(a, b, a.degree() + b.degree());
}

namespace {

// Powers lambda_i^k truncated to max_degree, built on demand.
class PowerTable {
 public:
  PowerTable(std::span<const UniPoly> lambda, std::size_t max_degree)
      : lambda_(lambda), max_degree_(max_degree), powers_(lambda.size()) {}

  const UniPoly& get(std::size_t var, std::uint32_t k) {
    auto& table = powers_[var];
    if (table.empty()) table.push_back(UniPoly::monomial(0, Rational(1)));
    while (table.size() <= k)
      table.push_back(multiply_truncated(table.back(), lambda_[var], max_degree_));
    return table[k];
  }

 private:
  std::span<const UniPoly> lambda_;
  std::size_t max_degree_;
  std::vector<std::vector<UniPoly>> powers_;
};

}  // namespace

UniPoly compose_truncated(const Polynomial& p, std::span<const UniPoly> lambda,
                          std::size_t max_degree) {
  if (lambda.size() != p.nvars())
    throw std::invalid_argument("compose: arc has " + std::to_string(lambda.size()) +
                                " components, polynomial has " + std::to_string(p.nvars()) +
                                " variables");
  PowerTable powers(lambda, max_degree);
  std::vector<Rational> acc(max_degree + 1, Rational(0));
  for (const auto& [m, c] : p.terms()) {
    UniPoly product = UniPoly::monomial(0, c);
    for (std::size_t i = 0; i < m.size() && !product.is_zero(); ++i) {
      if (m[i] == 0) continue;
      product = multiply_truncated(product, powers.get(i, m[i]), max_degree);
    }
    const auto& pc = product.coefficients();
    for (std::size_t k = 0; k < pc.size(); ++k) acc[k] += pc[k];
  }
  return UniPoly(std::move(acc));
}

UniPoly compose(const Polynomial& p, std::span<const UniPoly> lambda) {
  if (lambda.size() != p.nvars())
    throw std::invalid_argument("compose: arc has " + std::to_string(lambda.size()) +
                                " components, polynomial has " + std::to_string(p.nvars()) +
                                " variables");
  std::size_t bound = 0;
  for (const auto& [m, c] : p.terms()) {
    std::size_t deg = 0;
    for (std::size_t i = 0; i < m.size(); ++i) deg += std::size_t{m[i]} * lambda[i].degree();
    bound = std::max(bound, deg);
  }
  return compose_truncated(p, lambda, bound);
}

}  // namespace kuothom
