#include "kuothom/corpus.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "kuothom/random.hpp"

namespace kuothom {

namespace {

// Uniformly random exponent vector of total degree d in n variables, drawn by
// placing d balls into n bins one at a time.
Monomial random_monomial(RandomStream& rng, std::size_t n, std::uint32_t d) {
  std::vector<std::uint32_t> e(n, 0);
  for (std::uint32_t k = 0; k < d; ++k) ++e[rng.uniform_int(0, static_cast<std::int64_t>(n) - 1)];
  return Monomial(std::move(e));
}

MapGerm draw_germ(RandomStream& rng, std::size_t n, std::size_t p, const GermBounds& b) {
  if (n < p || p == 0) throw std::invalid_argument("random_germ: need n >= p >= 1");
  if (b.min_degree < 1 || b.min_degree > b.max_degree || b.max_terms < 1 || b.coeff_bound < 1)
    throw std::invalid_argument("random_germ: invalid bounds");
  std::vector<Polynomial> comps;
  for (std::size_t j = 0; j < p; ++j) {
    Polynomial c(n);
    while (c.is_zero()) {
      const auto terms = rng.uniform_int(1, b.max_terms);
      for (std::int64_t k = 0; k < terms; ++k) {
        const auto d = static_cast<std::uint32_t>(rng.uniform_int(b.min_degree, b.max_degree));
        std::int64_t coef = 0;
        while (coef == 0) coef = rng.uniform_int(-b.coeff_bound, b.coeff_bound);
        c += Polynomial::term(random_monomial(rng, n, d), Rational(static_cast<long>(coef)));
      }
    }
    comps.push_back(std::move(c));
  }
  return MapGerm(n, std::move(comps));
}

}  // namespace

MapGerm random_germ(std::uint64_t seed, std::size_t n, std::size_t p, const GermBounds& bounds) {
  RandomStream rng(seed, "germ");
  return draw_germ(rng, n, p, bounds);
}

MapGerm corpus_germ(std::uint64_t seed, std::size_t index) {
  RandomStream rng = RandomStream(seed, "corpus").substream("germ-" + std::to_string(index));
  const std::size_t n = 2 + index % 3;
  const auto p = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(n)));
  GermBounds b;
  b.min_degree = static_cast<std::uint32_t>(rng.uniform_int(1, 2));
  return draw_germ(rng, n, p, b);
}

}  // namespace kuothom
