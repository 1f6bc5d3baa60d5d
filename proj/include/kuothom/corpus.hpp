#pragma once

#include <cstddef>
#include <cstdint>

#include "kuothom/germ.hpp"

namespace kuothom {

struct GermBounds {
  std::uint32_t min_degree = 1;
  std::uint32_t max_degree = 4;
  std::uint32_t max_terms = 4;
  std::int64_t coeff_bound = 3;
};

/// Deterministic random polynomial germ (R^n,0) -> (R^p,0). Each component has
/// between 1 and max_terms terms with total degree in [min_degree, max_degree]
/// and nonzero integer coefficients in [-coeff_bound, coeff_bound].
MapGerm random_germ(std::uint64_t seed, std::size_t n, std::size_t p, const GermBounds& bounds = {});

/// Germ number `index` of the standard test corpus for `seed`:
/// n cycles through 2, 3, 4; p is drawn from 1..n; components have degree <= 4
/// and start in degree 1 or 2.
MapGerm corpus_germ(std::uint64_t seed, std::size_t index);

}  // namespace kuothom
