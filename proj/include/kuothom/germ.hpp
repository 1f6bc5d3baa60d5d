#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kuothom/polynomial.hpp"

namespace kuothom {

/// Polynomial map germ f = (f_1, ..., f_p) : (R^n, 0) -> (R^p, 0), n >= p >= 1,
/// optionally tagged with the jet degree r it represents.
class MapGerm {
 public:
  /// Throws std::invalid_argument unless every component has `n` variables and
  /// no constant term, and n >= p >= 1.
  MapGerm(std::size_t n, std::vector<Polynomial> components,
          std::optional<unsigned> jet_degree = std::nullopt);

  std::size_t n() const { return n_; }
  std::size_t p() const { return components_.size(); }
  const std::vector<Polynomial>& components() const { return components_; }
  const Polynomial& component(std::size_t j) const { return components_.at(j); }
  std::optional<unsigned> jet_degree() const { return jet_degree_; }

  bool is_zero_map() const;

  friend bool operator==(const MapGerm&, const MapGerm&) = default;

 private:
  std::size_t n_;
  std::vector<Polynomial> components_;
  std::optional<unsigned> jet_degree_;
};

}  // namespace kuothom
