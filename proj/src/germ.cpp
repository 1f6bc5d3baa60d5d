#include "kuothom/germ.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace kuothom {

MapGerm::MapGerm(std::size_t n, std::vector<Polynomial> components,
                 std::optional<unsigned> jet_degree)
    : n_(n), components_(std::move(components)), jet_degree_(jet_degree) {
  if (components_.empty()) throw std::invalid_argument("map germ needs at least one component");
  if (n_ < components_.size())
    throw std::invalid_argument("map germ needs n >= p (n = " + std::to_string(n_) +
                                ", p = " + std::to_string(components_.size()) + ")");
  for (std::size_t j = 0; j < components_.size(); ++j) {
    const auto& c = components_[j];
    if (c.nvars() != n_)
      throw std::invalid_argument("component " + std::to_string(j + 1) + " has " +
                                  std::to_string(c.nvars()) + " variables, expected " +
                                  std::to_string(n_));
    if (!is_zero(c.constant_term()))
      throw std::invalid_argument("component " + std::to_string(j + 1) +
                                  " does not vanish at the origin");
  }
  if (jet_degree_ && *jet_degree_ == 0) throw std::invalid_argument("jet degree must be >= 1");
}

bool MapGerm::is_zero_map() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const Polynomial& c) { return c.is_zero(); });
}

}  // namespace kuothom
