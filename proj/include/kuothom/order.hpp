#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace kuothom {

/// Order of vanishing: a nonnegative integer or infinity (the order of the
/// zero series). Infinity absorbs addition and is dropped by min.
class Order {
 public:
  constexpr Order() = default;
  constexpr Order(std::uint64_t v) : value_(v) {
    if (v == kInfinite) throw std::overflow_error("Order: value out of range");
  }

  static constexpr Order infinity() {
    Order o;
    o.value_ = kInfinite;
    return o;
  }

  constexpr bool is_infinite() const { return value_ == kInfinite; }
  constexpr bool is_finite() const { return value_ != kInfinite; }

  std::uint64_t value() const {
    if (is_infinite()) throw std::logic_error("Order: value() of infinite order");
    return value_;
  }

  friend constexpr Order operator+(Order a, Order b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return Order(a.value_ + b.value_);
  }
  friend constexpr Order operator*(std::uint64_t k, Order a) {
    if (a.is_infinite()) return infinity();
    return Order(k * a.value_);
  }

  friend constexpr auto operator<=>(Order, Order) = default;
  friend constexpr bool operator==(Order, Order) = default;

  std::string to_string() const {
    return is_infinite() ? std::string("inf") : std::to_string(value_);
  }

 private:
  static constexpr std::uint64_t kInfinite = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t value_ = 0;
};

}  // namespace kuothom
