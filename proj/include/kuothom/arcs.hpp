#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kuothom/order.hpp"
#include "kuothom/polynomial.hpp"
#include "kuothom/quantities.hpp"

namespace kuothom {

/// Polynomial arc t -> lambda(t) in R^n with lambda(0) = 0 and lambda not
/// identically zero.
class Arc {
 public:
  explicit Arc(std::vector<UniPoly> components);

  std::size_t size() const { return components_.size(); }
  const std::vector<UniPoly>& components() const { return components_; }
  const UniPoly& operator[](std::size_t i) const { return components_[i]; }

  /// ord |lambda(t)| = min_i ord lambda_i(t).
  Order order() const;

  std::vector<double> at(double t) const;

  friend bool operator==(const Arc&, const Arc&) = default;

 private:
  std::vector<UniPoly> components_;
};

/// Arc text format: semicolon-separated polynomials in t, e.g. "t^2; t".
Arc parse_arc(std::string_view text, std::size_t line = 1);

/// One arc per non-blank line; '#' starts a comment.
std::vector<Arc> parse_arcs(std::string_view text);

std::string to_string(const Arc& arc);

/// ord_t of a univariate polynomial; infinity for zero.
inline Order ord_uni(const UniPoly& q) { return q.order(); }

/// ord_t p(lambda(t)), computed exactly. Only the low-order coefficients are
/// expanded; the window widens until a nonzero coefficient appears or the
/// full composition has been examined.
Order order_along(const Polynomial& p, const Arc& arc);

/// Exact orders along an arc of every quantity entering the comparison of
/// K_m and T_m:
///   u = |f|, v = |x| * sum |kuo minor|, w = sum |thom minor|,
///   h = v + u, g = w + u.
/// Orders of sums of nonnegative terms are minima of the term orders.
struct OrderLedger {
  Order u, v, w, h, g;
  Order norm_x;
  std::vector<Order> components;   ///< ord f_j(lambda(t))
  std::vector<Order> kuo_minors;   ///< one per p-subset, MinorCache order
  std::vector<Order> thom_minors;  ///< one per (p+1)-subset; empty when n = p
};

OrderLedger ledger(const GermQuantities& q, const Arc& arc);

/// ord_t K_m(f, lambda(t)) = min(m*ord|x| + m*min ord minor, m*min ord f_j).
Order ord_kuo(const OrderLedger& l, unsigned m);
/// ord_t T_m(f, lambda(t)) = min(m*min ord thom minor, m*min ord f_j).
Order ord_thom(const OrderLedger& l, unsigned m);

Order ord_kuo(const GermQuantities& q, unsigned m, const Arc& arc);
Order ord_thom(const GermQuantities& q, unsigned m, const Arc& arc);

/// The factor C(t) with C(t)^m K_m(f, lambda(t)) > T_m(f, lambda(t)) along an
/// arc has no computational counterpart; only the raw orders are exposed.
Order auxiliary_factor_order(const OrderLedger& l, unsigned m) = delete;

struct ProbeRow {
  std::size_t arc_id = 0;
  Order kuo;
  Order thom;
  bool equal = false;
};

struct ProbeReport {
  unsigned m = 1;
  std::vector<ProbeRow> rows;  ///< in arc order
  std::size_t equal_count = 0;
  std::size_t mismatch_count = 0;
};

/// Compares ord K_m and ord T_m along each arc. The two are equivalent near
/// the origin for polynomial germs, so a mismatch means a bug.
ProbeReport equivalence_probe(const GermQuantities& q, std::span<const Arc> arcs, unsigned m);

/// "arc_id,ord_K,ord_T,equal" header plus one row per arc; "inf" for
/// infinite orders.
std::string probe_csv(const ProbeReport& report);

/// Bounds for random arcs.
struct ArcBounds {
  std::uint32_t max_exponent = 6;
  std::uint32_t max_terms = 3;
  std::int64_t coeff_bound = 5;
};

/// Deterministic random arc: each component has at most max_terms terms with
/// exponents in [1, max_exponent] and nonzero coefficients a/b with
/// |a|, b <= coeff_bound. At least one component is nonzero.
Arc arc_generator(std::uint64_t seed, std::size_t n, const ArcBounds& bounds = {});

}  // namespace kuothom
