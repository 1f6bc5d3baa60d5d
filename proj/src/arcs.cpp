#include "kuothom/arcs.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "kuothom/errors.hpp"
#include "kuothom/random.hpp"
#include "kuothom/text.hpp"

namespace kuothom {

Arc::Arc(std::vector<UniPoly> components) : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("arc needs at least one component");
  bool any_nonzero = false;
  for (const auto& c : components_) {
    if (!is_zero(c.coefficient(0)))
      throw std::invalid_argument("arc component " + to_string(c) + " does not vanish at t = 0");
    any_nonzero = any_nonzero || !c.is_zero();
  }
  if (!any_nonzero) throw std::invalid_argument("arc is identically zero");
}

Order Arc::order() const {
  Order o = Order::infinity();
  for (const auto& c : components_) o = std::min(o, c.order());
  return o;
}

std::vector<double> Arc::at(double t) const {
  std::vector<double> x;
  x.reserve(components_.size());
  for (const auto& c : components_) x.push_back(c.evaluate(t));
  return x;
}

Arc parse_arc(std::string_view text, std::size_t line) {
  std::vector<UniPoly> comps;
  std::size_t start = 0;
  while (true) {
    const auto semi = text.find(';', start);
    const auto piece = text.substr(start, semi == std::string_view::npos ? semi : semi - start);
    comps.push_back(parse_unipoly(piece, line, start));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  try {
    return Arc(std::move(comps));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), line, 1);
  }
}

std::vector<Arc> parse_arcs(std::string_view text) {
  std::vector<Arc> arcs;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos)
      arcs.push_back(parse_arc(line, line_no));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return arcs;
}

std::string to_string(const Arc& arc) {
  std::string out;
  for (std::size_t i = 0; i < arc.size(); ++i) {
    if (i) out += "; ";
    out += to_string(arc[i]);
  }
  return out;
}

Order order_along(const Polynomial& p, const Arc& arc) {
  if (arc.size() != p.nvars())
    throw std::invalid_argument("arc has " + std::to_string(arc.size()) +
                                " components, polynomial has " + std::to_string(p.nvars()) +
                                " variables");
  // Every term contributes at order >= sum e_i * ord(lambda_i); below the
  // minimum of these nothing survives.
  Order lower = Order::infinity();
  std::size_t full = 0;
  for (const auto& [m, c] : p.terms()) {
    Order o(0);
    std::size_t deg = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      o = o + std::uint64_t{m[i]} * arc[i].order();
      deg += std::size_t{m[i]} * arc[i].degree();
    }
    lower = std::min(lower, o);
    full = std::max(full, deg);
  }
  if (lower.is_infinite()) return Order::infinity();

  std::size_t window = 8;
  while (true) {
    const std::size_t top = std::min<std::size_t>(lower.value() + window, full);
    const UniPoly q = compose_truncated(p, arc.components(), top);
    if (!q.is_zero()) return q.order();
    if (top >= full) return Order::infinity();
    window *= 2;
  }
}

namespace {

Order min_of(const std::vector<Order>& v) {
  Order o = Order::infinity();
  for (auto x : v) o = std::min(o, x);
  return o;
}

}  // namespace

OrderLedger ledger(const GermQuantities& q, const Arc& arc) {
  const auto& f = q.germ();
  if (arc.size() != f.n())
    throw std::invalid_argument("arc dimension " + std::to_string(arc.size()) +
                                " does not match germ dimension " + std::to_string(f.n()));
  OrderLedger l;
  l.norm_x = arc.order();
  for (const auto& c : f.components()) l.components.push_back(order_along(c, arc));
  for (const auto& mnr : q.minors().kuo()) l.kuo_minors.push_back(order_along(mnr.value, arc));
  for (const auto& mnr : q.minors().thom()) l.thom_minors.push_back(order_along(mnr.value, arc));
  l.u = min_of(l.components);
  l.v = l.norm_x + min_of(l.kuo_minors);
  l.w = min_of(l.thom_minors);
  l.h = std::min(l.v, l.u);
  l.g = std::min(l.w, l.u);
  return l;
}

Order ord_kuo(const OrderLedger& l, unsigned m) {
  return std::min(std::uint64_t{m} * l.norm_x + std::uint64_t{m} * min_of(l.kuo_minors),
                  std::uint64_t{m} * l.u);
}

Order ord_thom(const OrderLedger& l, unsigned m) {
  return std::min(std::uint64_t{m} * min_of(l.thom_minors), std::uint64_t{m} * l.u);
}

Order ord_kuo(const GermQuantities& q, unsigned m, const Arc& arc) {
  return ord_kuo(ledger(q, arc), m);
}

Order ord_thom(const GermQuantities& q, unsigned m, const Arc& arc) {
  return ord_thom(ledger(q, arc), m);
}

ProbeReport equivalence_probe(const GermQuantities& q, std::span<const Arc> arcs, unsigned m) {
  if (m == 0) throw std::invalid_argument("m must be positive");
  ProbeReport report;
  report.m = m;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const auto l = ledger(q, arcs[i]);
    ProbeRow row{i, ord_kuo(l, m), ord_thom(l, m), false};
    row.equal = row.kuo == row.thom;
    (row.equal ? report.equal_count : report.mismatch_count) += 1;
    report.rows.push_back(row);
  }
  return report;
}

std::string probe_csv(const ProbeReport& report) {
  std::ostringstream out;
  out << "arc_id,ord_K,ord_T,equal\n";
  for (const auto& r : report.rows)
    out << r.arc_id << ',' << r.kuo.to_string() << ',' << r.thom.to_string() << ','
        << (r.equal ? "true" : "false") << '\n';
  return out.str();
}

Arc arc_generator(std::uint64_t seed, std::size_t n, const ArcBounds& bounds) {
  if (n == 0) throw std::invalid_argument("arc_generator: n must be positive");
  if (bounds.max_exponent < 1) throw std::invalid_argument("arc_generator: max_exponent < 1");
  if (bounds.max_terms < 1) throw std::invalid_argument("arc_generator: max_terms < 1");
  if (bounds.coeff_bound < 1) throw std::invalid_argument("arc_generator: coeff_bound < 1");
  RandomStream rng(seed, "arc");
  while (true) {
    std::vector<UniPoly> comps;
    for (std::size_t i = 0; i < n; ++i) {
      const auto terms = rng.uniform_int(0, bounds.max_terms);
      std::vector<Rational> coeffs(bounds.max_exponent + 1, Rational(0));
      for (std::int64_t k = 0; k < terms; ++k) {
        const auto e = rng.uniform_int(1, bounds.max_exponent);
        std::int64_t num = 0;
        while (num == 0) num = rng.uniform_int(-bounds.coeff_bound, bounds.coeff_bound);
        const auto den = rng.uniform_int(1, bounds.coeff_bound);
        coeffs[e] = make_rational(num, den);
      }
      comps.emplace_back(std::move(coeffs));
    }
    if (std::any_of(comps.begin(), comps.end(), [](const UniPoly& c) { return !c.is_zero(); }))
      return Arc(std::move(comps));
  }
}

}  // namespace kuothom
