#include "kuothom/lojasiewicz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kuothom/errors.hpp"
#include "kuothom/pattern_search.hpp"
#include "kuothom/random.hpp"

namespace kuothom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasibleStep = 1e-12;
constexpr std::size_t kMaxDescentEvaluations = 20000;

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base), f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

constexpr std::uint64_t kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                                     59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113};

/// Candidate unit directions, flattened, plus the nominal angular spacing.
struct DirectionSet {
  std::size_t n = 0;
  std::vector<double> flat;
  double spacing = 0;

  std::size_t size() const { return flat.size() / n; }
  std::span<const double> operator[](std::size_t k) const { return {flat.data() + k * n, n}; }
  void add(std::span<const double> u) { flat.insert(flat.end(), u.begin(), u.end()); }
};

DirectionSet sphere_directions(std::size_t n, const SphereStrategy& s) {
  using std::numbers::pi;
  DirectionSet d;
  d.n = n;
  if (n == 1) {
    d.flat = {1.0, -1.0};
    d.spacing = pi;
    return d;
  }
  if (s.grid < 4) throw std::invalid_argument("sphere grid needs at least 4 points per angle");
  if (n == 2) {
    for (unsigned j = 0; j < s.grid; ++j) {
      const double a = 2 * pi * j / s.grid;
      d.add(std::vector<double>{std::cos(a), std::sin(a)});
    }
    d.spacing = 2 * pi / s.grid;
    return d;
  }
  if (n == 3) {
    d.add(std::vector<double>{0, 0, 1});
    for (unsigned i = 1; i < s.grid; ++i) {
      const double theta = pi * i / s.grid;
      for (unsigned j = 0; j < s.grid; ++j) {
        const double phi = 2 * pi * j / s.grid;
        d.add(std::vector<double>{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                                  std::cos(theta)});
      }
    }
    d.add(std::vector<double>{0, 0, -1});
    d.spacing = 2 * pi / s.grid;
    return d;
  }

  // Halton points pushed through Box-Muller give quasi-random Gaussian
  // vectors; a seeded shift modulo 1 decorrelates runs with different seeds.
  const std::size_t dims = 2 * ((n + 1) / 2);
  if (dims > std::size(kPrimes)) throw std::invalid_argument("dimension too large for direction set");
  RandomStream rng(s.seed, "sphere-directions");
  std::vector<double> shift(dims);
  for (auto& x : shift) x = rng.uniform01();
  std::vector<double> u(n), g(dims);
  for (unsigned k = 0; k < s.directions; ++k) {
    for (std::size_t j = 0; j < dims; j += 2) {
      double a = radical_inverse(k + 1, kPrimes[j]) + shift[j];
      double b = radical_inverse(k + 1, kPrimes[j + 1]) + shift[j + 1];
      a -= std::floor(a);
      b -= std::floor(b);
      const double radius = std::sqrt(-2.0 * std::log(1.0 - a));
      g[j] = radius * std::cos(2 * pi * b);
      g[j + 1] = radius * std::sin(2 * pi * b);
    }
    double norm = 0;
    for (std::size_t i = 0; i < n; ++i) norm += g[i] * g[i];
    norm = std::sqrt(norm);
    if (norm == 0) continue;
    for (std::size_t i = 0; i < n; ++i) u[i] = g[i] / norm;
    d.add(u);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (double sign : {1.0, -1.0}) {
      std::fill(u.begin(), u.end(), 0.0);
      u[i] = sign;
      d.add(u);
    }
  // Typical nearest-neighbour angle of N points on S^(n-1).
  d.spacing = std::min(0.5, std::pow(static_cast<double>(d.size()), -1.0 / static_cast<double>(n - 1)));
  return d;
}

class SphereProbe {
 public:
  /// Evaluates F on admissible points and +inf elsewhere; with
  /// `violation_only`, evaluates the constraint instead.
  SphereProbe(std::size_t n, const SphereFunction& F, double eps, const SphereConstraint& constraint,
              bool violation_only = false)
      : F_(F), constraint_(constraint), violation_only_(violation_only), eps_(eps), x_(n) {}

  double operator()(std::span<const double> u) {
    for (std::size_t i = 0; i < x_.size(); ++i) x_[i] = eps_ * u[i];
    if (violation_only_) return constraint_(x_);
    if (constraint_ && constraint_(x_) > 0) return kInf;
    ++evaluations;
    const double v = F_(x_);
    if (std::isnan(v) || v < 0) throw std::domain_error("sphere function must be nonnegative");
    return v;
  }

  std::size_t evaluations = 0;

 private:
  const SphereFunction& F_;
  const SphereConstraint& constraint_;
  bool violation_only_;
  double eps_;
  std::vector<double> x_;
};

bool normalize(std::vector<double>& u) {
  double s = 0;
  for (double x : u) s += x * x;
  if (s == 0) return false;
  s = std::sqrt(s);
  for (double& x : u) x /= s;
  return true;
}

/// Indices of the lowest finite values whose directions are pairwise a few
/// grid steps apart, best first.
std::vector<std::size_t> separated_best(const DirectionSet& dirs, const std::vector<double>& values,
                                        unsigned count) {
  std::vector<std::size_t> order;
  order.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k)
    if (values[k] < kInf) order.push_back(k);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] != values[b] ? values[a] < values[b] : a < b;
  });
  const double min_cos = std::cos(std::min(4 * dirs.spacing, std::numbers::pi / 2));
  std::vector<std::size_t> chosen;
  for (std::size_t k : order) {
    if (chosen.size() >= std::max(1u, count)) break;
    bool separated = true;
    for (std::size_t s : chosen) {
      double dot = 0;
      for (std::size_t i = 0; i < dirs.n; ++i) dot += dirs[k][i] * dirs[s][i];
      if (dot > min_cos) {
        separated = false;
        break;
      }
    }
    if (separated) chosen.push_back(k);
  }
  return chosen;
}

}  // namespace

SphereMin min_on_sphere(std::size_t n, const SphereFunction& F, double eps,
                        const SphereStrategy& strategy, const SphereConstraint& constraint) {
  if (n == 0) throw std::invalid_argument("sphere dimension must be positive");
  if (!(eps > 0) || !std::isfinite(eps)) throw std::invalid_argument("sphere radius must be positive");

  const DirectionSet dirs = sphere_directions(n, strategy);
  SphereProbe probe(n, F, eps, constraint);

  std::vector<double> values(dirs.size());
  for (std::size_t k = 0; k < dirs.size(); ++k) values[k] = probe(dirs[k]);

  std::vector<std::vector<double>> starts;
  std::vector<double> start_values;
  for (std::size_t k : separated_best(dirs, values, strategy.multistart)) {
    starts.emplace_back(dirs[k].begin(), dirs[k].end());
    start_values.push_back(values[k]);
  }
  if (starts.empty() && constraint && n > 1) {
    // Thin admissible regions can fall between grid points: walk toward
    // them from the least-violating candidates.
    SphereProbe violation(n, F, eps, constraint, true);
    const Objective violation_of = [&violation](const std::vector<double>& u) { return violation(u); };
    std::vector<double> c(dirs.size());
    for (std::size_t k = 0; k < dirs.size(); ++k) c[k] = violation(dirs[k]);
    for (std::size_t k : separated_best(dirs, c, strategy.multistart)) {
      std::vector<double> u(dirs[k].begin(), dirs[k].end());
      double step = dirs.spacing;
      std::size_t budget = kMaxDescentEvaluations;
      if (pattern_search(u, c[k], step, kFeasibleStep, budget, violation_of, normalize) > 0) continue;
      const double v = probe(u);
      if (v < kInf) {
        starts.push_back(std::move(u));
        start_values.push_back(v);
      }
    }
  }

  SphereMin out;
  if (starts.empty()) {
    out.value = kInf;
    out.empty = true;
    out.evaluations = probe.evaluations;
    return out;
  }

  const Objective on_sphere = [&probe](const std::vector<double>& u) { return probe(u); };
  out.value = kInf;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    std::vector<double>& u = starts[s];
    double value = start_values[s];
    bool vanishing = value == 0;
    if (n > 1 && !vanishing) {
      const Descent d = descend_nonnegative(u, value, dirs.spacing, on_sphere, normalize);
      value = d.value;
      vanishing = d.vanishing;
    }
    if (vanishing || value < out.value) {
      out.value = value;
      out.argmin.resize(n);
      for (std::size_t i = 0; i < n; ++i) out.argmin[i] = eps * u[i];
    }
    if (vanishing) {
      out.vanishing = true;
      out.value = 0;
      break;
    }
  }
  out.evaluations = probe.evaluations;
  return out;
}

std::vector<double> default_radii() {
  std::vector<double> r;
  for (int k = 0; k < 8; ++k) r.push_back(0.1 * std::ldexp(1.0, -k));
  return r;
}

RadialScan radial_scan(std::size_t n, const SphereFunction& F, std::span<const double> radii,
                       const SphereStrategy& strategy, const SphereConstraint& constraint) {
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0)) throw std::invalid_argument("radii must be positive");
    if (k > 0 && !(radii[k] < radii[k - 1])) throw std::invalid_argument("radii must be strictly decreasing");
  }
  RadialScan scan;
  scan.radii.assign(radii.begin(), radii.end());
  scan.strategy = strategy;
  for (double eps : radii) {
    SphereMin m = min_on_sphere(n, F, eps, strategy, constraint);
    scan.min_values.push_back(m.value);
    scan.vanishing.push_back(m.vanishing);
    scan.empty.push_back(m.empty);
    scan.argmins.push_back(std::move(m.argmin));
    scan.evaluations += m.evaluations;
  }
  return scan;
}

std::optional<ExponentEstimate> fit_power_law(std::span<const double> radii,
                                              std::span<const double> values) {
  if (radii.size() != values.size()) throw std::invalid_argument("radii and values differ in length");
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (radii[k] > 0 && values[k] > 0 && std::isfinite(values[k])) {
      xs.push_back(std::log(radii[k]));
      ys.push_back(std::log(values[k]));
    }
  }
  if (xs.size() < 2) return std::nullopt;
  const double count = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= count;
  my /= count;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  if (sxx == 0) return std::nullopt;
  ExponentEstimate e;
  e.slope = sxy / sxx;
  e.log_constant = my - e.slope * mx;
  double ss_res = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (e.log_constant + e.slope * xs[k]);
    ss_res += r * r;
  }
  e.r_squared = syy > 0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  e.n_points = xs.size();
  return e;
}

std::optional<ExponentEstimate> estimate_exponent(const RadialScan& scan) {
  if (scan.radii.size() < 4) throw PreconditionError("exponent estimation needs at least 4 radii");
  return fit_power_law(scan.radii, scan.min_values);
}

ConditionVerdict verdict_from_scan(std::string condition, const RadialScan& scan, double target,
                                   double tolerance) {
  ConditionVerdict v;
  v.condition = std::move(condition);
  v.target = target;
  v.tolerance = tolerance;
  const std::size_t total = scan.radii.size();
  const auto empty = static_cast<std::size_t>(std::count(scan.empty.begin(), scan.empty.end(), true));
  const auto zero =
      static_cast<std::size_t>(std::count(scan.vanishing.begin(), scan.vanishing.end(), true));
  if (total > 0 && empty == total) {
    v.holds = true;
    v.diagnostic = "admissible region empty on every sphere; holds vacuously";
    return v;
  }
  v.estimate = estimate_exponent(scan);
  if (2 * zero > total) {
    v.holds = false;
    v.diagnostic = "minimum vanishes on " + std::to_string(zero) + " of " + std::to_string(total) +
                   " spheres";
    return v;
  }
  if (!v.estimate) {
    v.holds = false;
    v.diagnostic = "fewer than two positive minima; exponent undefined";
    return v;
  }
  v.holds = v.estimate->slope <= target + tolerance;
  if (empty > 0) v.diagnostic = std::to_string(empty) + " spheres had no admissible point";
  return v;
}

namespace {

void require_r(unsigned r) {
  if (r == 0) throw std::invalid_argument("r must be at least 1");
}

}  // namespace

RadialScan scan_quantity(const GermQuantities& q, Quantity which, unsigned m, const ScanConfig& config) {
  if (m == 0) throw std::invalid_argument("m must be positive");
  SphereFunction F;
  if (which == Quantity::Kuo) F = [&q, m](std::span<const double> x) { return q.kuo(m, x); };
  else F = [&q, m](std::span<const double> x) { return q.thom(m, x); };
  return radial_scan(q.germ().n(), F, config.radii, config.strategy);
}

namespace {

RadialScan gradient_scan(const GermQuantities& q, const ScanConfig& config) {
  if (q.germ().p() != 1) throw PreconditionError("Kuiper-Kuo condition requires p = 1");
  return radial_scan(
      q.germ().n(), [&q](std::span<const double> x) { return q.gradient_norm(x); }, config.radii,
      config.strategy);
}

}  // namespace

ConditionVerdict check_kuiper_kuo(const GermQuantities& q, unsigned r, const ScanConfig& config) {
  require_r(r);
  return verdict_from_scan("kuiper-kuo", gradient_scan(q, config), r - 1.0, config.tolerance);
}

bool horn_membership(const GermQuantities& q, unsigned r, double wbar, std::span<const double> x) {
  double sq = 0;
  for (double xi : x) sq += xi * xi;
  return q.map_norm(x) <= wbar * int_pow(std::sqrt(sq), r);
}

bool horn_membership(const MapGerm& f, unsigned r, double wbar, std::span<const double> x) {
  if (x.size() != f.n()) throw std::invalid_argument("point has the wrong dimension");
  double fsq = 0, sq = 0;
  for (const auto& c : f.components()) {
    const double v = c.evaluate(x);
    fsq += v * v;
  }
  for (double xi : x) sq += xi * xi;
  return std::sqrt(fsq) <= wbar * int_pow(std::sqrt(sq), r);
}

RadialScan horn_scan(const GermQuantities& q, unsigned r, double wbar, const ScanConfig& config) {
  require_r(r);
  if (!(wbar > 0)) throw std::invalid_argument("horn width must be positive");
  SphereFunction F;
  if (q.germ().p() == 1) F = [&q](std::span<const double> x) { return q.gradient_norm(x); };
  else F = [&q](std::span<const double> x) { return q.kuo_minor_sum(x); };
  const SphereConstraint in_horn = [&q, r, wbar](std::span<const double> x) {
    double sq = 0;
    for (double xi : x) sq += xi * xi;
    return q.map_norm(x) - wbar * int_pow(std::sqrt(sq), r);
  };
  return radial_scan(q.germ().n(), F, config.radii, config.strategy, in_horn);
}

ConditionVerdict check_kuo(const GermQuantities& q, unsigned r, double wbar, const ScanConfig& config) {
  return verdict_from_scan("kuo", horn_scan(q, r, wbar, config), r - 1.0, config.tolerance);
}

ConditionVerdict check_condition_ktilde(const GermQuantities& q, unsigned r, const ScanConfig& config) {
  require_r(r);
  return verdict_from_scan("ktilde", scan_quantity(q, Quantity::Kuo, 1, config), r, config.tolerance);
}

ConditionVerdict check_thom_inequality(const GermQuantities& q, unsigned r, const ScanConfig& config) {
  require_r(r);
  return verdict_from_scan("thom-inequality", scan_quantity(q, Quantity::Thom, 2, config), 2.0 * r,
                           config.tolerance);
}

std::optional<unsigned> sufficiency_degree_estimate(const GermQuantities& q, unsigned r_max,
                                                    const ScanConfig& config) {
  const RadialScan scan = gradient_scan(q, config);
  for (unsigned r = 1; r <= r_max; ++r)
    if (verdict_from_scan("kuiper-kuo", scan, r - 1.0, config.tolerance).holds) return r;
  return std::nullopt;
}

RatioBounds ratio_bounds(const GermQuantities& q, unsigned m, double radius, std::size_t samples,
                         std::uint64_t seed) {
  if (!(radius > 0)) throw std::invalid_argument("radius must be positive");
  const std::size_t n = q.germ().n();
  RandomStream rng(seed, "ratio-bounds");
  RatioBounds out;
  std::vector<double> x(n);
  for (std::size_t s = 0; s < samples; ++s) {
    double sq = 0;
    for (auto& xi : x) {
      xi = rng.normal();
      sq += xi * xi;
    }
    if (sq == 0) continue;
    const double scale = radius * std::pow(rng.uniform01(), 1.0 / static_cast<double>(n)) / std::sqrt(sq);
    for (auto& xi : x) xi *= scale;
    const double k = q.kuo(m, x), t = q.thom(m, x);
    if (!(k > 0) || !(t > 0)) continue;
    out.kuo_over_thom = std::max(out.kuo_over_thom, k / t);
    out.thom_over_kuo = std::max(out.thom_over_kuo, t / k);
    ++out.counted;
  }
  return out;
}

std::string scan_csv(const RadialScan& scan) {
  std::string out = "radius,min_value\n";
  char buf[64];
  for (std::size_t k = 0; k < scan.radii.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.12g,", scan.radii[k]);
    out += buf;
    if (std::isinf(scan.min_values[k])) out += "inf";
    else {
      std::snprintf(buf, sizeof buf, "%.12g", scan.min_values[k]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace kuothom
