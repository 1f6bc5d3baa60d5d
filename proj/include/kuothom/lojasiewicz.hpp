#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kuothom/germ.hpp"
#include "kuothom/quantities.hpp"

namespace kuothom {

/// Nonnegative function sampled on spheres around the origin.
using SphereFunction = std::function<double(std::span<const double>)>;
/// Admissible region {c(x) <= 0}; larger values mean further outside.
using SphereConstraint = std::function<double(std::span<const double>)>;

/// How a sphere is searched: a deterministic angular grid (n <= 3, `grid`
/// points per angle) or `directions` quasi-random directions (n >= 4),
/// followed by `multistart` pattern-search descents from the best, mutually
/// separated candidates. The seed only affects the n >= 4 direction set.
/// Under a constraint, only admissible points count; when no candidate is
/// admissible, descents on the constraint itself look for admissible starts.
struct SphereStrategy {
  unsigned grid = 720;
  unsigned multistart = 16;
  unsigned directions = 4096;
  std::uint64_t seed = 0;
};

struct SphereMin {
  double value = 0;      ///< 0 when vanishing; +inf when empty
  bool vanishing = false;
  bool empty = false;    ///< no admissible point on the sphere
  std::vector<double> argmin;
  std::size_t evaluations = 0;
};

/// Estimated minimum of F over {|x| = eps}. A minimum is reported as
/// vanishing when F is exactly zero there, or when refining the descent from
/// a 1e-6 to a 1e-12 angular step still shrinks the value by more than a
/// factor 1000 (F keeps decreasing toward a zero). Throws
/// std::invalid_argument for eps <= 0 or n = 0.
SphereMin min_on_sphere(std::size_t n, const SphereFunction& F, double eps,
                        const SphereStrategy& strategy = {}, const SphereConstraint& constraint = {});

/// 0.1 * 2^-k for k = 0..7.
std::vector<double> default_radii();

struct RadialScan {
  std::vector<double> radii;       ///< strictly decreasing
  std::vector<double> min_values;  ///< one per radius
  std::vector<bool> vanishing;
  std::vector<bool> empty;
  std::vector<std::vector<double>> argmins;
  SphereStrategy strategy;
  std::size_t evaluations = 0;
};

/// Runs min_on_sphere on every radius. Throws std::invalid_argument unless
/// the radii are positive and strictly decreasing.
RadialScan radial_scan(std::size_t n, const SphereFunction& F, std::span<const double> radii,
                       const SphereStrategy& strategy = {}, const SphereConstraint& constraint = {});

/// Least-squares fit of log min = log_constant + slope * log eps.
struct ExponentEstimate {
  double slope = 0;
  double log_constant = 0;
  double r_squared = 0;
  std::size_t n_points = 0;
};

/// Fits over the pairs with a finite positive value. Returns nothing when
/// fewer than two such pairs exist.
std::optional<ExponentEstimate> fit_power_law(std::span<const double> radii,
                                              std::span<const double> values);

/// Fit of a scan. Throws PreconditionError for fewer than 4 radii.
std::optional<ExponentEstimate> estimate_exponent(const RadialScan& scan);

inline constexpr const char* kNumericalCaveat = "numerical evidence, not proof";

struct ConditionVerdict {
  std::string condition;
  bool holds = false;
  std::optional<ExponentEstimate> estimate;
  double target = 0;     ///< target exponent
  double tolerance = 0;
  std::string caveat = kNumericalCaveat;
  std::string diagnostic;  ///< empty unless the verdict needs explanation
};

struct ScanConfig {
  std::vector<double> radii = default_radii();
  SphereStrategy strategy;
  double tolerance = 0.1;
};

/// holds = slope <= target + tolerance. Fails when more than half the
/// spheres give a vanishing minimum, or when too few positive minima remain
/// to fit. Holds vacuously, with a diagnostic, when every sphere is empty.
ConditionVerdict verdict_from_scan(std::string condition, const RadialScan& scan, double target,
                                   double tolerance);

enum class Quantity { Kuo, Thom };

/// Sphere scan of K_m or T_m.
RadialScan scan_quantity(const GermQuantities& q, Quantity which, unsigned m,
                         const ScanConfig& config = {});

/// |grad f| >= C |x|^(r-1). Throws PreconditionError unless p = 1.
ConditionVerdict check_kuiper_kuo(const GermQuantities& q, unsigned r, const ScanConfig& config = {});

/// |f(x)| <= wbar * |x|^r.
bool horn_membership(const GermQuantities& q, unsigned r, double wbar, std::span<const double> x);
bool horn_membership(const MapGerm& f, unsigned r, double wbar, std::span<const double> x);

/// Kuiper-Kuo inequality restricted to the horn |f| <= wbar |x|^r; for p > 1
/// the gradient norm is replaced by the sum of |p-minors|. Throws
/// std::invalid_argument for wbar <= 0.
ConditionVerdict check_kuo(const GermQuantities& q, unsigned r, double wbar,
                           const ScanConfig& config = {});
RadialScan horn_scan(const GermQuantities& q, unsigned r, double wbar, const ScanConfig& config = {});

/// K_1(f,x) >= C |x|^r.
ConditionVerdict check_condition_ktilde(const GermQuantities& q, unsigned r,
                                        const ScanConfig& config = {});

/// T_2(f,x) >= K |x|^(2r).
ConditionVerdict check_thom_inequality(const GermQuantities& q, unsigned r,
                                       const ScanConfig& config = {});

/// Smallest r in 1..r_max for which the Kuiper-Kuo verdict holds. The
/// gradient scan is shared across r. Throws PreconditionError unless p = 1.
std::optional<unsigned> sufficiency_degree_estimate(const GermQuantities& q, unsigned r_max,
                                                    const ScanConfig& config = {});

/// Largest K_m/T_m and T_m/K_m over seeded sample points in the ball of the
/// given radius, counting only points where both are positive.
struct RatioBounds {
  double kuo_over_thom = 0;
  double thom_over_kuo = 0;
  std::size_t counted = 0;
};
RatioBounds ratio_bounds(const GermQuantities& q, unsigned m, double radius, std::size_t samples,
                         std::uint64_t seed);

/// "radius,min_value" header and one row per sphere; vanishing minima are 0
/// and empty spheres "inf".
std::string scan_csv(const RadialScan& scan);

}  // namespace kuothom
