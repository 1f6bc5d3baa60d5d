#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kuothom/germ.hpp"
#include "kuothom/lojasiewicz.hpp"
#include "kuothom/polynomial.hpp"
#include "kuothom/quantities.hpp"
#include "kuothom/rational.hpp"

namespace kuothom {

/// The closed germ Sigma at the origin: either a union of coordinate
/// subspaces, each given by the (0-based) coordinates it retains, or the
/// common zero set of polynomials without constant term. The subspace with
/// no retained coordinates is {0}.
class SigmaSet {
 public:
  struct Subspaces {
    std::vector<std::vector<std::size_t>> retained;
    friend bool operator==(const Subspaces&, const Subspaces&) = default;
  };
  struct Algebraic {
    std::vector<Polynomial> generators;
    friend bool operator==(const Algebraic&, const Algebraic&) = default;
  };

  /// Throws std::invalid_argument for an empty list or an index >= n.
  /// Index lists are sorted and deduplicated.
  static SigmaSet subspaces(std::size_t n, std::vector<std::vector<std::size_t>> retained);
  /// Throws std::invalid_argument for an empty list, a generator with a
  /// constant term, or a variable-count mismatch.
  static SigmaSet algebraic(std::size_t n, std::vector<Polynomial> generators);
  static SigmaSet origin(std::size_t n) { return subspaces(n, {{}}); }

  std::size_t n() const { return n_; }
  const std::variant<Subspaces, Algebraic>& variant() const { return variant_; }
  bool is_subspaces() const { return std::holds_alternative<Subspaces>(variant_); }
  /// True when Sigma = {0}.
  bool is_origin() const;

  friend bool operator==(const SigmaSet&, const SigmaSet&) = default;

 private:
  SigmaSet(std::size_t n, std::variant<Subspaces, Algebraic> v) : n_(n), variant_(std::move(v)) {}

  std::size_t n_;
  std::variant<Subspaces, Algebraic> variant_;
};

/// Text forms: "subspaces: [x1], [x1,x2]" (an empty "[]" is {0}) or
/// "zeros: x2; x3". Throws ParseError.
SigmaSet parse_sigma(std::string_view text, std::size_t n, std::size_t line = 1);
std::string to_string(const SigmaSet& sigma);

/// d(x, Sigma). Exact for coordinate subspaces: the smallest norm of the
/// coordinates a subspace drops. For algebraic sets it is an upper bound:
/// Gauss-Newton projection onto the zero set from several starts, followed
/// by descent along the tangent space, accurate to about kProjectionTolerance
/// relative to |x|; the origin always bounds it by |x|.
class SigmaDistance {
 public:
  static constexpr double kProjectionTolerance = 1e-8;

  explicit SigmaDistance(SigmaSet sigma);

  const SigmaSet& sigma() const { return sigma_; }
  double operator()(std::span<const double> x) const;
  /// "exact" or "projection".
  std::string method() const;

  /// Algebraic variant only: a point of the zero set reached from y by
  /// Gauss-Newton steps, or nothing when the iteration stalls off the set.
  std::optional<std::vector<double>> project(std::span<const double> y) const;
  /// Algebraic variant only: orthonormal basis of the span of the generator
  /// gradients at y (empty when they all vanish).
  std::vector<std::vector<double>> normal_basis(std::span<const double> y) const;

 private:
  double projected_distance(std::span<const double> x) const;

  SigmaSet sigma_;
  std::vector<FloatPolynomial> generators_;
  std::vector<std::vector<FloatPolynomial>> gradients_;
};

inline double distance(const SigmaSet& sigma, std::span<const double> x) {
  return SigmaDistance(sigma)(x);
}

/// Sampling of distance shells {d(x, Sigma) = d_k, |x| < ball} with
/// d_k = (ball / 2) * 2^-k, k = 0..bands-1.
struct RelativeConfig {
  double ball = 0.05;
  unsigned bands = 8;
  unsigned samples = 512;   ///< candidate points per shell
  unsigned multistart = 8;  ///< descents per shell (coordinate subspaces)
  double tolerance = 0.1;
  std::uint64_t seed = 0;
};

std::vector<double> shell_distances(const RelativeConfig& config);

/// Candidate points of one shell. For coordinate subspaces every point lies
/// exactly at distance d; for algebraic sets the points are offsets from
/// projected anchors along the normal space, kept when their measured
/// distance lies within a factor sqrt(2) of d.
std::vector<std::vector<double>> shell_points(const SigmaDistance& sigma, double d,
                                              const RelativeConfig& config, std::size_t band);

/// Per-shell minima of F, laid out as a RadialScan with the shell distances
/// as radii. Coordinate-subspace shells are refined by pattern search within
/// the shell.
RadialScan shell_scan(const SigmaDistance& sigma, const SphereFunction& F, const RelativeConfig& config);

/// I^T_r(m): T_m(f,x) >= c d(x,Sigma)^(rm); I^K_r(m) likewise with K_m.
struct RelativeVerdict {
  Quantity which = Quantity::Kuo;
  unsigned r = 1;
  unsigned m = 1;
  ConditionVerdict verdict;
  RadialScan scan;
};

inline constexpr const char* kRelativeCaveat =
    "numerical evidence, not proof; c and the neighbourhood size come from a single fit";

std::string relative_condition_name(Quantity which, unsigned r, unsigned m);

/// Throws PreconditionError when Sigma contains a whole neighbourhood of 0.
RelativeVerdict check_relative(const GermQuantities& q, Quantity which, unsigned r, unsigned m,
                               const SigmaDistance& sigma, const RelativeConfig& config = {});

/// j^r f = j^r g along Sigma: every partial derivative of order <= r of
/// every component of g - f vanishes on each subspace. Throws
/// UnsupportedError for algebraic Sigma and std::invalid_argument for
/// mismatched germs.
bool jets_equal_on_sigma(const MapGerm& f, const MapGerm& g, unsigned r, const SigmaSet& sigma);

/// f + t (g - f). Throws std::invalid_argument unless n, p agree and
/// 0 <= t <= 1.
MapGerm deformation(const MapGerm& f, const MapGerm& g, const Rational& t);

struct CompatibilityRow {
  Rational t;
  RelativeVerdict result;
};

struct CompatibilityReport {
  std::vector<CompatibilityRow> rows;
  bool consistent = true;  ///< every verdict equals the one at the first t
};

/// Runs check_relative on f_t for each t. Throws PreconditionError, before
/// any scan, when the r-jets of f and g differ on Sigma.
CompatibilityReport check_compatibility(const MapGerm& f, const MapGerm& g, unsigned r, unsigned m,
                                        Quantity which, const SigmaDistance& sigma,
                                        std::span<const Rational> t_grid,
                                        const RelativeConfig& config = {});

struct GeneratorProbe {
  std::size_t index = 0;
  bool skipped = false;
  std::string diagnostic;
  std::optional<ExponentEstimate> estimate;
  std::optional<unsigned> alpha;  ///< smallest integer exponent supported by the fit
  bool holds = false;
};

struct EllipticityReport {
  std::vector<GeneratorProbe> generators;
  unsigned alpha_max = 0;
  bool holds = false;
};

/// Estimates, per generator phi, the exponent of min |phi| over distance
/// shells; Sigma-elliptic evidence when some generator satisfies
/// |phi| >= C d^alpha with alpha <= alpha_max. Zero generators are skipped.
EllipticityReport sigma_elliptic_probe(std::span<const Polynomial> generators, const SigmaDistance& sigma,
                                       unsigned alpha_max, const RelativeConfig& config = {});

}  // namespace kuothom
