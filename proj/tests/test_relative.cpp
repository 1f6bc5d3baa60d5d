#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <optional>

#include "kuothom/corpus.hpp"
#include "kuothom/errors.hpp"
#include "kuothom/relative.hpp"
#include "test_support.hpp"

using namespace kuothom;
using kuothom::testing::P;
using kuothom::testing::Q;

namespace {

MapGerm germ(std::vector<const char*> comps, std::size_t n = 2) {
  std::vector<Polynomial> ps;
  for (const char* c : comps) ps.push_back(P(c, n));
  return MapGerm(n, std::move(ps));
}

SigmaDistance x_axis() { return SigmaDistance(SigmaSet::subspaces(2, {{0}})); }

double norm(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

/// Distance from (a, b) to the parabola y = x^2 by dense sampling of the
/// foot parameter followed by golden-section refinement.
double parabola_distance(double a, double b) {
  auto sq = [&](double t) { return (a - t) * (a - t) + (b - t * t) * (b - t * t); };
  const double span = 2 * std::hypot(a, b) + 1e-12;
  double best_t = 0, best = sq(0);
  for (int k = -20000; k <= 20000; ++k) {
    const double t = span * k / 20000.0;
    if (sq(t) < best) {
      best = sq(t);
      best_t = t;
    }
  }
  double lo = best_t - span / 20000.0, hi = best_t + span / 20000.0;
  const double phi = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 200; ++it) {
    const double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
    if (sq(m1) < sq(m2)) hi = m2;
    else lo = m1;
  }
  return std::sqrt(std::min(best, sq((lo + hi) / 2)));
}

}  // namespace

TEST(Sigma, SubspaceDistanceExamples) {
  const std::vector<double> x{3, 4};
  EXPECT_EQ(x_axis()(x), 4.0);
  EXPECT_EQ(distance(SigmaSet::subspaces(2, {{0}, {1}}), x), 3.0);
  EXPECT_EQ(distance(SigmaSet::origin(2), x), 5.0);
  const std::vector<double> bad{1, 2, 3};
  EXPECT_THROW(x_axis()(bad), std::invalid_argument);
}

TEST(Sigma, SubspaceDistanceIsLipschitz) {
  RandomStream rng(3, "lipschitz");
  const SigmaDistance d(SigmaSet::subspaces(4, {{0, 2}, {1}, {3}}));
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> x(4), y(4), diff(4);
    for (int i = 0; i < 4; ++i) {
      x[i] = rng.uniform(-1, 1);
      y[i] = rng.uniform(-1, 1);
      diff[i] = x[i] - y[i];
    }
    ASSERT_LE(std::fabs(d(x) - d(y)), norm(diff) + 1e-15);
  }
}

TEST(Sigma, Validation) {
  EXPECT_THROW(SigmaSet::subspaces(2, {}), std::invalid_argument);
  EXPECT_THROW(SigmaSet::subspaces(2, {{2}}), std::invalid_argument);
  EXPECT_THROW(SigmaSet::algebraic(2, {}), std::invalid_argument);
  EXPECT_THROW(SigmaSet::algebraic(2, {P("y + 1")}), std::invalid_argument);
  EXPECT_TRUE(SigmaSet::origin(3).is_origin());
  EXPECT_FALSE(SigmaSet::subspaces(2, {{0}}).is_origin());
}

TEST(Sigma, TextRoundTrip) {
  const auto a = parse_sigma("subspaces: [x1], [x1,x2]", 3);
  EXPECT_EQ(a, SigmaSet::subspaces(3, {{0}, {0, 1}}));
  EXPECT_EQ(parse_sigma(to_string(a), 3), a);
  const auto b = parse_sigma("# comment\nzeros: x2; x3\n", 3);
  EXPECT_EQ(b, SigmaSet::algebraic(3, {P("y", 3), P("z", 3)}));
  EXPECT_EQ(to_string(b), "zeros: y; z");
  EXPECT_EQ(parse_sigma(to_string(b), 3), b);
  EXPECT_TRUE(parse_sigma("subspaces: []", 2).is_origin());
  EXPECT_EQ(to_string(SigmaSet::origin(2)), "subspaces: []");
}

TEST(Sigma, ParseErrors) {
  try {
    parse_sigma("zeros: y; x + q", 2);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 15u);
  }
  try {
    parse_sigma("\nsubspaces: [x], (y)", 2);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 17u);
  }
  EXPECT_THROW(parse_sigma("subspaces: [x^2]", 2), ParseError);
  EXPECT_THROW(parse_sigma("zeros: y + 1", 2), ParseError);
  EXPECT_THROW(parse_sigma("lines: [x]", 2), ParseError);
  EXPECT_THROW(parse_sigma("", 2), ParseError);
  EXPECT_THROW(parse_sigma("zeros: y\nzeros: x", 2), ParseError);
}

TEST(AlgebraicDistance, LinearAndSingularGenerators) {
  const SigmaDistance line(SigmaSet::algebraic(2, {P("y")}));
  const SigmaDistance doubled(SigmaSet::algebraic(2, {P("y^2")}));
  const SigmaDistance axis3(SigmaSet::algebraic(3, {P("y", 3), P("z", 3)}));
  RandomStream rng(5, "algebraic-distance");
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<double> x{rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)};
    EXPECT_NEAR(line(x), std::fabs(x[1]), 1e-8 * norm(x));
    EXPECT_NEAR(doubled(x), std::fabs(x[1]), 1e-8 * norm(x));
    const std::vector<double> y{x[0], x[1], rng.uniform(-0.05, 0.05)};
    EXPECT_NEAR(axis3(y), std::hypot(y[1], y[2]), 1e-8 * norm(y));
  }
}

TEST(AlgebraicDistance, ParabolaMatchesBruteForce) {
  const SigmaDistance parabola(SigmaSet::algebraic(2, {P("y - x^2")}));
  RandomStream rng(6, "parabola");
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> x{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    const double oracle = parabola_distance(x[0], x[1]);
    const double d = parabola(x);
    EXPECT_GE(d, oracle - 1e-12);
    EXPECT_NEAR(d, oracle, 1e-8 * std::max(norm(x), 1e-3)) << x[0] << ", " << x[1];
  }
}

TEST(Shells, SubspacePointsSitAtExactDistance) {
  const SigmaDistance sigma(SigmaSet::subspaces(3, {{0}, {1, 2}}));
  RelativeConfig config;
  const auto ds = shell_distances(config);
  ASSERT_EQ(ds.size(), 8u);
  EXPECT_DOUBLE_EQ(ds[0], 0.025);
  for (std::size_t band = 0; band < ds.size(); ++band) {
    const auto pts = shell_points(sigma, ds[band], config, band);
    ASSERT_GE(pts.size(), 32u);
    for (const auto& x : pts) {
      EXPECT_NEAR(sigma(x), ds[band], 1e-12);
      EXPECT_LT(norm(x), config.ball);
    }
  }
}

TEST(Shells, AlgebraicPointsWithinBand) {
  const SigmaDistance sigma(SigmaSet::algebraic(2, {P("y - x^2")}));
  RelativeConfig config;
  config.samples = 64;
  const auto ds = shell_distances(config);
  for (std::size_t band = 0; band < ds.size(); band += 3) {
    const auto pts = shell_points(sigma, ds[band], config, band);
    ASSERT_FALSE(pts.empty());
    for (const auto& x : pts) {
      EXPECT_GE(sigma(x), ds[band] / std::sqrt(2.0) * (1 - 1e-9));
      EXPECT_LE(sigma(x), ds[band] * std::sqrt(2.0) * (1 + 1e-9));
    }
  }
}

TEST(Relative, SquareAlongAxisHoldsAtR2) {
  const GermQuantities q(germ({"y^2"}));
  const auto sigma = x_axis();
  const auto k = check_relative(q, Quantity::Kuo, 2, 1, sigma);
  EXPECT_TRUE(k.verdict.holds);
  EXPECT_EQ(k.verdict.condition, "I^K_2(1)");
  EXPECT_EQ(k.verdict.target, 2.0);
  const auto t = check_relative(q, Quantity::Thom, 2, 1, sigma);
  EXPECT_EQ(t.verdict.holds, k.verdict.holds);

  // K_1 = 2|y||x| + y^2 >= y^2 = d(x, Sigma)^2 at every sampled point.
  RelativeConfig config;
  const auto ds = shell_distances(config);
  for (std::size_t band = 0; band < ds.size(); ++band)
    for (const auto& x : shell_points(sigma, ds[band], config, band)) {
      const double d = sigma(x);
      ASSERT_GE(q.kuo(1, x), d * d);
    }
}

TEST(Relative, SquareAlongAxisFailsAtR1) {
  const GermQuantities q(germ({"y^2"}));
  const auto k = check_relative(q, Quantity::Kuo, 1, 1, x_axis());
  EXPECT_FALSE(k.verdict.holds);
  ASSERT_TRUE(k.verdict.estimate);
  EXPECT_NEAR(k.verdict.estimate->slope, 2.0, 0.05);
  // The minimum on each shell is attained over the origin: K_1(0, d) = 3 d^2.
  for (std::size_t band = 0; band < k.scan.radii.size(); ++band)
    EXPECT_NEAR(k.scan.min_values[band], 3 * k.scan.radii[band] * k.scan.radii[band],
                1e-9 * k.scan.radii[band] * k.scan.radii[band]);
}

TEST(Relative, OriginReducesToNonRelativeCheck) {
  for (const char* text : {"x^2 + y^2", "x - y^2", "x^3 - 3*x*y^2", "x*y"}) {
    const GermQuantities q(germ({text}));
    const auto rel = check_relative(q, Quantity::Kuo, 1, 1, SigmaDistance(SigmaSet::origin(2)));
    const auto plain = check_condition_ktilde(q, 1);
    ASSERT_TRUE(rel.verdict.estimate && plain.estimate) << text;
    EXPECT_NEAR(rel.verdict.estimate->slope, plain.estimate->slope, 0.1) << text;
  }
}

TEST(Relative, WholeSpaceSigmaRejected) {
  const GermQuantities q(germ({"y^2"}));
  EXPECT_THROW(check_relative(q, Quantity::Kuo, 1, 1, SigmaDistance(SigmaSet::subspaces(2, {{0, 1}}))),
               PreconditionError);
}

TEST(Relative, DeterministicGivenSeed) {
  const GermQuantities q(germ({"x*y^2 - y^3", "x^2*y"}, 2));
  RelativeConfig config;
  config.seed = 9;
  const auto a = check_relative(q, Quantity::Thom, 2, 1, x_axis(), config);
  const auto b = check_relative(q, Quantity::Thom, 2, 1, x_axis(), config);
  EXPECT_EQ(a.scan.min_values, b.scan.min_values);
  EXPECT_EQ(a.verdict.holds, b.verdict.holds);
}

// Corollary consistency and the m = 1 / m = 3 equivalence over corpus germs
// with Sigma the first coordinate axis.
class RelativeCorpus : public ::testing::TestWithParam<int> {};

TEST_P(RelativeCorpus, ThomAndKuoExponentsAgree) {
  // K and T are comparable up to constants, so their shell exponents agree
  // in the limit. At finite radii the fitted slopes still drift apart by a
  // few hundredths, so verdicts are compared only away from the threshold.
  const GermQuantities q(corpus_germ(77, static_cast<std::size_t>(GetParam())));
  const std::size_t n = q.germ().n();
  const SigmaDistance sigma(SigmaSet::subspaces(n, {{0}}));
  RelativeConfig config;
  config.samples = 256;
  for (unsigned m : {1u, 3u}) {
    const auto k = check_relative(q, Quantity::Kuo, 1, m, sigma, config);
    const auto t = check_relative(q, Quantity::Thom, 1, m, sigma, config);
    const auto ek = estimate_exponent(k.scan), et = estimate_exponent(t.scan);
    const auto clean = [](const RadialScan& scan, const std::optional<ExponentEstimate>& e) {
      return e && e->r_squared > 0.99 &&
             std::none_of(scan.vanishing.begin(), scan.vanishing.end(), [](bool v) { return v; });
    };
    const bool compare_slopes = clean(k.scan, ek) && clean(t.scan, et);
    if (compare_slopes) EXPECT_NEAR(ek->slope, et->slope, 0.25) << "m=" << m;
    for (unsigned r = 1; r <= 4; ++r) {
      const double target = static_cast<double>(r) * m;
      const auto near = [&](const std::optional<ExponentEstimate>& e) {
        return e && std::abs(e->slope - target - 0.1) < 0.2;
      };
      if (near(ek) || near(et)) continue;
      EXPECT_EQ(verdict_from_scan("k", k.scan, target, 0.1).holds,
                verdict_from_scan("t", t.scan, target, 0.1).holds)
          << "m=" << m << " r=" << r;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Corpus, RelativeCorpus, ::testing::Range(0, 24));

TEST(Jets, Examples) {
  const auto sigma = SigmaSet::subspaces(2, {{0}});
  const auto f = germ({"y^2"});
  EXPECT_TRUE(jets_equal_on_sigma(f, germ({"y^2 + x*y^3"}), 2, sigma));
  EXPECT_TRUE(jets_equal_on_sigma(f, f, 7, sigma));
  EXPECT_TRUE(jets_equal_on_sigma(f, f, 0, SigmaSet::origin(2)));
  EXPECT_FALSE(jets_equal_on_sigma(f, germ({"y^2 + x^2"}), 2, sigma));
  EXPECT_FALSE(jets_equal_on_sigma(f, germ({"y^2 + x*y^3"}), 3, sigma));
  EXPECT_THROW(jets_equal_on_sigma(f, f, 2, SigmaSet::algebraic(2, {P("y")})), UnsupportedError);
  EXPECT_THROW(jets_equal_on_sigma(f, germ({"y^2"}, 3), 2, sigma), std::invalid_argument);
}

TEST(Jets, MatchesMonomialCriterion) {
  // A partial of order <= r of x^e survives on a subspace exactly when the
  // dropped coordinates carry total degree <= r in e, so the jets agree iff
  // every monomial of g - f has dropped-degree > r.
  RandomStream rng(41, "jets");
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3;
    Polynomial base = kuothom::testing::random_polynomial(rng, n, 4, 3);
    base -= Polynomial::constant(n, base.constant_term());
    Polynomial diff = kuothom::testing::random_polynomial(rng, n, 6, 3);
    diff -= Polynomial::constant(n, diff.constant_term());
    if (base.is_zero()) base = Polynomial::variable(n, 0);
    std::vector<std::vector<std::size_t>> kept{{0}};
    if (trial % 2) kept.push_back({1, 2});
    const auto sigma = SigmaSet::subspaces(n, kept);
    const unsigned r = static_cast<unsigned>(rng.uniform_int(0, 4));
    bool expected = true;
    for (const auto& list : kept)
      for (const auto& [mono, c] : diff.terms()) {
        std::uint64_t dropped = 0;
        for (std::size_t i = 0; i < n; ++i)
          if (std::find(list.begin(), list.end(), i) == list.end()) dropped += mono[i];
        if (dropped <= r) expected = false;
      }
    const MapGerm f(n, {base}), g(n, {base + diff});
    ASSERT_EQ(jets_equal_on_sigma(f, g, r, sigma), expected) << to_string(diff) << " r=" << r;
  }
}

TEST(Deformation, Examples) {
  const auto f = germ({"y^2"}), g = germ({"y^2 + x*y^3"});
  EXPECT_EQ(deformation(f, g, Q(0)), f);
  EXPECT_EQ(deformation(f, g, Q(1)), g);
  EXPECT_EQ(deformation(f, g, Q(1, 2)), germ({"y^2 + 1/2*x*y^3"}));
  EXPECT_THROW(deformation(f, g, Q(3, 2)), std::invalid_argument);
  EXPECT_THROW(deformation(f, germ({"y", "x"}), Q(1, 2)), std::invalid_argument);
}

TEST(Compatibility, InvariantAlongDeformation) {
  const auto f = germ({"y^2"}), g = germ({"y^2 + x*y^3"});
  const std::vector<Rational> ts{Q(0), Q(1, 4), Q(1, 2), Q(3, 4), Q(1)};
  const auto report = check_compatibility(f, g, 2, 1, Quantity::Kuo, x_axis(), ts);
  ASSERT_EQ(report.rows.size(), 5u);
  EXPECT_TRUE(report.consistent);
  for (const auto& row : report.rows) EXPECT_TRUE(row.result.verdict.holds) << row.t;
}

TEST(Compatibility, SingleParameterMatchesDirectCheck) {
  const auto f = germ({"y^2"}), g = germ({"y^2 + x*y^3"});
  const std::vector<Rational> ts{Q(0)};
  const auto report = check_compatibility(f, g, 2, 1, Quantity::Kuo, x_axis(), ts);
  const auto direct = check_relative(GermQuantities(f), Quantity::Kuo, 2, 1, x_axis());
  ASSERT_EQ(report.rows.size(), 1u);
  EXPECT_EQ(report.rows[0].result.scan.min_values, direct.scan.min_values);
  EXPECT_EQ(report.rows[0].result.verdict.holds, direct.verdict.holds);
}

TEST(Compatibility, JetMismatchRejected) {
  const std::vector<Rational> ts{Q(0), Q(1)};
  EXPECT_THROW(check_compatibility(germ({"y^2"}), germ({"y^2 + x^2"}), 2, 1, Quantity::Kuo, x_axis(), ts),
               PreconditionError);
}

TEST(Ellipticity, Examples) {
  const auto sigma = x_axis();
  const auto gens = ideal_generators_kuo(germ({"y^2"}));
  const auto report = sigma_elliptic_probe(gens, sigma, 2);
  EXPECT_TRUE(report.holds);
  ASSERT_TRUE(report.generators[0].estimate);
  EXPECT_NEAR(report.generators[0].estimate->slope, 2.0, 0.05);
  EXPECT_EQ(report.generators[0].alpha, 2u);

  const std::vector<Polynomial> just_x{P("x")};
  const auto none = sigma_elliptic_probe(just_x, sigma, 6);
  EXPECT_FALSE(none.holds);
  EXPECT_FALSE(none.generators[0].holds);

  const std::vector<Polynomial> with_zero{Polynomial(2), P("y")};
  const auto mixed = sigma_elliptic_probe(with_zero, sigma, 1);
  EXPECT_TRUE(mixed.generators[0].skipped);
  EXPECT_EQ(mixed.generators[0].diagnostic, "zero generator skipped");
  EXPECT_TRUE(mixed.holds);
  EXPECT_EQ(mixed.generators[1].alpha, 1u);
}
