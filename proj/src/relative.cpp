#include "kuothom/relative.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kuothom/errors.hpp"
#include "kuothom/pattern_search.hpp"
#include "kuothom/random.hpp"
#include "kuothom/text.hpp"

namespace kuothom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStartSeparation = 0.02;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double norm(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

std::vector<std::vector<std::size_t>> complements(const SigmaSet& sigma) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& kept : std::get<SigmaSet::Subspaces>(sigma.variant()).retained) {
    std::vector<std::size_t> c;
    for (std::size_t i = 0; i < sigma.n(); ++i)
      if (!std::binary_search(kept.begin(), kept.end(), i)) c.push_back(i);
    out.push_back(std::move(c));
  }
  return out;
}

bool contains_neighbourhood(const SigmaSet& sigma) {
  if (sigma.is_subspaces()) {
    for (const auto& kept : std::get<SigmaSet::Subspaces>(sigma.variant()).retained)
      if (kept.size() == sigma.n()) return true;
    return false;
  }
  for (const auto& g : std::get<SigmaSet::Algebraic>(sigma.variant()).generators)
    if (!g.is_zero()) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// SigmaSet

SigmaSet SigmaSet::subspaces(std::size_t n, std::vector<std::vector<std::size_t>> retained) {
  if (retained.empty()) throw std::invalid_argument("Sigma needs at least one subspace");
  for (auto& kept : retained) {
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    if (!kept.empty() && kept.back() >= n)
      throw std::invalid_argument("subspace coordinate " + std::to_string(kept.back() + 1) +
                                  " exceeds dimension " + std::to_string(n));
  }
  return SigmaSet(n, Subspaces{std::move(retained)});
}

SigmaSet SigmaSet::algebraic(std::size_t n, std::vector<Polynomial> generators) {
  if (generators.empty()) throw std::invalid_argument("Sigma needs at least one generator");
  for (const auto& g : generators) {
    if (g.nvars() != n) throw std::invalid_argument("generator has the wrong number of variables");
    if (!is_zero(g.constant_term())) throw std::invalid_argument("generator does not vanish at 0");
  }
  return SigmaSet(n, Algebraic{std::move(generators)});
}

bool SigmaSet::is_origin() const {
  if (!is_subspaces()) return false;
  for (const auto& kept : std::get<Subspaces>(variant_).retained)
    if (!kept.empty()) return false;
  return true;
}

SigmaSet parse_sigma(std::string_view text, std::size_t n, std::size_t line) {
  // Drop comments and blank lines; exactly one statement remains.
  std::string_view statement;
  std::size_t statement_line = line;
  std::size_t pos = 0, line_no = line;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto piece = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (auto hash = piece.find('#'); hash != std::string_view::npos) piece = piece.substr(0, hash);
    if (!trim(piece).empty()) {
      if (!statement.empty()) throw ParseError("Sigma takes a single statement", line_no, 1);
      statement = piece;
      statement_line = line_no;
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
    ++line_no;
  }
  if (statement.empty()) throw ParseError("empty Sigma description", line, 1);

  const auto colon = statement.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("expected 'subspaces:' or 'zeros:'", statement_line, 1);
  const auto kind = trim(statement.substr(0, colon));
  const std::size_t body_start = colon + 1;
  const auto body = statement.substr(body_start);

  if (kind == "subspaces") {
    std::vector<std::vector<std::size_t>> lists;
    std::size_t i = 0;
    while (i < body.size()) {
      const char c = body[i];
      if (c == ' ' || c == '\t' || c == '\r' || c == ',') {
        ++i;
        continue;
      }
      if (c != '[') throw ParseError("expected '['", statement_line, body_start + i + 1);
      const auto close = body.find(']', i);
      if (close == std::string_view::npos)
        throw ParseError("unterminated '['", statement_line, body_start + i + 1);
      std::vector<std::size_t> kept;
      std::size_t j = i + 1;
      while (j < close) {
        auto comma = body.find(',', j);
        if (comma == std::string_view::npos || comma > close) comma = close;
        const auto name = body.substr(j, comma - j);
        if (!trim(name).empty()) {
          const Polynomial v = parse_polynomial(name, n, statement_line, body_start + j);
          bool found = false;
          for (std::size_t k = 0; k < n && !found; ++k)
            if (v == Polynomial::variable(n, k)) {
              kept.push_back(k);
              found = true;
            }
          if (!found) throw ParseError("expected a variable name", statement_line, body_start + j + 1);
        } else if (comma != close) {
          throw ParseError("empty entry", statement_line, body_start + j + 1);
        }
        j = comma + 1;
      }
      lists.push_back(std::move(kept));
      i = close + 1;
    }
    if (lists.empty()) throw ParseError("no subspaces listed", statement_line, body_start + 1);
    return SigmaSet::subspaces(n, std::move(lists));
  }
  if (kind == "zeros") {
    std::vector<Polynomial> gens;
    std::size_t start = 0;
    while (true) {
      const auto semi = body.find(';', start);
      const auto piece = body.substr(start, semi == std::string_view::npos ? semi : semi - start);
      Polynomial g = parse_polynomial(piece, n, statement_line, body_start + start);
      if (!is_zero(g.constant_term()))
        throw ParseError("generator does not vanish at 0", statement_line, body_start + start + 1);
      gens.push_back(std::move(g));
      if (semi == std::string_view::npos) break;
      start = semi + 1;
    }
    return SigmaSet::algebraic(n, std::move(gens));
  }
  throw ParseError("expected 'subspaces:' or 'zeros:'", statement_line, 1);
}

std::string to_string(const SigmaSet& sigma) {
  std::string out;
  if (sigma.is_subspaces()) {
    out = "subspaces:";
    bool first = true;
    for (const auto& kept : std::get<SigmaSet::Subspaces>(sigma.variant()).retained) {
      out += first ? " [" : ", [";
      first = false;
      for (std::size_t k = 0; k < kept.size(); ++k) {
        if (k) out += ",";
        out += variable_name(kept[k], sigma.n());
      }
      out += "]";
    }
    return out;
  }
  out = "zeros:";
  bool first = true;
  for (const auto& g : std::get<SigmaSet::Algebraic>(sigma.variant()).generators) {
    out += first ? " " : "; ";
    first = false;
    out += to_string(g);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distance

SigmaDistance::SigmaDistance(SigmaSet sigma) : sigma_(std::move(sigma)) {
  if (sigma_.is_subspaces()) return;
  for (const auto& g : std::get<SigmaSet::Algebraic>(sigma_.variant()).generators) {
    generators_.emplace_back(g);
    std::vector<FloatPolynomial> grad;
    for (std::size_t i = 0; i < sigma_.n(); ++i) grad.emplace_back(g.partial(i));
    gradients_.push_back(std::move(grad));
  }
}

std::string SigmaDistance::method() const { return sigma_.is_subspaces() ? "exact" : "projection"; }

double SigmaDistance::operator()(std::span<const double> x) const {
  if (x.size() != sigma_.n())
    throw std::invalid_argument("point has " + std::to_string(x.size()) + " coordinates, Sigma lives in R^" +
                                std::to_string(sigma_.n()));
  if (!sigma_.is_subspaces()) return projected_distance(x);
  double best = kInf;
  for (const auto& kept : std::get<SigmaSet::Subspaces>(sigma_.variant()).retained) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!std::binary_search(kept.begin(), kept.end(), i)) s += x[i] * x[i];
    best = std::min(best, std::sqrt(s));
  }
  return best;
}

namespace {

struct Linearization {
  Eigen::VectorXd residual;
  Eigen::MatrixXd jacobian;
};

Linearization linearize(const std::vector<FloatPolynomial>& gens,
                        const std::vector<std::vector<FloatPolynomial>>& grads, const Eigen::VectorXd& y) {
  const std::span<const double> pt(y.data(), static_cast<std::size_t>(y.size()));
  Linearization l;
  l.residual.resize(static_cast<Eigen::Index>(gens.size()));
  l.jacobian.resize(static_cast<Eigen::Index>(gens.size()), y.size());
  for (std::size_t j = 0; j < gens.size(); ++j) {
    l.residual(static_cast<Eigen::Index>(j)) = gens[j](pt);
    for (std::size_t i = 0; i < grads[j].size(); ++i)
      l.jacobian(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = grads[j][i](pt);
  }
  return l;
}

}  // namespace

std::optional<std::vector<double>> SigmaDistance::project(std::span<const double> y0) const {
  if (sigma_.is_subspaces()) throw UnsupportedError("projection is only used for algebraic Sigma");
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(y0.data(), static_cast<Eigen::Index>(y0.size()));
  const double scale = std::max(y.norm(), 1e-300);
  for (int it = 0; it < 500; ++it) {
    const Linearization l = linearize(generators_, gradients_, y);
    const double r = l.residual.norm();
    if (r == 0) return std::vector<double>(y.data(), y.data() + y.size());
    const Eigen::VectorXd delta = l.jacobian.completeOrthogonalDecomposition().solve(l.residual);
    y -= delta;
    if (!y.allFinite()) return std::nullopt;
    if (delta.norm() <= 1e-12 * scale) {
      // A vanishing step off the zero set means a stall at a critical point.
      if (r > l.jacobian.norm() * 1e-10 * scale) return std::nullopt;
      return std::vector<double>(y.data(), y.data() + y.size());
    }
  }
  return std::nullopt;
}

std::vector<std::vector<double>> SigmaDistance::normal_basis(std::span<const double> y) const {
  if (sigma_.is_subspaces()) throw UnsupportedError("normal basis is only used for algebraic Sigma");
  const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  const Linearization l = linearize(generators_, gradients_, v);
  std::vector<std::vector<double>> out;
  if (l.jacobian.norm() == 0) return out;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(l.jacobian.transpose());
  qr.setThreshold(1e-10);
  const auto rank = qr.rank();
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(v.size(), rank);
  for (Eigen::Index k = 0; k < rank; ++k) out.emplace_back(Q.col(k).data(), Q.col(k).data() + v.size());
  return out;
}

double SigmaDistance::projected_distance(std::span<const double> x) const {
  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  const double scale = target.norm();
  double best = scale;  // the origin lies on Sigma
  if (scale == 0) return 0;

  std::vector<Eigen::VectorXd> starts{target, 0.5 * target, 0.25 * target};
  for (Eigen::Index i = 0; i < n; ++i)
    for (double sign : {0.5, -0.5}) {
      Eigen::VectorXd s = target;
      s(i) += sign * scale;
      starts.push_back(s);
    }

  auto project_vec = [this](const Eigen::VectorXd& v) -> std::optional<Eigen::VectorXd> {
    auto p = project(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
    if (!p) return std::nullopt;
    return Eigen::Map<const Eigen::VectorXd>(p->data(), static_cast<Eigen::Index>(p->size()));
  };

  for (const auto& s : starts) {
    auto y = project_vec(s);
    if (!y) continue;
    double dist = (target - *y).norm();
    // Slide along the zero set toward x: project the residual onto the
    // tangent space, step, re-project.
    double alpha = 1.0;
    for (int it = 0; it < 200 && alpha > 1e-8; ++it) {
      const Linearization l = linearize(generators_, gradients_, *y);
      const Eigen::VectorXd t = target - *y;
      const Eigen::VectorXd normal = l.jacobian.completeOrthogonalDecomposition().solve(l.jacobian * t);
      const Eigen::VectorXd tangent = t - normal;
      if (tangent.norm() <= 1e-12 * scale) break;
      auto cand = project_vec(*y + alpha * tangent);
      const double cd = cand ? (target - *cand).norm() : kInf;
      if (cd < dist) {
        y = cand;
        dist = cd;
        alpha = std::min(1.0, 2 * alpha);
      } else {
        alpha /= 2;
      }
    }
    best = std::min(best, dist);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Shells

std::vector<double> shell_distances(const RelativeConfig& config) {
  if (!(config.ball > 0)) throw std::invalid_argument("ball radius must be positive");
  std::vector<double> d;
  for (unsigned k = 0; k < config.bands; ++k) d.push_back(config.ball / 2 * std::ldexp(1.0, -static_cast<int>(k)));
  return d;
}

namespace {

/// One coordinate subspace S of Sigma and the shell around it:
/// x = A * a (in S, |a| <= 1) + d * u (u a unit vector orthogonal to S).
/// Search vectors are z = (a, u).
struct SubspaceShell {
  std::vector<std::size_t> kept, dropped;
  double reach = 0;  // A
  double d = 0;

  std::size_t dim() const { return kept.size() + dropped.size(); }

  std::vector<double> point(const std::vector<double>& z, std::size_t n) const {
    std::vector<double> x(n, 0.0);
    double un = 0;
    for (std::size_t j = 0; j < dropped.size(); ++j) un += z[kept.size() + j] * z[kept.size() + j];
    un = std::sqrt(un);
    for (std::size_t j = 0; j < kept.size(); ++j) x[kept[j]] = reach * z[j];
    for (std::size_t j = 0; j < dropped.size(); ++j) x[dropped[j]] = d * z[kept.size() + j] / un;
    return x;
  }

  bool retract(std::vector<double>& z) const {
    double an = 0, un = 0;
    for (std::size_t j = 0; j < kept.size(); ++j) an += z[j] * z[j];
    for (std::size_t j = 0; j < dropped.size(); ++j) un += z[kept.size() + j] * z[kept.size() + j];
    if (an > 1 || un == 0) return false;
    un = std::sqrt(un);
    for (std::size_t j = 0; j < dropped.size(); ++j) z[kept.size() + j] /= un;
    return true;
  }
};

std::vector<SubspaceShell> subspace_shells(const SigmaSet& sigma, double d, double ball) {
  std::vector<SubspaceShell> shells;
  const auto comps = complements(sigma);
  const auto& lists = std::get<SigmaSet::Subspaces>(sigma.variant()).retained;
  const double reach = std::sqrt(std::max(0.0, ball * ball - d * d)) * (1 - 1e-9);
  for (std::size_t i = 0; i < lists.size(); ++i) {
    if (comps[i].empty()) continue;
    shells.push_back({lists[i], comps[i], reach, d});
  }
  return shells;
}

std::vector<double> gaussian_unit(RandomStream& rng, std::size_t k) {
  std::vector<double> v(k);
  double s = 0;
  do {
    s = 0;
    for (auto& x : v) {
      x = rng.normal();
      s += x * x;
    }
  } while (s == 0);
  s = std::sqrt(s);
  for (auto& x : v) x /= s;
  return v;
}

/// Candidate search vectors for one subspace shell. Low-dimensional shells
/// (at most one retained and two dropped coordinates) get a product grid:
/// anchors on uniform and log-spaced radii times a grid of normal
/// directions. Otherwise: the anchor 0 with every axis direction, then
/// random anchors at log-uniform and uniform radii.
std::vector<std::vector<double>> shell_candidates(const SubspaceShell& shell, unsigned count,
                                                  RandomStream& rng) {
  const std::size_t s = shell.kept.size(), c = shell.dropped.size();
  std::vector<std::vector<double>> out;
  if (s <= 1 && c <= 2) {
    std::vector<double> anchors{0.0};
    if (s == 1) {
      const unsigned half = std::max(8u, count / 2);
      for (unsigned k = 1; k <= half; ++k) {
        const double uniform = static_cast<double>(k) / half;
        const double logspaced = std::pow(10.0, -4.0 * (half - k) / (half - 1));
        for (double rho : {uniform, logspaced}) {
          anchors.push_back(rho);
          anchors.push_back(-rho);
        }
      }
    }
    std::vector<std::vector<double>> normals;
    if (c == 1) {
      normals = {{1.0}, {-1.0}};
    } else {
      constexpr unsigned kAngles = 32;
      for (unsigned j = 0; j < kAngles; ++j) {
        const double t = 2 * 3.14159265358979323846 * j / kAngles;
        normals.push_back({std::cos(t), std::sin(t)});
      }
    }
    for (double a : anchors)
      for (const auto& u : normals) {
        std::vector<double> z;
        if (s == 1) z.push_back(a);
        z.insert(z.end(), u.begin(), u.end());
        out.push_back(std::move(z));
      }
    return out;
  }
  for (std::size_t j = 0; j < c; ++j)
    for (double sign : {1.0, -1.0}) {
      std::vector<double> z(s + c, 0.0);
      z[s + j] = sign;
      out.push_back(std::move(z));
    }
  while (out.size() < count) {
    std::vector<double> z(s + c, 0.0);
    const auto u = gaussian_unit(rng, c);
    std::copy(u.begin(), u.end(), z.begin() + static_cast<std::ptrdiff_t>(s));
    const std::size_t k = out.size();
    if (s > 0 && k % 4 != 0) {
      const auto a = gaussian_unit(rng, s);
      const double rho = k % 2 == 1 ? std::pow(10.0, -4.0 * rng.uniform01()) : rng.uniform01();
      for (std::size_t j = 0; j < s; ++j) z[j] = rho * a[j];
    }
    out.push_back(std::move(z));
  }
  return out;
}

RandomStream band_stream(const RelativeConfig& config, std::size_t band) {
  return RandomStream(config.seed, "relative-shells").substream("band-" + std::to_string(band));
}

std::vector<std::vector<double>> algebraic_shell_points(const SigmaDistance& sigma, double d,
                                                        const RelativeConfig& config, std::size_t band) {
  const std::size_t n = sigma.sigma().n();
  RandomStream rng = band_stream(config, band);
  std::vector<std::vector<double>> out;
  const unsigned attempts = 4 * config.samples;
  for (unsigned a = 0; a < attempts && out.size() < config.samples; ++a) {
    std::vector<double> anchor(n, 0.0);
    if (a % 4 != 0) {
      const auto dir = gaussian_unit(rng, n);
      const double rho = 0.8 * config.ball * (a % 2 ? std::pow(10.0, -3.0 * rng.uniform01()) : rng.uniform01());
      for (std::size_t i = 0; i < n; ++i) anchor[i] = rho * dir[i];
      auto p = sigma.project(anchor);
      if (!p) continue;
      anchor = std::move(*p);
    }
    auto basis = sigma.normal_basis(anchor);
    std::vector<double> offset(n, 0.0);
    if (basis.empty()) {
      offset = gaussian_unit(rng, n);
    } else {
      const auto coef = gaussian_unit(rng, basis.size());
      for (std::size_t k = 0; k < basis.size(); ++k)
        for (std::size_t i = 0; i < n; ++i) offset[i] += coef[k] * basis[k][i];
      const double on = norm(offset);
      for (auto& v : offset) v /= on;
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = anchor[i] + d * offset[i];
    if (!(norm(x) < config.ball)) continue;
    const double actual = sigma(x);
    if (actual < d / std::sqrt(2.0) || actual > d * std::sqrt(2.0)) continue;
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

std::vector<std::vector<double>> shell_points(const SigmaDistance& sigma, double d,
                                              const RelativeConfig& config, std::size_t band) {
  if (!sigma.sigma().is_subspaces()) return algebraic_shell_points(sigma, d, config, band);
  const std::size_t n = sigma.sigma().n();
  const auto shells = subspace_shells(sigma.sigma(), d, config.ball);
  RandomStream rng = band_stream(config, band);
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < shells.size(); ++i) {
    RandomStream sub = rng.substream("subspace-" + std::to_string(i));
    const unsigned count = std::max(32u, config.samples / static_cast<unsigned>(shells.size()));
    for (auto& z : shell_candidates(shells[i], count, sub)) {
      auto x = shells[i].point(z, n);
      if (sigma(x) >= d * (1 - 1e-9)) out.push_back(std::move(x));
    }
  }
  return out;
}

RadialScan shell_scan(const SigmaDistance& sigma, const SphereFunction& F, const RelativeConfig& config) {
  if (contains_neighbourhood(sigma.sigma()))
    throw PreconditionError("Sigma contains a neighbourhood of the origin; distance shells are empty");
  const std::size_t n = sigma.sigma().n();
  RadialScan scan;
  scan.radii = shell_distances(config);
  scan.strategy.multistart = config.multistart;
  scan.strategy.seed = config.seed;
  for (std::size_t band = 0; band < scan.radii.size(); ++band) {
    const double d = scan.radii[band];
    double best = kInf;
    bool vanishing = false;
    std::vector<double> argmin;

    if (!sigma.sigma().is_subspaces()) {
      for (auto& x : algebraic_shell_points(sigma, d, config, band)) {
        const double v = F(x);
        ++scan.evaluations;
        if (v < best) {
          best = v;
          argmin = std::move(x);
        }
      }
      vanishing = best == 0;
    } else {
      const auto shells = subspace_shells(sigma.sigma(), d, config.ball);
      RandomStream rng = band_stream(config, band);
      for (std::size_t i = 0; i < shells.size() && !vanishing; ++i) {
        const SubspaceShell& shell = shells[i];
        RandomStream sub = rng.substream("subspace-" + std::to_string(i));
        const unsigned count = std::max(32u, config.samples / static_cast<unsigned>(shells.size()));
        const Objective objective = [&](const std::vector<double>& z) {
          const auto x = shell.point(z, n);
          if (sigma(x) < d * (1 - 1e-9)) return kInf;  // nearer to another subspace
          ++scan.evaluations;
          return F(x);
        };
        const Retraction retract = [&shell](std::vector<double>& z) { return shell.retract(z); };

        auto candidates = shell_candidates(shell, count, sub);
        std::vector<double> values;
        for (const auto& z : candidates) values.push_back(objective(z));
        std::vector<std::size_t> order(candidates.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<std::size_t> starts;
        for (std::size_t k : order) {
          if (starts.size() >= config.multistart || !(values[k] < kInf)) break;
          const bool separated = std::all_of(starts.begin(), starts.end(), [&](std::size_t j) {
            double dz = 0;
            for (std::size_t i = 0; i < candidates[k].size(); ++i)
              dz += (candidates[k][i] - candidates[j][i]) * (candidates[k][i] - candidates[j][i]);
            return dz > kStartSeparation * kStartSeparation;
          });
          if (separated) starts.push_back(k);
        }
        for (std::size_t k : starts) {
          std::vector<double> z = candidates[k];
          const Descent dsc = descend_nonnegative(z, values[k], 0.05, objective, retract);
          if (dsc.vanishing || dsc.value < best) {
            best = dsc.value;
            argmin = shell.point(z, n);
          }
          if (dsc.vanishing) {
            vanishing = true;
            break;
          }
        }
      }
    }
    scan.min_values.push_back(vanishing ? 0.0 : best);
    scan.vanishing.push_back(vanishing);
    scan.empty.push_back(best == kInf && !vanishing);
    scan.argmins.push_back(std::move(argmin));
  }
  return scan;
}

std::string relative_condition_name(Quantity which, unsigned r, unsigned m) {
  return std::string(which == Quantity::Thom ? "I^T" : "I^K") + "_" + std::to_string(r) + "(" +
         std::to_string(m) + ")";
}

RelativeVerdict check_relative(const GermQuantities& q, Quantity which, unsigned r, unsigned m,
                               const SigmaDistance& sigma, const RelativeConfig& config) {
  if (r == 0 || m == 0) throw std::invalid_argument("r and m must be positive");
  if (sigma.sigma().n() != q.germ().n()) throw std::invalid_argument("Sigma and f live in different spaces");
  SphereFunction F;
  if (which == Quantity::Kuo) F = [&q, m](std::span<const double> x) { return q.kuo(m, x); };
  else F = [&q, m](std::span<const double> x) { return q.thom(m, x); };
  RelativeVerdict out;
  out.which = which;
  out.r = r;
  out.m = m;
  out.scan = shell_scan(sigma, F, config);
  out.verdict = verdict_from_scan(relative_condition_name(which, r, m), out.scan,
                                  static_cast<double>(r) * m, config.tolerance);
  out.verdict.caveat = kRelativeCaveat;
  return out;
}

// ---------------------------------------------------------------------------
// Jets, deformation, compatibility

namespace {

void require_same_shape(const MapGerm& f, const MapGerm& g) {
  if (f.n() != g.n() || f.p() != g.p())
    throw std::invalid_argument("germs differ in source or target dimension");
}

/// Every partial of order <= budget of p, starting from variable `first`,
/// vanishes once `dropped` are set to zero. Derivatives are taken in
/// nondecreasing variable order, so each multi-index is visited once.
bool partials_vanish(const Polynomial& p, std::span<const std::size_t> dropped, std::size_t first,
                     unsigned budget) {
  if (!p.substitute_zero(dropped).is_zero()) return false;
  if (budget == 0) return true;
  for (std::size_t i = first; i < p.nvars(); ++i) {
    const Polynomial d = p.partial(i);
    if (d.is_zero()) continue;
    if (!partials_vanish(d, dropped, i, budget - 1)) return false;
  }
  return true;
}

}  // namespace

bool jets_equal_on_sigma(const MapGerm& f, const MapGerm& g, unsigned r, const SigmaSet& sigma) {
  if (!sigma.is_subspaces())
    throw UnsupportedError("jet equality on an algebraic Sigma is not decided symbolically");
  require_same_shape(f, g);
  if (sigma.n() != f.n()) throw std::invalid_argument("Sigma and the germs live in different spaces");
  const auto comps = complements(sigma);
  for (std::size_t j = 0; j < f.p(); ++j) {
    const Polynomial diff = g.component(j) - f.component(j);
    for (const auto& dropped : comps)
      if (!partials_vanish(diff, dropped, 0, r)) return false;
  }
  return true;
}

MapGerm deformation(const MapGerm& f, const MapGerm& g, const Rational& t) {
  require_same_shape(f, g);
  if (t < 0 || t > 1) throw std::invalid_argument("deformation parameter must lie in [0, 1]");
  std::vector<Polynomial> comps;
  for (std::size_t j = 0; j < f.p(); ++j)
    comps.push_back(f.component(j) + t * (g.component(j) - f.component(j)));
  return MapGerm(f.n(), std::move(comps), f.jet_degree());
}

CompatibilityReport check_compatibility(const MapGerm& f, const MapGerm& g, unsigned r, unsigned m,
                                        Quantity which, const SigmaDistance& sigma,
                                        std::span<const Rational> t_grid, const RelativeConfig& config) {
  if (!jets_equal_on_sigma(f, g, r, sigma.sigma()))
    throw PreconditionError("the " + std::to_string(r) + "-jets of f and g differ on Sigma");
  CompatibilityReport report;
  for (const Rational& t : t_grid) {
    const GermQuantities q(deformation(f, g, t));
    report.rows.push_back({t, check_relative(q, which, r, m, sigma, config)});
    if (report.rows.back().result.verdict.holds != report.rows.front().result.verdict.holds)
      report.consistent = false;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Ellipticity

EllipticityReport sigma_elliptic_probe(std::span<const Polynomial> generators, const SigmaDistance& sigma,
                                       unsigned alpha_max, const RelativeConfig& config) {
  if (generators.empty()) throw std::invalid_argument("no generators to probe");
  EllipticityReport report;
  report.alpha_max = alpha_max;
  for (std::size_t k = 0; k < generators.size(); ++k) {
    const Polynomial& phi = generators[k];
    if (phi.nvars() != sigma.sigma().n()) throw std::invalid_argument("generator lives in the wrong space");
    GeneratorProbe probe;
    probe.index = k;
    if (phi.is_zero()) {
      probe.skipped = true;
      probe.diagnostic = "zero generator skipped";
      report.generators.push_back(std::move(probe));
      continue;
    }
    const FloatPolynomial fp(phi);
    const auto scan =
        shell_scan(sigma, [&fp](std::span<const double> x) { return std::fabs(fp(x)); }, config);
    const auto v = verdict_from_scan("sigma-elliptic", scan, alpha_max, config.tolerance);
    probe.estimate = v.estimate;
    probe.holds = v.holds;
    probe.diagnostic = v.diagnostic;
    if (v.holds && v.estimate)
      probe.alpha = static_cast<unsigned>(std::max(0.0, std::ceil(v.estimate->slope - config.tolerance)));
    report.holds = report.holds || probe.holds;
    report.generators.push_back(std::move(probe));
  }
  return report;
}

}  // namespace kuothom
