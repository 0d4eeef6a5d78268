#include "wco/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

namespace wco {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Pair of independent standard normals (Box-Muller on engine-deterministic
/// uniforms; std::normal_distribution is implementation-defined).
std::pair<double, double> gaussian_pair(std::mt19937_64& rng) {
  double u = uniform01(rng);
  while (u <= 0.0) u = uniform01(rng);
  const double v = uniform01(rng);
  const double r = std::sqrt(-2.0 * std::log(u));
  return {r * std::cos(kTwoPi * v), r * std::sin(kTwoPi * v)};
}

double norm2(std::span<const Cplx> z) {
  double s = 0.0;
  for (const Cplx& c : z) s += std::norm(c);
  return std::sqrt(s);
}

double max_abs(std::span<const Cplx> z) {
  double m = 0.0;
  for (const Cplx& c : z) m = std::max(m, std::abs(c));
  return m;
}

/// log of x(x+1)...(x+m-1) = lgamma(x+m) - lgamma(x); x > 0.
double log_rising(double x, int m) { return std::lgamma(x + m) - std::lgamma(x); }

/// gamma! / rising(base, degree) without intermediate overflow: exact double
/// products at small degree, Gamma ratios in log space beyond.
double factorial_over_rising(const MultiIndex& g, double base, int degree) {
  if (degree <= 120) {
    double num = 1.0;
    for (int e : g) {
      for (int k = 2; k <= e; ++k) num *= k;
    }
    double den = 1.0;
    for (int k = 0; k < degree; ++k) den *= base + k;
    return num / den;
  }
  double log_num = 0.0;
  for (int e : g) log_num += std::lgamma(e + 1.0);
  return std::exp(log_num - log_rising(base, degree));
}

Cplx hermitian_inner(std::span<const Cplx> z, std::span<const Cplx> w) {
  Cplx s(0.0, 0.0);
  for (std::size_t i = 0; i < z.size(); ++i) s += z[i] * std::conj(w[i]);
  return s;
}

void require_point_dim(const DomainSpec& domain, std::span<const Cplx> z,
                       const char* who) {
  if (static_cast<int>(z.size()) != domain.n) {
    throw std::invalid_argument(std::string(who) + ": point dimension mismatch");
  }
}

void require_in_closure(const SpaceSpec& space, std::span<const Cplx> z,
                        const char* who) {
  require_point_dim(space.domain, z, who);
  if (space.domain.boundary_distance(z) < -1e-12) {
    throw std::invalid_argument(std::string(who) + ": point outside domain closure");
  }
}

}  // namespace

std::string to_string(DomainFamily f) {
  switch (f) {
    case DomainFamily::disk: return "disk";
    case DomainFamily::ball: return "ball";
    case DomainFamily::polydisk: return "polydisk";
    case DomainFamily::annulus_product: return "annulus_product";
  }
  throw std::logic_error("to_string(DomainFamily): bad value");
}

DomainFamily domain_family_from_string(const std::string& s) {
  if (s == "disk") return DomainFamily::disk;
  if (s == "ball") return DomainFamily::ball;
  if (s == "polydisk") return DomainFamily::polydisk;
  if (s == "annulus_product") return DomainFamily::annulus_product;
  throw std::invalid_argument("unknown domain family '" + s + "'");
}

DomainSpec DomainSpec::disk() { return {DomainFamily::disk, 1, 0.0}; }

DomainSpec DomainSpec::ball(int n) { return {DomainFamily::ball, n, 0.0}; }

DomainSpec DomainSpec::polydisk(int n) { return {DomainFamily::polydisk, n, 0.0}; }

DomainSpec DomainSpec::annulus_product(int n, double r) {
  return {DomainFamily::annulus_product, n, r};
}

void DomainSpec::validate() const {
  if (n < 1) throw std::invalid_argument("DomainSpec: need n >= 1");
  if (family == DomainFamily::disk && n != 1) {
    throw std::invalid_argument("DomainSpec: disk has n = 1");
  }
  if (family == DomainFamily::annulus_product) {
    if (!(inner_radius > 0.0 && inner_radius < 1.0)) {
      throw std::invalid_argument("DomainSpec: annulus_product needs 0 < r < 1");
    }
  }
}

bool DomainSpec::contains(std::span<const Cplx> z) const {
  require_point_dim(*this, z, "DomainSpec::contains");
  switch (family) {
    case DomainFamily::disk:
    case DomainFamily::ball:
      return norm2(z) < 1.0;
    case DomainFamily::polydisk:
      return max_abs(z) < 1.0;
    case DomainFamily::annulus_product: {
      const double r = inner_radius;
      for (const Cplx& c : z) {
        const double a = std::abs(c);
        if (!(a > r && a < 1.0 / r)) return false;
      }
      return true;
    }
  }
  return false;
}

double DomainSpec::boundary_distance(std::span<const Cplx> z) const {
  require_point_dim(*this, z, "DomainSpec::boundary_distance");
  switch (family) {
    case DomainFamily::disk:
    case DomainFamily::ball:
      return 1.0 - norm2(z);
    case DomainFamily::polydisk:
      return 1.0 - max_abs(z);
    case DomainFamily::annulus_product: {
      const double r = inner_radius;
      double d = std::numeric_limits<double>::infinity();
      for (const Cplx& c : z) {
        const double a = std::abs(c);
        d = std::min(d, std::min(a - r, 1.0 / r - a));
      }
      return d;
    }
  }
  return 0.0;
}

double DomainSpec::inradius() const {
  if (family == DomainFamily::annulus_product) {
    return (1.0 / inner_radius - inner_radius) / 2.0;
  }
  return 1.0;
}

std::string to_string(SpaceFamily f) {
  switch (f) {
    case SpaceFamily::weighted_hardy_disk: return "weighted_hardy_disk";
    case SpaceFamily::hardy_ball: return "hardy_ball";
    case SpaceFamily::bergman_ball: return "bergman_ball";
    case SpaceFamily::hardy_polydisk: return "hardy_polydisk";
    case SpaceFamily::bergman_polydisk: return "bergman_polydisk";
  }
  throw std::logic_error("to_string(SpaceFamily): bad value");
}

SpaceFamily space_family_from_string(const std::string& s) {
  if (s == "weighted_hardy_disk") return SpaceFamily::weighted_hardy_disk;
  if (s == "hardy_ball") return SpaceFamily::hardy_ball;
  if (s == "bergman_ball") return SpaceFamily::bergman_ball;
  if (s == "hardy_polydisk") return SpaceFamily::hardy_polydisk;
  if (s == "bergman_polydisk") return SpaceFamily::bergman_polydisk;
  throw std::invalid_argument("unknown space family '" + s + "'");
}

WeightRule WeightRule::ones() {
  WeightRule r;
  r.rule = "ones";
  return r;
}

WeightRule WeightRule::explicit_list(std::vector<double> values) {
  WeightRule r;
  r.list = std::move(values);
  return r;
}

double WeightRule::b(int j) const {
  if (j < 0) throw std::invalid_argument("WeightRule::b: need j >= 0");
  if (is_ones()) return 1.0;
  if (j >= static_cast<int>(list.size())) {
    throw std::out_of_range("WeightRule::b: explicit weight list has " +
                            std::to_string(list.size()) + " entries, need b_" +
                            std::to_string(j));
  }
  return list[j];
}

void WeightRule::validate() const {
  if (is_ones()) return;
  if (!rule.empty()) {
    throw std::invalid_argument("WeightRule: unknown rule '" + rule + "'");
  }
  if (list.empty()) {
    throw std::invalid_argument("WeightRule: need a rule or a non-empty list");
  }
  for (double v : list) {
    if (!(v > 0.0)) {
      throw std::invalid_argument("WeightRule: weights must be positive");
    }
  }
}

SpaceSpec SpaceSpec::classical_hardy_disk() {
  return weighted_hardy_disk(WeightRule::ones());
}

SpaceSpec SpaceSpec::weighted_hardy_disk(WeightRule rule) {
  SpaceSpec s;
  s.domain = DomainSpec::disk();
  s.family = SpaceFamily::weighted_hardy_disk;
  s.b = std::move(rule);
  s.validate();
  return s;
}

SpaceSpec SpaceSpec::hardy_ball(int n) {
  SpaceSpec s;
  s.domain = DomainSpec::ball(n);
  s.family = SpaceFamily::hardy_ball;
  s.validate();
  return s;
}

SpaceSpec SpaceSpec::bergman_ball(int n, double alpha) {
  SpaceSpec s;
  s.domain = DomainSpec::ball(n);
  s.family = SpaceFamily::bergman_ball;
  s.alpha = alpha;
  s.validate();
  return s;
}

SpaceSpec SpaceSpec::hardy_polydisk(int n) {
  SpaceSpec s;
  s.domain = DomainSpec::polydisk(n);
  s.family = SpaceFamily::hardy_polydisk;
  s.validate();
  return s;
}

SpaceSpec SpaceSpec::bergman_polydisk(int n, double alpha) {
  SpaceSpec s;
  s.domain = DomainSpec::polydisk(n);
  s.family = SpaceFamily::bergman_polydisk;
  s.alpha = alpha;
  s.validate();
  return s;
}

void SpaceSpec::validate() const {
  domain.validate();
  switch (family) {
    case SpaceFamily::weighted_hardy_disk:
      if (domain.family != DomainFamily::disk) {
        throw std::invalid_argument("weighted_hardy_disk lives on the disk");
      }
      b.validate();
      break;
    case SpaceFamily::hardy_ball:
      if (domain.family != DomainFamily::ball && domain.family != DomainFamily::disk) {
        throw std::invalid_argument("hardy_ball lives on a ball");
      }
      break;
    case SpaceFamily::bergman_ball:
      if (domain.family != DomainFamily::ball && domain.family != DomainFamily::disk) {
        throw std::invalid_argument("bergman_ball lives on a ball");
      }
      if (!(alpha > -1.0)) {
        throw std::invalid_argument("bergman_ball needs alpha > -1");
      }
      break;
    case SpaceFamily::hardy_polydisk:
      if (domain.family != DomainFamily::polydisk &&
          domain.family != DomainFamily::disk) {
        throw std::invalid_argument("hardy_polydisk lives on a polydisk");
      }
      break;
    case SpaceFamily::bergman_polydisk:
      if (domain.family != DomainFamily::polydisk &&
          domain.family != DomainFamily::disk) {
        throw std::invalid_argument("bergman_polydisk lives on a polydisk");
      }
      if (!(alpha > -1.0)) {
        throw std::invalid_argument("bergman_polydisk needs alpha > -1");
      }
      break;
  }
}

double monomial_weight(const SpaceSpec& space, const MultiIndex& g) {
  if (static_cast<int>(g.size()) != space.domain.n) {
    throw std::invalid_argument("monomial_weight: index dimension mismatch");
  }
  for (int e : g) {
    if (e < 0) throw std::invalid_argument("monomial_weight: negative exponent");
  }
  const int n = space.domain.n;
  const int d = total_degree(g);
  switch (space.family) {
    case SpaceFamily::weighted_hardy_disk: {
      const double bj = space.b.b(g[0]);
      return bj * bj;
    }
    case SpaceFamily::hardy_ball:
      return factorial_over_rising(g, static_cast<double>(n), d);
    case SpaceFamily::bergman_ball:
      return factorial_over_rising(g, n + 1.0 + space.alpha, d);
    case SpaceFamily::hardy_polydisk:
      return 1.0;
    case SpaceFamily::bergman_polydisk: {
      double c = 1.0;
      for (int e : g) c *= factorial_over_rising(MultiIndex{e}, 2.0 + space.alpha, e);
      return c;
    }
  }
  throw std::logic_error("monomial_weight: bad family");
}

Cplx kernel_value(const SpaceSpec& space, std::span<const Cplx> z,
                  std::span<const Cplx> w) {
  require_in_closure(space, z, "kernel_value");
  require_in_closure(space, w, "kernel_value");
  const int n = space.domain.n;
  switch (space.family) {
    case SpaceFamily::weighted_hardy_disk: {
      const Cplx s = z[0] * std::conj(w[0]);
      if (space.b.is_ones()) return 1.0 / (1.0 - s);
      // General b: sum the kernel series directly.
      Cplx acc(0.0, 0.0);
      Cplx power(1.0, 0.0);
      for (int j = 0; j <= 500; ++j) {
        const double bj = space.b.b(j);
        const Cplx term = power / (bj * bj);
        acc += term;
        if (std::abs(term) < 1e-15 * std::abs(acc)) return acc;
        power *= s;
      }
      throw std::runtime_error(
          "kernel_value: weighted-Hardy kernel series did not converge in 500 terms");
    }
    case SpaceFamily::hardy_ball:
      return std::pow(1.0 - hermitian_inner(z, w), -static_cast<double>(n));
    case SpaceFamily::bergman_ball:
      return std::pow(1.0 - hermitian_inner(z, w), -(n + 1.0 + space.alpha));
    case SpaceFamily::hardy_polydisk: {
      Cplx prod(1.0, 0.0);
      for (int i = 0; i < n; ++i) prod *= 1.0 / (1.0 - z[i] * std::conj(w[i]));
      return prod;
    }
    case SpaceFamily::bergman_polydisk: {
      Cplx prod(1.0, 0.0);
      for (int i = 0; i < n; ++i) {
        prod *= std::pow(1.0 - z[i] * std::conj(w[i]), -(2.0 + space.alpha));
      }
      return prod;
    }
  }
  throw std::logic_error("kernel_value: bad family");
}

Cplx kernel_series_value(const SpaceSpec& space, std::span<const Cplx> z,
                         std::span<const Cplx> w, int N) {
  require_in_closure(space, z, "kernel_series_value");
  require_in_closure(space, w, "kernel_series_value");
  if (N < 0) throw std::invalid_argument("kernel_series_value: need N >= 0");
  const int n = space.domain.n;
  std::vector<std::vector<Cplx>> powers(n);
  for (int i = 0; i < n; ++i) {
    const Cplx p = z[i] * std::conj(w[i]);
    powers[i].resize(N + 1);
    powers[i][0] = Cplx(1.0, 0.0);
    for (int k = 1; k <= N; ++k) powers[i][k] = powers[i][k - 1] * p;
  }
  Cplx acc(0.0, 0.0);
  for (const MultiIndex& g : enumerate_multi_indices(n, N)) {
    Cplx term(1.0, 0.0);
    for (int i = 0; i < n; ++i) term *= powers[i][g[i]];
    acc += term / monomial_weight(space, g);
  }
  return acc;
}

Cplx normalized_kernel_pairing(const SpaceSpec& space, const PolyMap& p,
                               std::span<const Cplx> z) {
  if (!p.is_scalar()) {
    throw std::invalid_argument("normalized_kernel_pairing: p must be scalar");
  }
  const Cplx kzz = kernel_value(space, z, z);
  return p.evaluate_scalar(z) / std::sqrt(kzz.real());
}

namespace {

std::vector<Point> sphere_directions(int n, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> dirs;
  dirs.reserve(count);
  while (static_cast<int>(dirs.size()) < count) {
    Point u(n);
    for (int i = 0; i < n; ++i) {
      const auto [a, b] = gaussian_pair(rng);
      u[i] = Cplx(a, b);
    }
    const double r = norm2(u);
    if (r < 1e-8) continue;
    for (Cplx& c : u) c /= r;
    dirs.push_back(std::move(u));
  }
  return dirs;
}

std::vector<Point> torus_directions(int n, int per_factor) {
  // Cartesian product of per-factor roots of unity, lexicographic in the
  // factor indices.
  std::vector<Point> dirs;
  std::vector<int> k(n, 0);
  const std::size_t count = [&] {
    std::size_t c = 1;
    for (int i = 0; i < n; ++i) c *= static_cast<std::size_t>(per_factor);
    return c;
  }();
  dirs.reserve(count);
  while (true) {
    Point u(n);
    for (int i = 0; i < n; ++i) {
      const double theta = kTwoPi * k[i] / per_factor;
      u[i] = Cplx(std::cos(theta), std::sin(theta));
    }
    dirs.push_back(std::move(u));
    int i = n - 1;
    while (i >= 0 && ++k[i] == per_factor) k[i--] = 0;
    if (i < 0) break;
  }
  return dirs;
}

}  // namespace

std::vector<Point> boundary_samples(const DomainSpec& domain,
                                    const BoundaryLadder& ladder) {
  domain.validate();
  if (domain.family == DomainFamily::annulus_product) {
    throw std::invalid_argument("boundary_samples: not defined on annulus_product");
  }
  if (ladder.directions < 1) {
    throw std::invalid_argument("boundary_samples: need at least one direction");
  }
  for (double eps : ladder.epsilons) {
    if (!(eps > 0.0 && eps < domain.inradius())) {
      throw std::invalid_argument("boundary_samples: shell distance outside (0, inradius)");
    }
  }
  std::vector<Point> dirs;
  switch (domain.family) {
    case DomainFamily::disk:
      dirs = torus_directions(1, ladder.directions);
      break;
    case DomainFamily::polydisk:
      dirs = torus_directions(domain.n, ladder.directions);
      break;
    case DomainFamily::ball:
      dirs = sphere_directions(domain.n, ladder.directions, ladder.seed);
      break;
    default:
      break;
  }
  std::vector<Point> out;
  out.reserve(dirs.size() * ladder.epsilons.size());
  for (const Point& u : dirs) {
    for (double eps : ladder.epsilons) {
      Point p(u);
      for (Cplx& c : p) c *= 1.0 - eps;
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<Point> interior_samples(const DomainSpec& domain, int count,
                                    std::uint64_t seed) {
  domain.validate();
  if (count < 1) throw std::invalid_argument("interior_samples: need count >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  out.reserve(count);
  const int n = domain.n;
  for (int s = 0; s < count; ++s) {
    Point p(n);
    switch (domain.family) {
      case DomainFamily::disk:
      case DomainFamily::ball: {
        Point u(n);
        for (int i = 0; i < n; ++i) {
          const auto [a, b] = gaussian_pair(rng);
          u[i] = Cplx(a, b);
        }
        double r = norm2(u);
        while (r < 1e-8) {
          for (int i = 0; i < n; ++i) {
            const auto [a, b] = gaussian_pair(rng);
            u[i] = Cplx(a, b);
          }
          r = norm2(u);
        }
        const double radius = std::pow(uniform01(rng), 1.0 / (2.0 * n));
        for (int i = 0; i < n; ++i) p[i] = u[i] * (radius / r);
        break;
      }
      case DomainFamily::polydisk: {
        for (int i = 0; i < n; ++i) {
          const double radius = std::sqrt(uniform01(rng));
          const double theta = kTwoPi * uniform01(rng);
          p[i] = Cplx(radius * std::cos(theta), radius * std::sin(theta));
        }
        break;
      }
      case DomainFamily::annulus_product: {
        const double r2 = domain.inner_radius * domain.inner_radius;
        const double R2 = 1.0 / r2;
        for (int i = 0; i < n; ++i) {
          const double radius = std::sqrt(r2 + uniform01(rng) * (R2 - r2));
          const double theta = kTwoPi * uniform01(rng);
          p[i] = Cplx(radius * std::cos(theta), radius * std::sin(theta));
        }
        break;
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

WeightLiminfEstimate estimate_weight_liminf(const SpaceSpec& space,
                                            const PolyMap& psi,
                                            const BoundaryLadder& ladder,
                                            double threshold) {
  if (!psi.is_scalar()) {
    throw std::invalid_argument("estimate_weight_liminf: psi must be scalar");
  }
  if (ladder.epsilons.empty()) {
    throw std::invalid_argument("estimate_weight_liminf: empty shell ladder");
  }
  const auto samples = boundary_samples(space.domain, ladder);
  const std::size_t shells = ladder.epsilons.size();

  WeightLiminfEstimate est;
  est.threshold = threshold;
  est.shell_minima.assign(shells, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::size_t shell = i % shells;  // samples are (direction, shell) ordered
    const double value = std::abs(psi.evaluate_scalar(samples[i]));
    est.shell_minima[shell] = std::min(est.shell_minima[shell], value);
  }
  const std::size_t innermost = static_cast<std::size_t>(
      std::min_element(ladder.epsilons.begin(), ladder.epsilons.end()) -
      ladder.epsilons.begin());
  est.innermost_epsilon = ladder.epsilons[innermost];
  est.liminf = est.shell_minima[innermost];
  est.bounded_away_from_zero = est.liminf > threshold;
  return est;
}

}  // namespace wco
