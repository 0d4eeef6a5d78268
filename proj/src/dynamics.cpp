#include "wco/dynamics.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace wco {

namespace {

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

double map_residual(const HoloMap& map, const Point& z) {
  return distance(map.evaluate(z), z);
}

bool lex_point_less(const Point& a, const Point& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

}  // namespace

HoloMap HoloMap::polynomial(PolyMap map) {
  if (map.vars_in() != map.vars_out()) {
    throw std::invalid_argument("HoloMap::polynomial: map must be a self-map");
  }
  HoloMap h;
  h.n_ = map.vars_in();
  h.poly_ = std::move(map);
  return h;
}

HoloMap HoloMap::componentwise_inverse(int n) {
  if (n < 1) throw std::invalid_argument("HoloMap::componentwise_inverse: need n >= 1");
  HoloMap h;
  h.n_ = n;
  return h;
}

const PolyMap& HoloMap::poly() const {
  if (!poly_) throw std::logic_error("HoloMap::poly: map is not polynomial");
  return *poly_;
}

Point HoloMap::evaluate(std::span<const Cplx> z) const {
  if (static_cast<int>(z.size()) != n_) {
    throw std::invalid_argument("HoloMap::evaluate: dimension mismatch");
  }
  if (poly_) return poly_->evaluate(z);
  Point out(n_);
  for (int i = 0; i < n_; ++i) out[i] = 1.0 / z[i];
  return out;
}

Eigen::MatrixXcd HoloMap::jacobian(std::span<const Cplx> z) const {
  if (static_cast<int>(z.size()) != n_) {
    throw std::invalid_argument("HoloMap::jacobian: dimension mismatch");
  }
  if (poly_) return jacobian_at(*poly_, Point(z.begin(), z.end()));
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) J(i, i) = -1.0 / (z[i] * z[i]);
  return J;
}

Eigen::MatrixXcd jacobian_at(const PolyMap& phi, const Point& a) {
  if (static_cast<int>(a.size()) != phi.vars_in()) {
    throw std::invalid_argument("jacobian_at: point dimension mismatch");
  }
  Eigen::MatrixXcd J(phi.vars_out(), phi.vars_in());
  for (int i = 0; i < phi.vars_out(); ++i) {
    for (int k = 0; k < phi.vars_in(); ++k) {
      J(i, k) = series_derivative(phi.component(i), k).evaluate(a);
    }
  }
  return J;
}

std::string to_string(OrbitOutcome o) {
  switch (o) {
    case OrbitOutcome::converged: return "converged";
    case OrbitOutcome::boundary_divergent: return "boundary_divergent";
    case OrbitOutcome::undecided: return "undecided";
  }
  throw std::logic_error("to_string(OrbitOutcome): bad value");
}

OrbitRecord iterate_orbit(const DomainSpec& domain, const HoloMap& map,
                          const Point& z0, const OrbitTolerances& tol) {
  domain.validate();
  if (domain.family == DomainFamily::annulus_product) {
    throw std::invalid_argument(
        "iterate_orbit: orbit classification is disabled on annulus products");
  }
  if (map.dim() != domain.n) {
    throw std::invalid_argument("iterate_orbit: map dimension mismatch");
  }
  if (!domain.contains(z0)) {
    throw std::invalid_argument("iterate_orbit: start outside the domain");
  }
  if (tol.max_steps < 1) throw std::invalid_argument("iterate_orbit: need J >= 1");

  OrbitRecord record;
  record.start = z0;
  record.points.push_back(z0);
  record.boundary_distances.push_back(domain.boundary_distance(z0));

  for (int j = 0; j < tol.max_steps; ++j) {
    Point next = map.evaluate(record.points.back());
    if (!domain.contains(next)) {
      throw std::runtime_error("iterate_orbit: iterate " + std::to_string(j + 1) +
                               " left the open domain (not a self-map?)");
    }
    const double step = distance(next, record.points.back());
    record.points.push_back(std::move(next));
    record.boundary_distances.push_back(domain.boundary_distance(record.points.back()));

    if (step < tol.tol_orbit) {
      // Stagnation: refine and accept only a genuine fixed point.
      const auto refined =
          solve_fixed_point(domain, map, record.points.back(), tol.tol_fix);
      if (refined && map_residual(map, *refined) < tol.tol_fix) {
        record.outcome = OrbitOutcome::converged;
        record.limit = *refined;
      } else {
        record.outcome = OrbitOutcome::undecided;
      }
      return record;
    }

    const auto& d = record.boundary_distances;
    if (d.back() < tol.eps_div && d.size() >= 2) {
      const std::size_t window = std::min<std::size_t>(10, d.size() - 1);
      bool non_increasing = true;
      for (std::size_t k = d.size() - window; k < d.size(); ++k) {
        if (d[k] > d[k - 1] + 1e-15) {
          non_increasing = false;
          break;
        }
      }
      if (non_increasing) {
        record.outcome = OrbitOutcome::boundary_divergent;
        return record;
      }
    }
  }
  record.outcome = OrbitOutcome::undecided;
  return record;
}

std::optional<Point> solve_fixed_point(const DomainSpec& domain, const HoloMap& map,
                                       const Point& z0, double tol_fix,
                                       int max_steps) {
  domain.validate();
  if (map.dim() != domain.n) {
    throw std::invalid_argument("solve_fixed_point: map dimension mismatch");
  }
  if (!domain.contains(z0)) {
    throw std::invalid_argument("solve_fixed_point: start outside the domain");
  }
  if (!(tol_fix > 0.0)) throw std::invalid_argument("solve_fixed_point: tol_fix > 0");

  const int n = domain.n;
  // A candidate this close to the boundary is indistinguishable from a
  // boundary fixed point at the requested tolerance; reject it so maps whose
  // only fixed points sit on the boundary report failure instead of a
  // spurious interior root.
  const double boundary_guard = 10.0 * tol_fix;
  Point z = z0;
  for (int step = 0; step < max_steps; ++step) {
    const Point fz = map.evaluate(z);
    Eigen::VectorXcd F(n);
    for (int i = 0; i < n; ++i) F(i) = fz[i] - z[i];
    const double residual = F.norm();
    if (residual < tol_fix && domain.boundary_distance(z) > boundary_guard) {
      return z;
    }

    Eigen::MatrixXcd J = map.jacobian(z);
    for (int i = 0; i < n; ++i) J(i, i) -= 1.0;

    bool accepted = false;
    Point candidate(n);
    const Eigen::FullPivLU<Eigen::MatrixXcd> lu(J);
    if (lu.isInvertible()) {
      const Eigen::VectorXcd delta = lu.solve(-F);
      if (delta.allFinite()) {
        double t = 1.0;
        for (int halving = 0; halving < 30 && !accepted; ++halving, t *= 0.5) {
          for (int i = 0; i < n; ++i) candidate[i] = z[i] + t * delta(i);
          if (!domain.contains(candidate)) continue;
          if (map_residual(map, candidate) <= (1.0 - 0.25 * t) * residual) {
            accepted = true;
          }
        }
      }
    }
    if (!accepted) {
      // Plain iteration step; for a true self-map it stays inside.
      candidate = fz;
      if (!domain.contains(candidate)) return std::nullopt;
    }
    z = std::move(candidate);
  }
  return std::nullopt;
}

std::string to_string(MultiplicityFlag m) {
  switch (m) {
    case MultiplicityFlag::unique: return "unique";
    case MultiplicityFlag::multiple: return "multiple";
    case MultiplicityFlag::none_found: return "none_found";
  }
  throw std::logic_error("to_string(MultiplicityFlag): bad value");
}

namespace {

std::vector<Point> census_starts(const DomainSpec& domain, int grid_density) {
  const int g = grid_density;
  std::vector<Point> starts;
  if (domain.family == DomainFamily::annulus_product) {
    // Polar lattice per factor: g radii strictly inside (r, 1/r), g angles.
    const double r = domain.inner_radius;
    const double span = 1.0 / r - r;
    std::vector<Cplx> factor_values;
    factor_values.reserve(static_cast<std::size_t>(g) * g);
    for (int k = 0; k < g; ++k) {
      const double radius = r + (k + 1) * span / (g + 1);
      for (int l = 0; l < g; ++l) {
        const double theta = 2.0 * std::numbers::pi * l / g;
        factor_values.emplace_back(radius * std::cos(theta), radius * std::sin(theta));
      }
    }
    Point p(domain.n);
    std::vector<std::size_t> idx(domain.n, 0);
    while (true) {
      for (int i = 0; i < domain.n; ++i) p[i] = factor_values[idx[i]];
      starts.push_back(p);
      int i = domain.n - 1;
      while (i >= 0 && ++idx[i] == factor_values.size()) idx[i--] = 0;
      if (i < 0) break;
    }
    return starts;
  }

  // Real lattice over [-1, 1]^{2n}, kept when inside the open domain.
  std::vector<double> ticks(g);
  for (int k = 0; k < g; ++k) {
    ticks[k] = g == 1 ? 0.0 : -1.0 + 2.0 * k / (g - 1);
  }
  const int dims = 2 * domain.n;
  std::vector<int> idx(dims, 0);
  Point p(domain.n);
  while (true) {
    for (int i = 0; i < domain.n; ++i) {
      p[i] = Cplx(ticks[idx[2 * i]], ticks[idx[2 * i + 1]]);
    }
    if (domain.contains(p)) starts.push_back(p);
    int i = dims - 1;
    while (i >= 0 && ++idx[i] == g) idx[i--] = 0;
    if (i < 0) break;
  }
  return starts;
}

}  // namespace

FixedPointReport fixed_point_census(const DomainSpec& domain, const HoloMap& map,
                                    int grid_density, double merge_radius) {
  domain.validate();
  if (map.dim() != domain.n) {
    throw std::invalid_argument("fixed_point_census: map dimension mismatch");
  }
  if (grid_density < 1) {
    throw std::invalid_argument("fixed_point_census: need grid_density >= 1");
  }
  if (!(merge_radius > 0.0)) {
    throw std::invalid_argument("fixed_point_census: need merge_radius > 0");
  }

  const std::vector<Point> starts = census_starts(domain, grid_density);

  // Starts are independent; solve in parallel and merge deterministically.
  const std::size_t workers = std::max<std::size_t>(
      1, std::min<std::size_t>(std::thread::hardware_concurrency(),
                               starts.size() / 1024 + 1));
  std::vector<std::vector<Point>> found_per_worker(workers);
  auto run_chunk = [&](std::size_t w) {
    for (std::size_t s = w; s < starts.size(); s += workers) {
      const auto result = solve_fixed_point(domain, map, starts[s]);
      if (result) found_per_worker[w].push_back(*result);
    }
  };
  if (workers == 1) {
    run_chunk(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run_chunk, w);
    for (auto& t : threads) t.join();
  }

  std::vector<Point> found;
  for (auto& chunk : found_per_worker) {
    found.insert(found.end(), chunk.begin(), chunk.end());
  }
  std::sort(found.begin(), found.end(), lex_point_less);

  FixedPointReport report;
  report.starts = static_cast<int>(starts.size());
  report.converged_starts = static_cast<int>(found.size());
  report.merge_radius = merge_radius;
  report.grid_density = grid_density;

  std::vector<Point> distinct;
  for (const Point& candidate : found) {
    const bool merged = std::any_of(distinct.begin(), distinct.end(),
                                    [&](const Point& rep) {
                                      return distance(rep, candidate) <= merge_radius;
                                    });
    if (!merged) distinct.push_back(candidate);
  }

  for (const Point& a : distinct) {
    FixedPoint fp;
    fp.location = a;
    fp.residual = map_residual(map, a);
    fp.jacobian = map.jacobian(a);
    report.points.push_back(std::move(fp));
  }
  report.multiplicity = report.points.empty()   ? MultiplicityFlag::none_found
                        : report.points.size() == 1 ? MultiplicityFlag::unique
                                                    : MultiplicityFlag::multiple;
  report.merge_saturated = report.points.size() > 10;
  return report;
}

}  // namespace wco
