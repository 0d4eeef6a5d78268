#ifndef WCO_DYNAMICS_HPP
#define WCO_DYNAMICS_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "wco/spaces.hpp"

namespace wco {

/// A self-map the dynamics routines can iterate and differentiate: either a
/// polynomial map, or the built-in componentwise inverse
/// z -> (1/z_1, ..., 1/z_n) on an annulus product. The inverse map is a
/// named special case because polynomial maps exclude Laurent terms; it only
/// needs pointwise evaluation and its diagonal Jacobian -1/z_i^2.
class HoloMap {
 public:
  static HoloMap polynomial(PolyMap map);
  static HoloMap componentwise_inverse(int n);

  int dim() const { return n_; }
  bool is_polynomial() const { return poly_.has_value(); }
  const PolyMap& poly() const;

  Point evaluate(std::span<const Cplx> z) const;
  Eigen::MatrixXcd jacobian(std::span<const Cplx> z) const;

 private:
  HoloMap() = default;
  int n_ = 0;
  std::optional<PolyMap> poly_;
};

/// Exact polynomial Jacobian, entry (i, k) = d phi_i / d z_k at a.
Eigen::MatrixXcd jacobian_at(const PolyMap& phi, const Point& a);

struct OrbitTolerances {
  int max_steps = 10000;     // J
  double tol_orbit = 1e-12;  // consecutive-iterate stagnation
  double tol_fix = 1e-12;    // fixed-point residual after refinement
  double eps_div = 1e-6;     // boundary distance for divergence
};

enum class OrbitOutcome { converged, boundary_divergent, undecided };

std::string to_string(OrbitOutcome o);

struct OrbitRecord {
  Point start;
  std::vector<Point> points;               // phi^(j)(start), j = 0..J
  std::vector<double> boundary_distances;  // d(points[j], boundary)
  OrbitOutcome outcome = OrbitOutcome::undecided;
  Point limit;                             // converged only, refined
};

/// Iterates phi from z0, stopping early on convergence (consecutive iterates
/// within tol_orbit, then Newton-refined and accepted only if the refined
/// point satisfies tol_fix) or boundary divergence (distance below eps_div
/// with the trailing distances non-increasing). Throws if an iterate leaves
/// the open domain, and on annulus products, where no convergence dichotomy
/// applies.
OrbitRecord iterate_orbit(const DomainSpec& domain, const HoloMap& map,
                          const Point& z0, const OrbitTolerances& tol = {});

/// Damped Newton on F(z) = phi(z) - z with the exact Jacobian, falling back
/// to a plain iteration step whenever no damped Newton step stays inside the
/// domain and reduces ||F||. Success needs |phi(a) - a| < tol_fix AND a
/// boundary distance above 10 tol_fix (closer candidates are treated as
/// boundary fixed points). Empty result when max_steps run out.
std::optional<Point> solve_fixed_point(const DomainSpec& domain, const HoloMap& map,
                                       const Point& z0, double tol_fix = 1e-12,
                                       int max_steps = 200);

struct FixedPoint {
  Point location;
  double residual = 0.0;  // |phi(a) - a|
  Eigen::MatrixXcd jacobian;
};

enum class MultiplicityFlag { unique, multiple, none_found };

std::string to_string(MultiplicityFlag m);

struct FixedPointReport {
  std::vector<FixedPoint> points;  // canonical order, pairwise > merge_radius
  MultiplicityFlag multiplicity = MultiplicityFlag::none_found;
  bool merge_saturated = false;    // a large fraction of starts ended distinct
  int starts = 0;
  int converged_starts = 0;
  double merge_radius = 1e-8;
  int grid_density = 9;
};

/// Runs solve_fixed_point from a deterministic lattice of starts (per real
/// dimension; annulus products use a polar lattice per factor), merges the
/// results within merge_radius, and reports the distinct points with their
/// Jacobians. Points are sorted lexicographically by (Re, Im) coordinates.
FixedPointReport fixed_point_census(const DomainSpec& domain, const HoloMap& map,
                                    int grid_density = 9,
                                    double merge_radius = 1e-8);

}  // namespace wco

#endif
