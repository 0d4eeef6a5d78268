#ifndef WCO_SPACES_HPP
#define WCO_SPACES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wco/series.hpp"

namespace wco {

/// Seed for boundary direction generation on the ball; committed constant so
/// reports are reproducible. Overridable through BoundaryLadder::seed.
inline constexpr std::uint64_t kDefaultDirectionSeed = 0x77c0b5a1d1a7u;

/// Seed for deterministic interior sample grids (self-map checks, orbit
/// starts).
inline constexpr std::uint64_t kDefaultInteriorSeed = 0x1c97e5u;

enum class DomainFamily { disk, ball, polydisk, annulus_product };

std::string to_string(DomainFamily f);
DomainFamily domain_family_from_string(const std::string& s);

/// Bounded domain underlying a function space. disk/ball use the Euclidean
/// norm, polydisk the max norm; annulus_product is the n-fold product of the
/// annulus r < |w| < 1/r and exists only for the fixed-point census.
struct DomainSpec {
  DomainFamily family = DomainFamily::disk;
  int n = 1;
  double inner_radius = 0.0;  // annulus_product only, 0 < r < 1

  static DomainSpec disk();
  static DomainSpec ball(int n);
  static DomainSpec polydisk(int n);
  static DomainSpec annulus_product(int n, double r);

  void validate() const;
  bool contains(std::span<const Cplx> z) const;
  double boundary_distance(std::span<const Cplx> z) const;
  /// Largest attainable boundary distance; boundary ladders must stay below.
  double inradius() const;
};

enum class SpaceFamily {
  weighted_hardy_disk,
  hardy_ball,
  bergman_ball,
  hardy_polydisk,
  bergman_polydisk,
};

std::string to_string(SpaceFamily f);
SpaceFamily space_family_from_string(const std::string& s);

/// Weight sequence b_j for weighted_hardy_disk: either a named rule ("ones")
/// or an explicit positive list b_0..b_N.
struct WeightRule {
  std::string rule;          // "ones", or empty when a list is given
  std::vector<double> list;  // explicit values, used when rule is empty

  static WeightRule ones();
  static WeightRule explicit_list(std::vector<double> values);

  bool is_ones() const { return rule == "ones"; }
  /// b_j; throws std::out_of_range past the end of an explicit list.
  double b(int j) const;
  void validate() const;
};

/// A functional Hilbert space preset: domain, monomial weight rule and
/// closed-form reproducing kernel. Monomial weights c_g = ||z^g||^2 are
/// strictly positive for every preset.
struct SpaceSpec {
  DomainSpec domain;
  SpaceFamily family = SpaceFamily::weighted_hardy_disk;
  WeightRule b;        // weighted_hardy_disk only
  double alpha = 0.0;  // Bergman families only, > -1

  /// H^2 of the unit disk: weighted_hardy_disk with b_j = 1.
  static SpaceSpec classical_hardy_disk();
  static SpaceSpec weighted_hardy_disk(WeightRule rule);
  static SpaceSpec hardy_ball(int n);
  static SpaceSpec bergman_ball(int n, double alpha);
  static SpaceSpec hardy_polydisk(int n);
  static SpaceSpec bergman_polydisk(int n, double alpha);

  void validate() const;
};

/// c_g = ||z^g||^2 for the preset.
double monomial_weight(const SpaceSpec& space, const MultiIndex& g);

/// Closed-form kernel K(z, w); weighted_hardy_disk with a general b sequence
/// falls back to the series sum (error if it fails to converge by 500 terms).
/// Throws if a point lies outside the closure of the domain.
Cplx kernel_value(const SpaceSpec& space, std::span<const Cplx> z,
                  std::span<const Cplx> w);

/// Degree-N partial sum sum_{|g|<=N} z^g conj(w)^g / c_g; the brute-force
/// cross-check for kernel_value.
Cplx kernel_series_value(const SpaceSpec& space, std::span<const Cplx> z,
                         std::span<const Cplx> w, int N);

/// <p, k_z> = p(z)/sqrt(K(z,z)) for the unit-normalized kernel k_z; p must be
/// a scalar polynomial.
Cplx normalized_kernel_pairing(const SpaceSpec& space, const PolyMap& p,
                               std::span<const Cplx> z);

/// Shell structure toward the boundary: `directions` quasi-uniform boundary
/// directions, each scaled inward to the distances in `epsilons`.
struct BoundaryLadder {
  int directions = 16;
  std::vector<double> epsilons = {1e-1, 1e-2, 1e-3};
  std::uint64_t seed = kDefaultDirectionSeed;
};

/// Deterministic boundary samples ordered by (direction, shell index).
/// disk/polydisk use roots of unity per factor (a polydisk gets the full
/// product of per-factor directions); the ball uses seeded quasi-uniform
/// sphere directions. Not defined for annulus_product.
std::vector<Point> boundary_samples(const DomainSpec& domain,
                                    const BoundaryLadder& ladder);

/// Deterministic interior sample set (seeded, uniform over the domain).
std::vector<Point> interior_samples(const DomainSpec& domain, int count,
                                    std::uint64_t seed = kDefaultInteriorSeed);

struct WeightLiminfEstimate {
  double liminf = 0.0;               // min |psi| over the innermost shell
  double innermost_epsilon = 0.0;
  bool bounded_away_from_zero = false;
  double threshold = 1e-6;
  std::vector<double> shell_minima;  // min |psi| per shell, ladder order
};

/// Estimate of liminf_{z->boundary} |psi(z)| from the sample shells; flags
/// the symbol as bounded away from zero when the innermost minimum exceeds
/// the threshold.
WeightLiminfEstimate estimate_weight_liminf(const SpaceSpec& space,
                                            const PolyMap& psi,
                                            const BoundaryLadder& ladder,
                                            double threshold = 1e-6);

}  // namespace wco

#endif
