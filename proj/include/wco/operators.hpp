#ifndef WCO_OPERATORS_HPP
#define WCO_OPERATORS_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "wco/spaces.hpp"

namespace wco {

/// W_{psi,phi} f = psi (f o phi), compressed to the span of the monomials of
/// total degree <= N against the orthonormal basis e_g = z^g / sqrt(c_g).
/// Column b holds the coefficients of W(e_b): entry(g, b) = d_g sqrt(c_g/c_b)
/// where psi phi^b = sum_g d_g z^g. Rows and columns follow the canonical
/// multi-index order.
struct OperatorMatrix {
  SpaceSpec space;
  PolyMap weight;  // psi, scalar
  PolyMap symbol;  // phi, self-map of the domain
  int truncation_degree;
  std::vector<MultiIndex> basis;
  Eigen::MatrixXcd entries;
};

/// Builds the compression. Checks that phi maps 200 deterministic interior
/// samples back into the open domain and throws if any sample escapes.
OperatorMatrix build_matrix(const SpaceSpec& space, const PolyMap& psi,
                            const PolyMap& phi, int N);

/// Q(z) = |psi(z)|^2 K(phi(z), phi(z)) / K(z, z). The squared norm of the
/// adjoint applied to the normalized kernel at z; it must decay to zero
/// toward the boundary when the operator is compact.
double genzhu_value(const SpaceSpec& space, const PolyMap& psi,
                    const PolyMap& phi, std::span<const Cplx> z);

struct GenzhuRow {
  Point z;
  double boundary_distance = 0.0;
  double q = 0.0;
};

struct GenzhuScan {
  std::vector<GenzhuRow> rows;           // ordered by (direction, shell)
  std::vector<double> epsilons;          // ladder order
  std::vector<double> max_q_per_shell;   // aligned with epsilons
  double max_q_innermost = 0.0;
  double max_q_outermost = 0.0;
  std::string verdict;                   // "decays" | "no-decay"
};

GenzhuScan genzhu_scan(const SpaceSpec& space, const PolyMap& psi,
                       const PolyMap& phi, const BoundaryLadder& ladder);

/// Distance between the compressed adjoint action on the kernel at z and the
/// exact identity W* K_z = conj(psi(z)) K_{phi(z)}. The head block compares
/// M^H v_z against conj(psi(z)) v_{phi(z)} on degrees <= N; on top of that
/// the norm accounts for the coefficients of K_{phi(z)} beyond degree N,
/// which no degree-N compression can produce. Decays to zero as N grows for
/// any self-map with phi(z) in the open domain.
double adjoint_kernel_residual(const SpaceSpec& space, const PolyMap& psi,
                               const PolyMap& phi, std::span<const Cplx> z,
                               int N);

struct CompactnessReport {
  std::vector<int> n_ladder;
  std::vector<double> singular_values;  // largest N, decreasing
  double tail_decay_rate = 0.0;         // fitted geometric rate over tail half
  // Max relative change of the top-10 singular values between consecutive
  // ladder members; the verdict uses the final step (has the ladder
  // stabilized by its end).
  std::vector<double> stabilization_per_step;
  double top_stabilization = 0.0;
  std::string verdict;  // "consistent-with-compact" | "not-compact-like" | "inconclusive"
};

/// Heuristic surrogate for compactness at finite truncation: singular value
/// decay of the largest-N compression plus stabilization of the top singular
/// values across the ladder. Requires at least 3 ladder members with
/// strictly increasing N. The verdict is a proxy, not a certificate.
CompactnessReport compactness_proxy(std::span<const OperatorMatrix> ladder);

}  // namespace wco

#endif
