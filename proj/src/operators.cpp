#include "wco/operators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "wco/spectra.hpp"

namespace wco {

namespace {

void require_symbols(const SpaceSpec& space, const PolyMap& psi, const PolyMap& phi,
                     const char* who) {
  const int n = space.domain.n;
  if (!psi.is_scalar()) {
    throw std::invalid_argument(std::string(who) + ": weight symbol must be scalar");
  }
  if (psi.vars_in() != n || phi.vars_in() != n || phi.vars_out() != n) {
    throw std::invalid_argument(std::string(who) + ": symbol dimension mismatch");
  }
}

/// Orthonormal-basis coordinates of K_z up to degree N: conj(z^g)/sqrt(c_g).
Eigen::VectorXcd kernel_coordinates(const SpaceSpec& space,
                                    const std::vector<MultiIndex>& basis,
                                    std::span<const Cplx> z) {
  const int n = space.domain.n;
  int max_deg = 0;
  for (const auto& g : basis) max_deg = std::max(max_deg, total_degree(g));
  std::vector<std::vector<Cplx>> powers(n);
  for (int i = 0; i < n; ++i) {
    powers[i].resize(max_deg + 1);
    powers[i][0] = Cplx(1.0, 0.0);
    for (int k = 1; k <= max_deg; ++k) powers[i][k] = powers[i][k - 1] * z[i];
  }
  Eigen::VectorXcd v(basis.size());
  for (std::size_t r = 0; r < basis.size(); ++r) {
    Cplx zg(1.0, 0.0);
    for (int i = 0; i < n; ++i) zg *= powers[i][basis[r][i]];
    v(static_cast<Eigen::Index>(r)) =
        std::conj(zg) / std::sqrt(monomial_weight(space, basis[r]));
  }
  return v;
}

}  // namespace

OperatorMatrix build_matrix(const SpaceSpec& space, const PolyMap& psi,
                            const PolyMap& phi, int N) {
  space.validate();
  require_symbols(space, psi, phi, "build_matrix");
  if (N < 0) throw std::invalid_argument("build_matrix: need N >= 0");

  // Sampled self-map check; a certified containment proof is out of scope.
  for (const Point& z : interior_samples(space.domain, 200)) {
    const Point image = phi.evaluate(z);
    if (!space.domain.contains(image)) {
      throw std::runtime_error(
          "build_matrix: composition symbol leaves the domain at an interior sample");
    }
  }

  OperatorMatrix M{space, psi, phi, N,
                   enumerate_multi_indices(space.domain.n, N),
                   Eigen::MatrixXcd()};
  const Eigen::Index dim = static_cast<Eigen::Index>(M.basis.size());
  M.entries.resize(dim, dim);

  std::vector<double> sqrt_weight(M.basis.size());
  for (std::size_t r = 0; r < M.basis.size(); ++r) {
    sqrt_weight[r] = std::sqrt(monomial_weight(space, M.basis[r]));
  }

  const TruncatedSeries& psi_series = psi.component(0);
  for (std::size_t col = 0; col < M.basis.size(); ++col) {
    const TruncatedSeries column =
        series_multiply(psi_series, monomial_of_map(phi, M.basis[col], N), N);
    const auto coeffs = column.coefficients();
    for (std::size_t row = 0; row < M.basis.size(); ++row) {
      M.entries(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
          coeffs[row] * (sqrt_weight[row] / sqrt_weight[col]);
    }
  }
  return M;
}

double genzhu_value(const SpaceSpec& space, const PolyMap& psi, const PolyMap& phi,
                    std::span<const Cplx> z) {
  require_symbols(space, psi, phi, "genzhu_value");
  const Point image = phi.evaluate(z);
  if (!space.domain.contains(image)) {
    throw std::runtime_error("genzhu_value: phi(z) lies outside the domain");
  }
  const double k_zz = kernel_value(space, z, z).real();
  const double k_ff = kernel_value(space, image, image).real();
  const double psi_abs = std::abs(psi.evaluate_scalar(z));
  return psi_abs * psi_abs * k_ff / k_zz;
}

GenzhuScan genzhu_scan(const SpaceSpec& space, const PolyMap& psi,
                       const PolyMap& phi, const BoundaryLadder& ladder) {
  if (ladder.epsilons.empty()) {
    throw std::invalid_argument("genzhu_scan: empty shell ladder");
  }
  const auto samples = boundary_samples(space.domain, ladder);
  const std::size_t shells = ladder.epsilons.size();

  GenzhuScan scan;
  scan.epsilons = ladder.epsilons;
  scan.max_q_per_shell.assign(shells, 0.0);
  scan.rows.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    GenzhuRow row;
    row.z = samples[i];
    row.boundary_distance = space.domain.boundary_distance(samples[i]);
    row.q = genzhu_value(space, psi, phi, samples[i]);
    scan.max_q_per_shell[i % shells] =
        std::max(scan.max_q_per_shell[i % shells], row.q);
    scan.rows.push_back(std::move(row));
  }

  const auto innermost = static_cast<std::size_t>(
      std::min_element(scan.epsilons.begin(), scan.epsilons.end()) -
      scan.epsilons.begin());
  const auto outermost = static_cast<std::size_t>(
      std::max_element(scan.epsilons.begin(), scan.epsilons.end()) -
      scan.epsilons.begin());
  scan.max_q_innermost = scan.max_q_per_shell[innermost];
  scan.max_q_outermost = scan.max_q_per_shell[outermost];
  scan.verdict = (shells >= 2 && scan.max_q_innermost <= 0.5 * scan.max_q_outermost)
                     ? "decays"
                     : "no-decay";
  return scan;
}

double adjoint_kernel_residual(const SpaceSpec& space, const PolyMap& psi,
                               const PolyMap& phi, std::span<const Cplx> z, int N) {
  require_symbols(space, psi, phi, "adjoint_kernel_residual");
  if (!space.domain.contains(z)) {
    throw std::invalid_argument("adjoint_kernel_residual: z outside the domain");
  }
  const Point image = phi.evaluate(z);
  if (!space.domain.contains(image)) {
    throw std::runtime_error("adjoint_kernel_residual: phi(z) outside the domain");
  }

  const OperatorMatrix M = build_matrix(space, psi, phi, N);
  const Eigen::VectorXcd v_z = kernel_coordinates(space, M.basis, z);
  const Eigen::VectorXcd v_image = kernel_coordinates(space, M.basis, image);
  const Cplx psi_conj = std::conj(psi.evaluate_scalar(z));
  const double head =
      (M.entries.adjoint() * v_z - psi_conj * v_image).squaredNorm();

  // Coefficients of K_{phi(z)} beyond degree N: summed shell by shell (all
  // terms positive, so no cancellation) until they stop contributing.
  const int n = space.domain.n;
  double tail = 0.0;
  const int max_shells = 2000;
  int degree = N;
  for (int s = 1; s <= max_shells; ++s) {
    degree = N + s;
    double shell = 0.0;
    for (const MultiIndex& g : enumerate_degree(n, degree)) {
      double term = 1.0;
      for (int i = 0; i < n; ++i) term *= std::pow(std::abs(image[i]), 2 * g[i]);
      shell += term / monomial_weight(space, g);
    }
    tail += shell;
    if (shell < 1e-30 * (1.0 + tail + head)) break;
    if (s == max_shells) {
      throw std::runtime_error(
          "adjoint_kernel_residual: kernel tail did not converge; phi(z) too "
          "close to the boundary");
    }
  }
  const double psi_abs = std::abs(psi.evaluate_scalar(z));
  return std::sqrt(head + psi_abs * psi_abs * tail);
}

CompactnessReport compactness_proxy(std::span<const OperatorMatrix> ladder) {
  if (ladder.size() < 3) {
    throw std::invalid_argument("compactness_proxy: need at least 3 ladder members");
  }
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
    if (ladder[i].truncation_degree >= ladder[i + 1].truncation_degree) {
      throw std::invalid_argument("compactness_proxy: ladder must be strictly increasing");
    }
  }

  // Singular values as sqrt of the spectrum of M^H M.
  const auto singular_values = [](const OperatorMatrix& M) {
    const Eigen::MatrixXcd gram = M.entries.adjoint() * M.entries;
    std::vector<Cplx> eigs = eigenvalues(gram);
    std::vector<double> sv;
    sv.reserve(eigs.size());
    for (const Cplx& e : eigs) sv.push_back(std::sqrt(std::max(0.0, e.real())));
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
  };

  CompactnessReport report;
  std::vector<std::vector<double>> all_sv;
  all_sv.reserve(ladder.size());
  for (const OperatorMatrix& M : ladder) {
    report.n_ladder.push_back(M.truncation_degree);
    all_sv.push_back(singular_values(M));
  }
  report.singular_values = all_sv.back();

  // Geometric decay rate fitted on the tail half of the usable spectrum.
  const std::vector<double>& sv = report.singular_values;
  const double floor = 1e-14 * std::max(sv.front(), std::numeric_limits<double>::min());
  std::size_t usable = sv.size();
  while (usable > 0 && sv[usable - 1] < floor) --usable;
  const std::size_t start = usable / 2;
  if (usable - start >= 2) {
    // Least squares slope of log sv against the index.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double count = static_cast<double>(usable - start);
    for (std::size_t j = start; j < usable; ++j) {
      const double x = static_cast<double>(j);
      const double y = std::log(sv[j]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double denom = count * sxx - sx * sx;
    report.tail_decay_rate = denom > 0 ? std::exp((count * sxy - sx * sy) / denom) : 0.0;
  } else {
    // Everything beyond the head already sits at the numerical floor.
    report.tail_decay_rate = 0.0;
  }

  for (std::size_t k = 0; k + 1 < all_sv.size(); ++k) {
    const std::size_t top = std::min<std::size_t>(
        10, std::min(all_sv[k].size(), all_sv[k + 1].size()));
    double step = 0.0;
    for (std::size_t j = 0; j < top; ++j) {
      const double denom = std::max(all_sv[k][j], std::numeric_limits<double>::min());
      step = std::max(step, std::abs(all_sv[k + 1][j] - all_sv[k][j]) / denom);
    }
    report.stabilization_per_step.push_back(step);
  }
  report.top_stabilization = report.stabilization_per_step.back();

  const bool stable = report.top_stabilization < 1e-3;
  if (stable && report.tail_decay_rate < 0.95) {
    report.verdict = "consistent-with-compact";
  } else if (stable) {
    report.verdict = "not-compact-like";
  } else {
    report.verdict = "inconclusive";
  }
  return report;
}

}  // namespace wco
