#include "wco/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "wco/operators.hpp"

namespace wco {

std::vector<Cplx> eigenvalues(const Eigen::MatrixXcd& M) {
  if (M.rows() != M.cols()) {
    throw std::invalid_argument("eigenvalues: matrix must be square");
  }
  if (!M.allFinite()) {
    throw std::invalid_argument("eigenvalues: matrix has non-finite entries");
  }
  if (M.rows() == 0) return {};
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(M, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalues: QR iteration did not converge (info=" +
                             std::to_string(static_cast<int>(solver.info())) + ")");
  }
  const auto& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

void sort_by_modulus(std::vector<Cplx>& values) {
  std::sort(values.begin(), values.end(), [](const Cplx& a, const Cplx& b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (ma != mb) return ma > mb;
    return std::arg(a) < std::arg(b);
  });
}

std::string to_string(SpectrumFormula f) {
  switch (f) {
    case SpectrumFormula::unweighted_powers: return "unweighted-powers";
    case SpectrumFormula::unweighted_products: return "unweighted-products";
    case SpectrumFormula::weighted_powers: return "weighted-powers";
    case SpectrumFormula::weighted_products: return "weighted-products";
  }
  throw std::logic_error("to_string(SpectrumFormula): bad value");
}

PredictedSet predicted_set(const PolyMap& psi, const Point& a,
                           const Eigen::MatrixXcd& jacobian, double modulus_floor,
                           SpectrumFormula formula) {
  if (!psi.is_scalar()) {
    throw std::invalid_argument("predicted_set: psi must be scalar");
  }
  if (!(modulus_floor > 0.0)) {
    throw std::invalid_argument("predicted_set: need modulus_floor > 0");
  }

  PredictedSet set;
  set.formula = to_string(formula);
  set.modulus_floor = modulus_floor;
  set.weight_at_fixed_point = psi.evaluate_scalar(a);
  set.jacobian_eigenvalues = eigenvalues(jacobian);
  sort_by_modulus(set.jacobian_eigenvalues);

  for (const Cplx& lambda : set.jacobian_eigenvalues) {
    if (std::abs(lambda) >= 1.0) {
      throw std::runtime_error(
          "predicted_set: predicted set not finitely enumerable below floor "
          "(Jacobian eigenvalue of modulus >= 1)");
    }
  }

  const Cplx scale = set.weight_at_fixed_point;
  constexpr double kDedupRadius = 1e-12;
  // Breadth-first expansion of products sigma, starting from 1; children of
  // a discarded product are smaller in modulus, so pruning at the floor is
  // exhaustive.
  std::vector<Cplx> sigmas;
  std::deque<Cplx> queue;
  if (std::abs(scale) >= modulus_floor) {
    sigmas.push_back(Cplx(1.0, 0.0));
    queue.push_back(Cplx(1.0, 0.0));
  }
  while (!queue.empty()) {
    const Cplx sigma = queue.front();
    queue.pop_front();
    for (const Cplx& lambda : set.jacobian_eigenvalues) {
      const Cplx next = sigma * lambda;
      if (std::abs(scale * next) < modulus_floor) continue;
      const bool seen = std::any_of(sigmas.begin(), sigmas.end(), [&](const Cplx& s) {
        return std::abs(s - next) <= kDedupRadius;
      });
      if (seen) continue;
      sigmas.push_back(next);
      queue.push_back(next);
    }
  }

  set.values.push_back(Cplx(0.0, 0.0));
  for (const Cplx& sigma : sigmas) set.values.push_back(scale * sigma);
  sort_by_modulus(set.values);
  return set;
}

namespace {

/// Greedy pairing for one ladder member: predicted values in decreasing
/// modulus each take the nearest unused computed eigenvalue. Returns the
/// per-predicted differences (aligned with `predicted`, which must already
/// be sorted by decreasing modulus) and, optionally, the chosen partners.
std::vector<double> greedy_differences(const std::vector<Cplx>& predicted,
                                       std::vector<Cplx> computed,
                                       std::vector<Cplx>* partners) {
  std::vector<bool> used(computed.size(), false);
  std::vector<double> diffs(predicted.size(),
                            std::numeric_limits<double>::infinity());
  if (partners) partners->assign(predicted.size(), Cplx(0.0, 0.0));
  for (std::size_t p = 0; p < predicted.size(); ++p) {
    std::size_t best = computed.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < computed.size(); ++c) {
      if (used[c]) continue;
      const double dist = std::abs(computed[c] - predicted[p]);
      if (dist < best_dist) {
        best_dist = dist;
        best = c;
      }
    }
    if (best == computed.size()) continue;  // no computed values left
    used[best] = true;
    diffs[p] = best_dist;
    if (partners) (*partners)[p] = computed[best];
  }
  return diffs;
}

}  // namespace

SpectrumReport match_spectra(const std::vector<int>& n_ladder,
                             const std::vector<std::vector<Cplx>>& computed,
                             const PredictedSet& predicted, double tol_match) {
  if (n_ladder.empty() || computed.size() != n_ladder.size()) {
    throw std::invalid_argument("match_spectra: ladder and computed sets must align");
  }
  if (!(tol_match > 0.0)) {
    throw std::invalid_argument("match_spectra: need tol_match > 0");
  }

  SpectrumReport report;
  report.n_ladder = n_ladder;
  report.computed = computed;
  for (auto& values : report.computed) sort_by_modulus(values);
  report.predicted = predicted;
  sort_by_modulus(report.predicted.values);
  report.tol_match = tol_match;

  const std::vector<Cplx>& targets = report.predicted.values;
  std::vector<std::vector<double>> diffs_per_n;
  diffs_per_n.reserve(n_ladder.size());
  std::vector<Cplx> partners;
  for (std::size_t i = 0; i < n_ladder.size(); ++i) {
    const bool last = i + 1 == n_ladder.size();
    diffs_per_n.push_back(greedy_differences(targets, report.computed[i],
                                             last ? &partners : nullptr));
  }

  const std::vector<double>& final_diffs = diffs_per_n.back();
  report.matching.resize(targets.size());
  for (std::size_t p = 0; p < targets.size(); ++p) {
    MatchRow& row = report.matching[p];
    row.predicted = targets[p];
    row.nearest_computed = partners[p];
    row.difference = final_diffs[p];
    row.difference_per_n.reserve(n_ladder.size());
    for (const auto& diffs : diffs_per_n) row.difference_per_n.push_back(diffs[p]);
    row.matched = row.difference < tol_match;
  }

  // Computed eigenvalues at the largest N that no predicted value claimed
  // and that sit above the enumeration floor.
  {
    const std::vector<Cplx>& last = report.computed.back();
    std::vector<bool> used(last.size(), false);
    for (std::size_t p = 0; p < targets.size(); ++p) {
      if (!std::isfinite(final_diffs[p])) continue;
      for (std::size_t c = 0; c < last.size(); ++c) {
        if (!used[c] && last[c] == report.matching[p].nearest_computed) {
          used[c] = true;
          break;
        }
      }
    }
    for (std::size_t c = 0; c < last.size(); ++c) {
      if (!used[c] && std::abs(last[c]) >= predicted.modulus_floor) {
        report.unmatched_computed_above_floor.push_back(last[c]);
      }
    }
  }

  // Verdict. Differences along the ladder may sit at the rounding floor once
  // the truncation error is exhausted; the monotonicity check carries a
  // small additive slack so eigensolver jitter cannot flip it.
  constexpr double kDriftSlack = 1e-12;
  bool ok = true;
  for (std::size_t p = 0; p < targets.size(); ++p) {
    if (std::abs(targets[p]) >= 2.0 * tol_match && !report.matching[p].matched) {
      ok = false;
    }
  }
  const std::size_t top_half = (targets.size() + 1) / 2;
  for (std::size_t p = 0; p < top_half && ok; ++p) {
    const auto& d = report.matching[p].difference_per_n;
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      if (d[i + 1] > d[i] + kDriftSlack) {
        ok = false;
        break;
      }
    }
  }
  report.supports_formula = ok;
  report.verdict = ok ? "supports-formula" : "not-supported";
  return report;
}

ConvergenceStudy truncation_convergence_study(const SpaceSpec& space,
                                              const PolyMap& psi, const PolyMap& phi,
                                              const std::vector<int>& n_ladder,
                                              int k_top) {
  if (n_ladder.empty()) {
    throw std::invalid_argument("truncation_convergence_study: empty ladder");
  }
  for (std::size_t i = 0; i + 1 < n_ladder.size(); ++i) {
    if (n_ladder[i] >= n_ladder[i + 1]) {
      throw std::invalid_argument(
          "truncation_convergence_study: ladder must be strictly increasing");
    }
  }
  if (k_top < 1) {
    throw std::invalid_argument("truncation_convergence_study: need k_top >= 1");
  }

  ConvergenceStudy study;
  study.n_ladder = n_ladder;
  for (int N : n_ladder) {
    const OperatorMatrix M = build_matrix(space, psi, phi, N);
    std::vector<Cplx> eigs = eigenvalues(M.entries);
    sort_by_modulus(eigs);
    if (static_cast<int>(eigs.size()) > k_top) eigs.resize(k_top);
    study.top_eigenvalues.push_back(std::move(eigs));
  }
  for (std::size_t i = 0; i + 1 < study.top_eigenvalues.size(); ++i) {
    const auto& a = study.top_eigenvalues[i];
    const auto& b = study.top_eigenvalues[i + 1];
    std::vector<double> drift;
    const std::size_t count = std::min(a.size(), b.size());
    drift.reserve(count);
    for (std::size_t j = 0; j < count; ++j) drift.push_back(std::abs(b[j] - a[j]));
    study.drift.push_back(std::move(drift));
  }
  return study;
}

}  // namespace wco
