#ifndef WCO_SPECTRA_HPP
#define WCO_SPECTRA_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "wco/spaces.hpp"

namespace wco {

/// All eigenvalues of a dense complex matrix with algebraic multiplicity,
/// via Schur reduction (Hessenberg + shifted QR). Backward stable: the
/// returned values are exact eigenvalues of M + E with ||E|| = O(u ||M||).
/// Throws on iteration failure. Unsorted.
std::vector<Cplx> eigenvalues(const Eigen::MatrixXcd& M);

/// Decreasing modulus, ties by ascending argument. The report order.
void sort_by_modulus(std::vector<Cplx>& values);

/// Which spectrum formula a predicted set realizes. In one variable the
/// product set of the single Jacobian eigenvalue reduces to its powers, so
/// the enumeration is shared and the tag records intent.
enum class SpectrumFormula {
  unweighted_powers,    // composition operator, disk: {0, 1, s^j}
  unweighted_products,  // composition operator, several variables
  weighted_powers,      // weighted, disk: {0, psi(a)} u {psi(a) s^j}
  weighted_products,    // weighted, several variables
};

std::string to_string(SpectrumFormula f);

struct PredictedSet {
  std::vector<Cplx> values;  // {0} u {psi(a) sigma}, decreasing modulus
  Cplx weight_at_fixed_point{1.0, 0.0};
  std::vector<Cplx> jacobian_eigenvalues;
  std::string formula;       // provenance tag
  double modulus_floor = 1e-3;
};

/// {0} together with psi(a) sigma, where sigma runs over 1 and all products
/// of Jacobian eigenvalues with repetition, kept while the predicted value
/// stays at or above the modulus floor. Products are deduplicated within
/// 1e-12. Throws if some Jacobian eigenvalue has modulus >= 1 (the set is
/// then not finitely enumerable below the floor).
PredictedSet predicted_set(const PolyMap& psi, const Point& a,
                           const Eigen::MatrixXcd& jacobian,
                           double modulus_floor, SpectrumFormula formula);

struct MatchRow {
  Cplx predicted;
  Cplx nearest_computed;                  // at the largest N
  double difference = 0.0;                // at the largest N
  std::vector<double> difference_per_n;   // ladder order
  bool matched = false;                   // within tol_match at the largest N
};

struct SpectrumReport {
  std::vector<int> n_ladder;
  std::vector<std::vector<Cplx>> computed;  // per ladder member, sorted
  PredictedSet predicted;
  std::vector<MatchRow> matching;           // decreasing predicted modulus
  std::vector<Cplx> unmatched_computed_above_floor;
  double tol_match = 1e-4;
  bool supports_formula = false;
  std::string verdict;  // "supports-formula" | "not-supported"
};

/// Greedy matching in decreasing predicted modulus: each predicted value
/// pairs with the nearest still-unpaired computed eigenvalue. The predicted
/// value 0 is matched by the smallest-modulus computed eigenvalue (0 is a
/// limit point of a compact spectrum, not an isolated target). Verdict is
/// "supports-formula" when every predicted value of modulus >= 2 tol_match
/// matches within tol_match at the largest N and the differences for the top
/// half of the predicted set do not grow along the ladder.
SpectrumReport match_spectra(const std::vector<int>& n_ladder,
                             const std::vector<std::vector<Cplx>>& computed,
                             const PredictedSet& predicted, double tol_match);

struct ConvergenceStudy {
  std::vector<int> n_ladder;
  std::vector<std::vector<Cplx>> top_eigenvalues;  // per N, k_top each
  std::vector<std::vector<double>> drift;  // [i][j]: |top_j(N_{i+1}) - top_j(N_i)|
};

/// Top-k eigenvalues of the compression per ladder member and their drift
/// between consecutive truncation degrees.
ConvergenceStudy truncation_convergence_study(const SpaceSpec& space,
                                              const PolyMap& psi,
                                              const PolyMap& phi,
                                              const std::vector<int>& n_ladder,
                                              int k_top);

}  // namespace wco

#endif
