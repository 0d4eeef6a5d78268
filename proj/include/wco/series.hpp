#ifndef WCO_SERIES_HPP
#define WCO_SERIES_HPP

#include <complex>
#include <map>
#include <span>
#include <vector>

#include "wco/multiindex.hpp"

namespace wco {

using Cplx = std::complex<double>;

/// A point of C^n.
using Point = std::vector<Cplx>;

/// Power series in n variables truncated at total degree N. Coefficients are
/// stored densely over all |g| <= N in the canonical multi-index order; a
/// missing monomial is a zero coefficient. Addition and multiplication close
/// over the cap: products of degree > N are discarded.
///
/// Values are immutable in normal use (construct, then read); the setter
/// exists for building polynomials term by term.
class TruncatedSeries {
 public:
  TruncatedSeries(int n_vars, int degree_cap);

  static TruncatedSeries constant(int n_vars, int degree_cap, Cplx value);
  static TruncatedSeries monomial(int n_vars, int degree_cap,
                                  const MultiIndex& g, Cplx value);

  int vars() const { return n_vars_; }
  int degree_cap() const { return degree_cap_; }

  /// Dense view in canonical order, length basis_size(vars, degree_cap).
  std::span<const Cplx> coefficients() const { return coeffs_; }

  /// Coefficient of z^g; zero for |g| > cap.
  Cplx coefficient(const MultiIndex& g) const;

  /// Throws if |g| > cap.
  void set_coefficient(const MultiIndex& g, Cplx value);

  /// Largest |g| with a nonzero coefficient (0 for the zero series).
  int degree() const;

  bool is_zero() const;

  /// Same series under a different cap; coefficients above the new cap are
  /// dropped.
  TruncatedSeries truncated(int new_cap) const;

  /// Exact evaluation at a point (finite sum of monomials).
  Cplx evaluate(std::span<const Cplx> z) const;

  /// Sparse map view in canonical order; zero coefficients are skipped.
  std::map<MultiIndex, Cplx, GradedLexLess> coefficient_map() const;

  TruncatedSeries& operator+=(const TruncatedSeries& rhs);
  TruncatedSeries& operator-=(const TruncatedSeries& rhs);
  TruncatedSeries& operator*=(Cplx scale);
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) {
    return a += b;
  }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) {
    return a -= b;
  }
  friend TruncatedSeries operator*(Cplx c, TruncatedSeries s) { return s *= c; }

 private:
  int n_vars_;
  int degree_cap_;
  std::vector<Cplx> coeffs_;  // canonical order, dense
};

/// Convolution product truncated at total degree `cap`.
TruncatedSeries series_multiply(const TruncatedSeries& a,
                                const TruncatedSeries& b, int cap);

/// s^k with every intermediate product truncated at `cap`; binary powering.
TruncatedSeries series_pow(const TruncatedSeries& s, int k, int cap);

/// d/dz_var, exact.
TruncatedSeries series_derivative(const TruncatedSeries& s, int var);

/// Tuple of polynomials C^{n_in} -> C^{n_out} with complex coefficients.
/// Components are exact polynomials: each is stored with its own degree as
/// the cap, so evaluation is exact. The composition symbol phi has
/// n_out == n_in; the weight symbol psi has n_out == 1.
class PolyMap {
 public:
  explicit PolyMap(std::vector<TruncatedSeries> components);

  static PolyMap identity(int n);

  /// Scalar polynomial in one variable from low-order coefficients
  /// (c[0] + c[1] z + ...). Convenience for the one-variable test corpus.
  static PolyMap scalar_1d(std::vector<Cplx> coeffs);

  int vars_in() const { return n_in_; }
  int vars_out() const { return static_cast<int>(components_.size()); }
  bool is_scalar() const { return vars_out() == 1; }

  const TruncatedSeries& component(int i) const { return components_.at(i); }

  /// Max component degree.
  int degree() const;

  Point evaluate(std::span<const Cplx> z) const;

  /// Requires is_scalar().
  Cplx evaluate_scalar(std::span<const Cplx> z) const;

 private:
  int n_in_;
  std::vector<TruncatedSeries> components_;
};

/// phi^g = prod_i phi_i^{g_i} truncated at total degree `cap`; the image of
/// the basis monomial z^g under composition with phi. g must have one entry
/// per component of phi.
TruncatedSeries monomial_of_map(const PolyMap& phi, const MultiIndex& g, int cap);

}  // namespace wco

#endif
