#include "wco/series.hpp"

#include <algorithm>
#include <stdexcept>

namespace wco {

TruncatedSeries::TruncatedSeries(int n_vars, int degree_cap)
    : n_vars_(n_vars), degree_cap_(degree_cap) {
  if (n_vars < 1) throw std::invalid_argument("TruncatedSeries: need n >= 1");
  if (degree_cap < 0) throw std::invalid_argument("TruncatedSeries: need cap >= 0");
  coeffs_.assign(basis_size(n_vars, degree_cap), Cplx(0.0, 0.0));
}

TruncatedSeries TruncatedSeries::constant(int n_vars, int degree_cap, Cplx value) {
  TruncatedSeries s(n_vars, degree_cap);
  s.coeffs_[0] = value;
  return s;
}

TruncatedSeries TruncatedSeries::monomial(int n_vars, int degree_cap,
                                          const MultiIndex& g, Cplx value) {
  TruncatedSeries s(n_vars, degree_cap);
  s.set_coefficient(g, value);
  return s;
}

Cplx TruncatedSeries::coefficient(const MultiIndex& g) const {
  if (static_cast<int>(g.size()) != n_vars_) {
    throw std::invalid_argument("TruncatedSeries::coefficient: dimension mismatch");
  }
  if (total_degree(g) > degree_cap_) return Cplx(0.0, 0.0);
  return coeffs_[multi_index_rank(g)];
}

void TruncatedSeries::set_coefficient(const MultiIndex& g, Cplx value) {
  if (static_cast<int>(g.size()) != n_vars_) {
    throw std::invalid_argument("TruncatedSeries::set_coefficient: dimension mismatch");
  }
  if (total_degree(g) > degree_cap_) {
    throw std::invalid_argument("TruncatedSeries::set_coefficient: degree above cap");
  }
  coeffs_[multi_index_rank(g)] = value;
}

int TruncatedSeries::degree() const {
  const auto indices = enumerate_multi_indices(n_vars_, degree_cap_);
  int deg = 0;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (coeffs_[i] != Cplx(0.0, 0.0)) deg = total_degree(indices[i]);
  }
  return deg;
}

bool TruncatedSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](Cplx c) { return c == Cplx(0.0, 0.0); });
}

TruncatedSeries TruncatedSeries::truncated(int new_cap) const {
  TruncatedSeries out(n_vars_, new_cap);
  const std::size_t common = std::min(out.coeffs_.size(), coeffs_.size());
  std::copy_n(coeffs_.begin(), common, out.coeffs_.begin());
  return out;
}

Cplx TruncatedSeries::evaluate(std::span<const Cplx> z) const {
  if (static_cast<int>(z.size()) != n_vars_) {
    throw std::invalid_argument("TruncatedSeries::evaluate: dimension mismatch");
  }
  // Precompute coordinate powers, then sum monomials directly.
  std::vector<std::vector<Cplx>> powers(n_vars_);
  for (int i = 0; i < n_vars_; ++i) {
    powers[i].resize(degree_cap_ + 1);
    powers[i][0] = Cplx(1.0, 0.0);
    for (int k = 1; k <= degree_cap_; ++k) powers[i][k] = powers[i][k - 1] * z[i];
  }
  const auto indices = enumerate_multi_indices(n_vars_, degree_cap_);
  Cplx acc(0.0, 0.0);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (coeffs_[r] == Cplx(0.0, 0.0)) continue;
    Cplx term = coeffs_[r];
    for (int i = 0; i < n_vars_; ++i) term *= powers[i][indices[r][i]];
    acc += term;
  }
  return acc;
}

std::map<MultiIndex, Cplx, GradedLexLess> TruncatedSeries::coefficient_map() const {
  std::map<MultiIndex, Cplx, GradedLexLess> out;
  const auto indices = enumerate_multi_indices(n_vars_, degree_cap_);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (coeffs_[r] != Cplx(0.0, 0.0)) out.emplace(indices[r], coeffs_[r]);
  }
  return out;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& rhs) {
  if (rhs.n_vars_ != n_vars_) {
    throw std::invalid_argument("TruncatedSeries: dimension mismatch in +");
  }
  const TruncatedSeries aligned = rhs.degree_cap_ == degree_cap_
                                      ? rhs
                                      : rhs.truncated(degree_cap_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += aligned.coeffs_[i];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& rhs) {
  if (rhs.n_vars_ != n_vars_) {
    throw std::invalid_argument("TruncatedSeries: dimension mismatch in -");
  }
  const TruncatedSeries aligned = rhs.degree_cap_ == degree_cap_
                                      ? rhs
                                      : rhs.truncated(degree_cap_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= aligned.coeffs_[i];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(Cplx scale) {
  for (Cplx& c : coeffs_) c *= scale;
  return *this;
}

TruncatedSeries series_multiply(const TruncatedSeries& a, const TruncatedSeries& b,
                                int cap) {
  if (a.vars() != b.vars()) {
    throw std::invalid_argument("series_multiply: dimension mismatch");
  }
  if (cap < 0) throw std::invalid_argument("series_multiply: need cap >= 0");
  const int n = a.vars();
  TruncatedSeries out(n, cap);
  const auto a_idx = enumerate_multi_indices(n, a.degree_cap());
  const auto b_idx = enumerate_multi_indices(n, b.degree_cap());
  const auto a_coeffs = a.coefficients();
  const auto b_coeffs = b.coefficients();

  std::vector<Cplx> acc(basis_size(n, cap), Cplx(0.0, 0.0));
  MultiIndex sum(n);
  for (std::size_t i = 0; i < a_idx.size(); ++i) {
    if (a_coeffs[i] == Cplx(0.0, 0.0)) continue;
    const int da = total_degree(a_idx[i]);
    if (da > cap) continue;
    for (std::size_t j = 0; j < b_idx.size(); ++j) {
      if (b_coeffs[j] == Cplx(0.0, 0.0)) continue;
      if (da + total_degree(b_idx[j]) > cap) continue;
      for (int v = 0; v < n; ++v) sum[v] = a_idx[i][v] + b_idx[j][v];
      acc[multi_index_rank(sum)] += a_coeffs[i] * b_coeffs[j];
    }
  }
  const auto out_idx = enumerate_multi_indices(n, cap);
  for (std::size_t r = 0; r < out_idx.size(); ++r) {
    if (acc[r] != Cplx(0.0, 0.0)) out.set_coefficient(out_idx[r], acc[r]);
  }
  return out;
}

TruncatedSeries series_pow(const TruncatedSeries& s, int k, int cap) {
  if (k < 0) throw std::invalid_argument("series_pow: need k >= 0");
  if (cap < 0) throw std::invalid_argument("series_pow: need cap >= 0");
  TruncatedSeries result = TruncatedSeries::constant(s.vars(), cap, Cplx(1.0, 0.0));
  TruncatedSeries base = s.truncated(cap);
  while (k > 0) {
    if (k & 1) result = series_multiply(result, base, cap);
    k >>= 1;
    if (k > 0) base = series_multiply(base, base, cap);
  }
  return result;
}

TruncatedSeries series_derivative(const TruncatedSeries& s, int var) {
  if (var < 0 || var >= s.vars()) {
    throw std::invalid_argument("series_derivative: variable out of range");
  }
  const int cap = std::max(0, s.degree_cap() - 1);
  TruncatedSeries out(s.vars(), cap);
  const auto indices = enumerate_multi_indices(s.vars(), s.degree_cap());
  const auto coeffs = s.coefficients();
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const int e = indices[r][var];
    if (e == 0 || coeffs[r] == Cplx(0.0, 0.0)) continue;
    MultiIndex g = indices[r];
    g[var] -= 1;
    out.set_coefficient(g, coeffs[r] * static_cast<double>(e));
  }
  return out;
}

PolyMap::PolyMap(std::vector<TruncatedSeries> components)
    : n_in_(components.empty() ? 0 : components.front().vars()),
      components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("PolyMap: no components");
  for (const auto& c : components_) {
    if (c.vars() != n_in_) {
      throw std::invalid_argument("PolyMap: components over different variable counts");
    }
  }
  // Normalize each component's cap to its actual degree so evaluation cost
  // tracks the polynomial, not the cap it was built under.
  for (auto& c : components_) {
    const int d = c.degree();
    if (d != c.degree_cap()) c = c.truncated(d);
  }
}

PolyMap PolyMap::identity(int n) {
  if (n < 1) throw std::invalid_argument("PolyMap::identity: need n >= 1");
  std::vector<TruncatedSeries> comps;
  comps.reserve(n);
  for (int i = 0; i < n; ++i) {
    MultiIndex g(n, 0);
    g[i] = 1;
    comps.push_back(TruncatedSeries::monomial(n, 1, g, Cplx(1.0, 0.0)));
  }
  return PolyMap(std::move(comps));
}

PolyMap PolyMap::scalar_1d(std::vector<Cplx> coeffs) {
  if (coeffs.empty()) coeffs.push_back(Cplx(0.0, 0.0));
  const int deg = static_cast<int>(coeffs.size()) - 1;
  TruncatedSeries s(1, deg);
  for (int j = 0; j <= deg; ++j) s.set_coefficient({j}, coeffs[j]);
  return PolyMap({s});
}

int PolyMap::degree() const {
  int d = 0;
  for (const auto& c : components_) d = std::max(d, c.degree());
  return d;
}

Point PolyMap::evaluate(std::span<const Cplx> z) const {
  Point out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(c.evaluate(z));
  return out;
}

Cplx PolyMap::evaluate_scalar(std::span<const Cplx> z) const {
  if (!is_scalar()) {
    throw std::invalid_argument("PolyMap::evaluate_scalar: map is not scalar");
  }
  return components_.front().evaluate(z);
}

TruncatedSeries monomial_of_map(const PolyMap& phi, const MultiIndex& g, int cap) {
  if (cap < 0) throw std::invalid_argument("monomial_of_map: need cap >= 0");
  if (static_cast<int>(g.size()) != phi.vars_out()) {
    throw std::invalid_argument("monomial_of_map: index size must match component count");
  }
  TruncatedSeries result =
      TruncatedSeries::constant(phi.vars_in(), cap, Cplx(1.0, 0.0));
  for (int i = 0; i < phi.vars_out(); ++i) {
    if (g[i] < 0) throw std::invalid_argument("monomial_of_map: negative exponent");
    if (g[i] == 0) continue;
    result = series_multiply(result, series_pow(phi.component(i), g[i], cap), cap);
  }
  return result;
}

}  // namespace wco
