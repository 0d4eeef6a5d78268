#ifndef WCO_MULTIINDEX_HPP
#define WCO_MULTIINDEX_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace wco {

/// Exponent vector of a monomial z^g = prod_i z_i^{g_i}. All entries >= 0.
using MultiIndex = std::vector<int>;

/// |g| = sum of exponents.
int total_degree(const MultiIndex& g);

/// Canonical basis order: ascending total degree, ties broken so that within
/// a degree block the exponent vectors appear in lexicographically decreasing
/// order ((1,0) before (0,1)). This order is used for every matrix, report
/// and file in the project.
bool graded_lex_less(const MultiIndex& a, const MultiIndex& b);

struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    return graded_lex_less(a, b);
  }
};

/// C(n, k) in exact integer arithmetic. Throws std::overflow_error if the
/// value does not fit in 64 bits.
std::uint64_t binomial(int n, int k);

/// Number of multi-indices in n variables with total degree <= N, i.e.
/// C(n+N, n).
std::size_t basis_size(int n, int N);

/// All g with |g| <= N in canonical order. n >= 1, N >= 0.
std::vector<MultiIndex> enumerate_multi_indices(int n, int N);

/// All g with |g| == degree in canonical order.
std::vector<MultiIndex> enumerate_degree(int n, int degree);

/// Position of g in the canonical enumeration; independent of any cap.
std::size_t multi_index_rank(const MultiIndex& g);

/// "i,j,k" form used as JSON object key.
std::string multi_index_key(const MultiIndex& g);

/// Inverse of multi_index_key. Throws std::invalid_argument on bad input.
MultiIndex parse_multi_index_key(const std::string& key, int n_expected);

}  // namespace wco

#endif
