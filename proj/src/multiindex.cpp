#include "wco/multiindex.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace wco {

int total_degree(const MultiIndex& g) {
  int d = 0;
  for (int e : g) d += e;
  return d;
}

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("graded_lex_less: dimension mismatch");
  }
  const int da = total_degree(a);
  const int db = total_degree(b);
  if (da != db) return da < db;
  // Within a degree block the larger leading exponents come first.
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (result > std::numeric_limits<std::uint64_t>::max() / num) {
      throw std::overflow_error("binomial: value exceeds 64 bits");
    }
    result = result * num / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::size_t basis_size(int n, int N) {
  if (n < 1) throw std::invalid_argument("basis_size: need n >= 1");
  if (N < 0) throw std::invalid_argument("basis_size: need N >= 0");
  return static_cast<std::size_t>(binomial(n + N, n));
}

namespace {

void append_degree_block(int n, int degree, MultiIndex& prefix,
                         std::vector<MultiIndex>& out) {
  if (n == 1) {
    prefix.push_back(degree);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int head = degree; head >= 0; --head) {
    prefix.push_back(head);
    append_degree_block(n - 1, degree - head, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_multi_indices(int n, int N) {
  if (n < 1) throw std::invalid_argument("enumerate_multi_indices: need n >= 1");
  if (N < 0) throw std::invalid_argument("enumerate_multi_indices: need N >= 0");
  std::vector<MultiIndex> out;
  out.reserve(basis_size(n, N));
  MultiIndex prefix;
  for (int d = 0; d <= N; ++d) append_degree_block(n, d, prefix, out);
  return out;
}

std::vector<MultiIndex> enumerate_degree(int n, int degree) {
  if (n < 1) throw std::invalid_argument("enumerate_degree: need n >= 1");
  if (degree < 0) throw std::invalid_argument("enumerate_degree: need degree >= 0");
  std::vector<MultiIndex> out;
  MultiIndex prefix;
  append_degree_block(n, degree, prefix, out);
  return out;
}

std::size_t multi_index_rank(const MultiIndex& g) {
  const int n = static_cast<int>(g.size());
  if (n < 1) throw std::invalid_argument("multi_index_rank: empty index");
  for (int e : g) {
    if (e < 0) throw std::invalid_argument("multi_index_rank: negative exponent");
  }
  const int d = total_degree(g);
  // Indices of strictly smaller degree.
  std::size_t rank = static_cast<std::size_t>(binomial(d + n - 1, n));
  // Offset within the degree-d block: entries whose leading exponent is
  // larger come first, then recurse on the tail.
  int remaining = d;
  for (int i = 0; i + 1 < n; ++i) {
    const int m = n - 1 - i;  // variables after position i
    for (int head = remaining; head > g[i]; --head) {
      rank += static_cast<std::size_t>(binomial(remaining - head + m - 1, m - 1));
    }
    remaining -= g[i];
  }
  return rank;
}

std::string multi_index_key(const MultiIndex& g) {
  std::ostringstream os;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i > 0) os << ',';
    os << g[i];
  }
  return os.str();
}

MultiIndex parse_multi_index_key(const std::string& key, int n_expected) {
  MultiIndex g;
  std::istringstream is(key);
  std::string part;
  while (std::getline(is, part, ',')) {
    std::size_t pos = 0;
    int value = 0;
    try {
      value = std::stoi(part, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("parse_multi_index_key: bad exponent '" + part + "'");
    }
    if (pos != part.size() || value < 0) {
      throw std::invalid_argument("parse_multi_index_key: bad exponent '" + part + "'");
    }
    g.push_back(value);
  }
  if (n_expected > 0 && static_cast<int>(g.size()) != n_expected) {
    throw std::invalid_argument("parse_multi_index_key: expected " +
                                std::to_string(n_expected) + " exponents in '" + key + "'");
  }
  if (g.empty()) throw std::invalid_argument("parse_multi_index_key: empty key");
  return g;
}

}  // namespace wco
