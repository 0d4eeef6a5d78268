#include <doctest.h>

#include <algorithm>
#include <set>

#include "wco/multiindex.hpp"

using namespace wco;

TEST_CASE("single variable enumeration is the degree ladder") {
  const auto got = enumerate_multi_indices(1, 3);
  const std::vector<MultiIndex> expected = {{0}, {1}, {2}, {3}};
  CHECK(got == expected);
}

TEST_CASE("two variables, degree 1") {
  const auto got = enumerate_multi_indices(2, 1);
  const std::vector<MultiIndex> expected = {{0, 0}, {1, 0}, {0, 1}};
  CHECK(got == expected);
}

TEST_CASE("two variables, degree 2: brute-force census") {
  const auto got = enumerate_multi_indices(2, 2);
  CHECK(got.size() == 6);  // C(4, 2)
  CHECK(got.back() == MultiIndex{0, 2});

  // Independent enumeration: all pairs with sum <= 2, sorted by the order.
  std::vector<MultiIndex> brute;
  for (int i = 0; i <= 2; ++i) {
    for (int j = 0; j <= 2; ++j) {
      if (i + j <= 2) brute.push_back({i, j});
    }
  }
  std::sort(brute.begin(), brute.end(), graded_lex_less);
  CHECK(got == brute);
}

TEST_CASE("enumeration count and strict order") {
  for (int n = 1; n <= 4; ++n) {
    for (int N = 0; N <= 6; ++N) {
      const auto list = enumerate_multi_indices(n, N);
      CHECK(list.size() == basis_size(n, N));
      CHECK(list.size() == binomial(n + N, n));
      for (std::size_t i = 0; i + 1 < list.size(); ++i) {
        CHECK(graded_lex_less(list[i], list[i + 1]));
        CHECK_FALSE(graded_lex_less(list[i + 1], list[i]));
      }
    }
  }
}

TEST_CASE("rank agrees with enumeration position") {
  for (int n = 1; n <= 4; ++n) {
    const auto list = enumerate_multi_indices(n, 7);
    for (std::size_t i = 0; i < list.size(); ++i) {
      CHECK(multi_index_rank(list[i]) == i);
    }
  }
}

TEST_CASE("per-degree enumeration matches the degree block") {
  for (int n = 1; n <= 3; ++n) {
    const auto all = enumerate_multi_indices(n, 5);
    for (int d = 0; d <= 5; ++d) {
      const auto block = enumerate_degree(n, d);
      std::vector<MultiIndex> expected;
      for (const auto& g : all) {
        if (total_degree(g) == d) expected.push_back(g);
      }
      CHECK(block == expected);
    }
  }
}

TEST_CASE("binomials") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(5, 5) == 1);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(60, 30) == 118264581564861424ull);
}

TEST_CASE("key round trip") {
  const MultiIndex g = {3, 0, 2};
  CHECK(multi_index_key(g) == "3,0,2");
  CHECK(parse_multi_index_key("3,0,2", 3) == g);
  CHECK(parse_multi_index_key("7", 1) == MultiIndex{7});
  CHECK_THROWS_AS(parse_multi_index_key("1,2", 3), std::invalid_argument);
  CHECK_THROWS_AS(parse_multi_index_key("-1", 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_multi_index_key("a", 1), std::invalid_argument);
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(enumerate_multi_indices(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_multi_indices(1, -1), std::invalid_argument);
  CHECK_THROWS_AS(multi_index_rank({1, -2}), std::invalid_argument);
}
