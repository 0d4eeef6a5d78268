#include <doctest.h>

#include <complex>
#include <random>

#include "wco/series.hpp"

using namespace wco;

namespace {

constexpr Cplx kOne{1.0, 0.0};

double cplx_dist(Cplx a, Cplx b) { return std::abs(a - b); }

TruncatedSeries random_series(int n, int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  TruncatedSeries s(n, degree);
  for (const MultiIndex& g : enumerate_multi_indices(n, degree)) {
    s.set_coefficient(g, Cplx(coeff(rng), coeff(rng)));
  }
  return s;
}

double series_dist(const TruncatedSeries& a, const TruncatedSeries& b) {
  double d = 0.0;
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  for (std::size_t i = 0; i < std::min(ca.size(), cb.size()); ++i) {
    d = std::max(d, std::abs(ca[i] - cb[i]));
  }
  return d;
}

}  // namespace

TEST_CASE("multiplying by one truncates the other factor") {
  std::mt19937_64 rng(7);
  const TruncatedSeries one = TruncatedSeries::constant(2, 0, kOne);
  const TruncatedSeries b = random_series(2, 4, rng);
  const TruncatedSeries prod = series_multiply(one, b, 2);
  CHECK(series_dist(prod, b.truncated(2)) == 0.0);
}

TEST_CASE("(1+z)^2 with cap 2") {
  TruncatedSeries s(1, 1);
  s.set_coefficient({0}, kOne);
  s.set_coefficient({1}, kOne);
  const TruncatedSeries sq = series_multiply(s, s, 2);
  CHECK(sq.coefficient({0}) == kOne);
  CHECK(sq.coefficient({1}) == Cplx(2.0, 0.0));
  CHECK(sq.coefficient({2}) == kOne);

  // Cap below the product degree drops the tail.
  const TruncatedSeries capped = series_multiply(s, s, 1);
  CHECK(capped.coefficient({0}) == kOne);
  CHECK(capped.coefficient({1}) == Cplx(2.0, 0.0));
  CHECK(capped.degree_cap() == 1);
}

TEST_CASE("(z/2 + 1/4)^2 hand expansion") {
  TruncatedSeries s(1, 1);
  s.set_coefficient({0}, Cplx(0.25, 0.0));
  s.set_coefficient({1}, Cplx(0.5, 0.0));
  const TruncatedSeries sq = series_multiply(s, s, 2);
  CHECK(sq.coefficient({0}) == Cplx(0.0625, 0.0));  // 1/16
  CHECK(sq.coefficient({1}) == Cplx(0.25, 0.0));
  CHECK(sq.coefficient({2}) == Cplx(0.25, 0.0));
}

TEST_CASE("multiplication is commutative and associative up to the cap") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int cap = 3 + static_cast<int>(rng() % 3);
    const TruncatedSeries a = random_series(n, 2, rng);
    const TruncatedSeries b = random_series(n, 2, rng);
    const TruncatedSeries c = random_series(n, 2, rng);
    CHECK(series_dist(series_multiply(a, b, cap), series_multiply(b, a, cap)) <
          1e-14);
    const TruncatedSeries left =
        series_multiply(series_multiply(a, b, cap), c, cap);
    const TruncatedSeries right =
        series_multiply(a, series_multiply(b, c, cap), cap);
    CHECK(series_dist(left, right) < 1e-13);
  }
}

TEST_CASE("dimension mismatch is rejected") {
  std::mt19937_64 rng(3);
  const TruncatedSeries a = random_series(1, 2, rng);
  const TruncatedSeries b = random_series(2, 2, rng);
  CHECK_THROWS_AS(series_multiply(a, b, 2), std::invalid_argument);
}

TEST_CASE("monomial_of_map basics") {
  SUBCASE("empty exponent gives the constant one") {
    const PolyMap phi = PolyMap::scalar_1d({Cplx(0, 0), Cplx(0.5, 0)});
    const TruncatedSeries s = monomial_of_map(PolyMap::identity(2), {0, 0}, 3);
    CHECK(s.coefficient({0, 0}) == kOne);
    CHECK(s.degree() == 0);
    (void)phi;
  }
  SUBCASE("power of a scaled coordinate") {
    const PolyMap phi = PolyMap::scalar_1d({Cplx(0, 0), Cplx(0.5, 0)});
    const TruncatedSeries s = monomial_of_map(phi, {3}, 3);
    CHECK(cplx_dist(s.coefficient({3}), Cplx(0.125, 0)) < 1e-16);
    CHECK(s.coefficient({0}) == Cplx(0, 0));
    CHECK(s.coefficient({1}) == Cplx(0, 0));
    CHECK(s.coefficient({2}) == Cplx(0, 0));
  }
  SUBCASE("two-variable symbolic expansion") {
    // phi(z1, z2) = (z2, z1 z2); phi^(1,1) = z2 * z1 z2 = z1 z2^2.
    TruncatedSeries c0(2, 1);
    c0.set_coefficient({0, 1}, kOne);
    TruncatedSeries c1(2, 2);
    c1.set_coefficient({1, 1}, kOne);
    const PolyMap phi({c0, c1});
    const TruncatedSeries s = monomial_of_map(phi, {1, 1}, 3);
    for (const MultiIndex& g : enumerate_multi_indices(2, 3)) {
      const Cplx expected = (g == MultiIndex{1, 2}) ? kOne : Cplx(0, 0);
      CHECK(s.coefficient(g) == expected);
    }
  }
  SUBCASE("negative cap is rejected") {
    const PolyMap phi = PolyMap::scalar_1d({Cplx(0, 0), Cplx(0.5, 0)});
    CHECK_THROWS_AS(monomial_of_map(phi, {2}, -1), std::invalid_argument);
  }
}

TEST_CASE("monomial_of_map is multiplicative in the exponent") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> coeff(-0.5, 0.5);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 2);
    std::vector<TruncatedSeries> comps;
    for (int i = 0; i < n; ++i) comps.push_back(random_series(n, 2, rng));
    const PolyMap phi(std::move(comps));
    const int cap = 5;
    MultiIndex g(n), d(n);
    for (int i = 0; i < n; ++i) {
      g[i] = static_cast<int>(rng() % 3);
      d[i] = static_cast<int>(rng() % 3);
    }
    MultiIndex sum(n);
    for (int i = 0; i < n; ++i) sum[i] = g[i] + d[i];
    const TruncatedSeries whole = monomial_of_map(phi, sum, cap);
    const TruncatedSeries split = series_multiply(
        monomial_of_map(phi, g, cap), monomial_of_map(phi, d, cap), cap);
    CHECK(series_dist(whole, split) < 1e-12);
  }
}

TEST_CASE("evaluation") {
  SUBCASE("constants and affine fixed point") {
    const TruncatedSeries one = TruncatedSeries::constant(1, 0, kOne);
    const Point z = {Cplx(0.37, -0.2)};
    CHECK(one.evaluate(z) == kOne);

    const PolyMap phi = PolyMap::scalar_1d({Cplx(0.25, 0), Cplx(0.5, 0)});
    CHECK(cplx_dist(phi.evaluate_scalar(Point{Cplx(0.5, 0)}), Cplx(0.5, 0)) == 0.0);

    const PolyMap psi = PolyMap::scalar_1d({Cplx(2, 0), kOne});
    CHECK(cplx_dist(psi.evaluate_scalar(Point{Cplx(0.5, 0)}), Cplx(2.5, 0)) == 0.0);
  }
  SUBCASE("evaluation is multiplicative when degrees fit the cap") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coord(-0.9, 0.9);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 2);
      const TruncatedSeries a = random_series(n, 2, rng);
      const TruncatedSeries b = random_series(n, 3, rng);
      const TruncatedSeries prod = series_multiply(a, b, 5);  // 2 + 3 <= 5
      Point z(n);
      for (int i = 0; i < n; ++i) z[i] = Cplx(coord(rng), coord(rng));
      CHECK(cplx_dist(prod.evaluate(z), a.evaluate(z) * b.evaluate(z)) < 1e-12);
    }
  }
}

TEST_CASE("derivative") {
  // d/dz (3z + z^2) = 3 + 2z
  TruncatedSeries s(1, 2);
  s.set_coefficient({1}, Cplx(3, 0));
  s.set_coefficient({2}, kOne);
  const TruncatedSeries ds = series_derivative(s, 0);
  CHECK(ds.coefficient({0}) == Cplx(3, 0));
  CHECK(ds.coefficient({1}) == Cplx(2, 0));

  // In two variables: d/dz2 (z1 z2) = z1.
  TruncatedSeries t(2, 2);
  t.set_coefficient({1, 1}, kOne);
  const TruncatedSeries dt = series_derivative(t, 1);
  CHECK(dt.coefficient({1, 0}) == kOne);
  CHECK_THROWS_AS(series_derivative(t, 2), std::invalid_argument);
}

TEST_CASE("identity map and scalar helpers") {
  const PolyMap id = PolyMap::identity(3);
  CHECK(id.vars_in() == 3);
  CHECK(id.vars_out() == 3);
  const Point z = {Cplx(0.1, 0.2), Cplx(-0.3, 0), Cplx(0, 0.4)};
  CHECK(id.evaluate(z) == z);
  CHECK_FALSE(id.is_scalar());
  CHECK_THROWS_AS(id.evaluate_scalar(z), std::invalid_argument);
}

TEST_CASE("coefficient map view skips zeros and orders canonically") {
  TruncatedSeries s(2, 2);
  s.set_coefficient({0, 2}, kOne);
  s.set_coefficient({1, 0}, Cplx(-2, 0));
  const auto view = s.coefficient_map();
  REQUIRE(view.size() == 2);
  auto it = view.begin();
  CHECK(it->first == MultiIndex{1, 0});
  ++it;
  CHECK(it->first == MultiIndex{0, 2});
}
