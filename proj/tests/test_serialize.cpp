#include <doctest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "wco/serialize.hpp"

using namespace wco;

TEST_CASE("polynomial JSON schema") {
  SUBCASE("parsing the documented form") {
    const Json j = Json::parse(
        R"({"n": 2, "coeffs": {"1,0": [0.5, 0.0], "0,0": [0.25, 0.0]}})");
    const PolyMap p = poly_map_from_json(j);
    CHECK(p.vars_in() == 2);
    CHECK(p.is_scalar());
    CHECK(p.component(0).coefficient({1, 0}) == Cplx(0.5, 0));
    CHECK(p.component(0).coefficient({0, 0}) == Cplx(0.25, 0));
  }
  SUBCASE("round trip") {
    TruncatedSeries s(2, 2);
    s.set_coefficient({1, 1}, Cplx(0.25, -0.5));
    s.set_coefficient({0, 0}, Cplx(1, 0));
    const PolyMap p({s});
    const PolyMap back = poly_map_from_json(to_json(p));
    CHECK(back.vars_in() == 2);
    CHECK(back.component(0).coefficient({1, 1}) == Cplx(0.25, -0.5));
    CHECK(back.component(0).coefficient({0, 0}) == Cplx(1, 0));
  }
  SUBCASE("arrays of components for multi-variable maps") {
    const PolyMap id = PolyMap::identity(2);
    const Json j = to_json(id);
    REQUIRE(j.is_array());
    const PolyMap back = poly_map_from_json(j);
    CHECK(back.vars_out() == 2);
    const Point z = {Cplx(0.2, 0.1), Cplx(-0.4, 0)};
    CHECK(back.evaluate(z) == z);
  }
  SUBCASE("bad inputs name the problem") {
    CHECK_THROWS_AS(poly_map_from_json(Json::parse(R"({"coeffs": {}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        poly_map_from_json(Json::parse(R"({"n": 1, "coeffs": {"0,1": [1, 0]}})")),
        std::invalid_argument);
    CHECK_THROWS_AS(
        poly_map_from_json(Json::parse(R"({"n": 1, "coeffs": {"0": "x"}})")),
        std::invalid_argument);
  }
}

TEST_CASE("space JSON schema") {
  SUBCASE("weighted hardy with the ones rule") {
    const Json j = Json::parse(
        R"({"domain": {"family": "disk", "n": 1},
            "space": "weighted_hardy_disk", "b": {"rule": "ones"}})");
    const SpaceSpec s = space_from_json(j);
    CHECK(s.family == SpaceFamily::weighted_hardy_disk);
    CHECK(s.b.is_ones());
    const SpaceSpec back = space_from_json(to_json(s));
    CHECK(back.family == s.family);
  }
  SUBCASE("explicit b list") {
    const Json j = Json::parse(
        R"({"domain": {"family": "disk", "n": 1},
            "space": "weighted_hardy_disk", "b": {"list": [1.0, 2.0, 4.0]}})");
    const SpaceSpec s = space_from_json(j);
    CHECK(s.b.list.size() == 3);
    CHECK(monomial_weight(s, {2}) == doctest::Approx(16.0));
  }
  SUBCASE("bergman ball with alpha") {
    const Json j = Json::parse(
        R"({"domain": {"family": "ball", "n": 2}, "space": "bergman_ball",
            "alpha": 0.5})");
    const SpaceSpec s = space_from_json(j);
    CHECK(s.alpha == 0.5);
    CHECK(to_json(s).at("alpha") == Json(0.5));
  }
  SUBCASE("annulus domain round trip") {
    const DomainSpec d = domain_from_json(
        Json::parse(R"({"family": "annulus_product", "n": 3, "r": 0.5})"));
    CHECK(d.inner_radius == 0.5);
    CHECK(domain_from_json(to_json(d)).n == 3);
  }
  SUBCASE("invalid specs are rejected") {
    CHECK_THROWS_AS(space_from_json(Json::parse(
                        R"({"domain": {"family": "ball", "n": 2},
                            "space": "bergman_ball", "alpha": -2})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        domain_from_json(Json::parse(R"({"family": "annulus_product", "n": 2})")),
        std::invalid_argument);
  }
}

TEST_CASE("deterministic JSON dump") {
  Json j;
  j["b"] = 1.0 / 3.0;
  j["a"] = Json::array({Cplx(0.1, 0).real(), 2});
  j["c"] = Json{{"nested", true}, {"text", "q\"uote"}};
  const std::string once = dump_json(j);
  const std::string twice = dump_json(j);
  CHECK(once == twice);
  CHECK(once.find("0.33333333333333331") != std::string::npos);
  // Keys are sorted.
  CHECK(once.find("\"a\"") < once.find("\"b\""));
  CHECK(once.find("\"b\"") < once.find("\"c\""));

  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  Json inf_json = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(dump_json(inf_json), std::invalid_argument);
}

TEST_CASE("csv writers") {
  SUBCASE("eigenvalues") {
    std::ostringstream os;
    write_eigenvalues_csv({Cplx(1, 0), Cplx(0, -0.5)}, os);
    CHECK(os.str() == "re,im\n1,0\n0,-0.5\n");
  }
  SUBCASE("matrix cells are re,im pairs in row-major order") {
    const SpaceSpec space = SpaceSpec::classical_hardy_disk();
    const PolyMap one = PolyMap::scalar_1d({Cplx(1, 0)});
    const PolyMap half = PolyMap::scalar_1d({Cplx(0, 0), Cplx(0.5, 0)});
    const OperatorMatrix M = build_matrix(space, one, half, 2);
    std::ostringstream os;
    write_matrix_csv(M, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line.find("dim=3") != std::string::npos);
    std::getline(is, line);
    CHECK(line == "1,0,0,0,0,0");
    std::getline(is, line);
    CHECK(line == "0,0,0.5,0,0,0");
  }
  SUBCASE("orbit dump") {
    OrbitRecord record;
    record.start = {Cplx(0, 0)};
    record.points = {{Cplx(0, 0)}, {Cplx(0.25, 0)}};
    record.boundary_distances = {1.0, 0.75};
    record.outcome = OrbitOutcome::undecided;
    std::ostringstream os;
    write_orbit_csv(record, os);
    CHECK(os.str() == "j,re0,im0,boundary_distance\n0,0,0,1\n1,0.25,0,0.75\n");
  }
}

TEST_CASE("operator matrix JSON envelope") {
  const SpaceSpec space = SpaceSpec::hardy_ball(2);
  const PolyMap one = PolyMap({TruncatedSeries::constant(2, 0, Cplx(1, 0))});
  TruncatedSeries c0(2, 1);
  c0.set_coefficient({1, 0}, Cplx(0.5, 0));
  TruncatedSeries c1(2, 1);
  c1.set_coefficient({0, 1}, Cplx(0.25, 0));
  const OperatorMatrix M = build_matrix(space, one, PolyMap({c0, c1}), 1);
  const Json j = to_json(M);
  CHECK(j.at("N") == Json(1));
  CHECK(j.at("basis") == Json::array({"0,0", "1,0", "0,1"}));
  CHECK(j.at("entries").size() == 3);
  CHECK(j.at("space").at("space") == Json("hardy_ball"));
}

TEST_CASE("orbit and census reports serialize") {
  OrbitRecord record;
  record.start = {Cplx(0.1, 0)};
  record.points = {{Cplx(0.1, 0)}};
  record.boundary_distances = {0.9};
  record.outcome = OrbitOutcome::converged;
  record.limit = {Cplx(0.5, 0)};
  const Json j = to_json(record);
  CHECK(j.at("classification") == Json("converged"));
  CHECK(j.contains("limit"));
}
