#include "wco/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace wco {

const std::vector<std::string> kCommands = {
    "fixed-point",   "census",          "genzhu-scan",      "adjoint-check",
    "spectrum",      "verify-conjecture", "compactness-proxy",
};

namespace {

PolyMap constant_one(int n) {
  return PolyMap({TruncatedSeries::constant(n, 0, Cplx(1.0, 0.0))});
}

bool is_constant_one(const PolyMap& p) {
  if (!p.is_scalar() || p.degree() != 0) return false;
  return p.component(0).coefficients()[0] == Cplx(1.0, 0.0);
}

HoloMap config_map(const ExperimentConfig& config) {
  if (config.phi_inverse) return HoloMap::componentwise_inverse(config.domain.n);
  if (!config.phi) throw std::invalid_argument("config: missing field phi");
  return HoloMap::polynomial(*config.phi);
}

BoundaryLadder config_ladder(const ExperimentConfig& config) {
  BoundaryLadder ladder;
  ladder.directions = config.boundary_directions;
  ladder.epsilons = config.boundary_shells;
  ladder.seed = config.seed;
  return ladder;
}

const SpaceSpec& require_space(const ExperimentConfig& config) {
  if (!config.space) {
    throw std::invalid_argument("config: command '" + config.command +
                                "' needs a space family in the space field");
  }
  return *config.space;
}

const PolyMap& require_phi(const ExperimentConfig& config) {
  if (!config.phi) {
    throw std::invalid_argument("config: command '" + config.command +
                                "' needs a polynomial phi");
  }
  return *config.phi;
}

PolyMap config_psi(const ExperimentConfig& config) {
  return config.psi ? *config.psi : constant_one(config.domain.n);
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y%m%dT%H%M%SZ", &tm);
  return buffer;
}

std::string point_to_text(const Point& z) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i) os << "; ";
    os << format_double(z[i].real()) << (z[i].imag() < 0 ? "" : "+")
       << format_double(z[i].imag()) << "i";
  }
  os << ')';
  return os.str();
}

SpectrumFormula pick_formula(const PolyMap& psi, int n) {
  const bool weighted = !is_constant_one(psi);
  if (n == 1) {
    return weighted ? SpectrumFormula::weighted_powers
                    : SpectrumFormula::unweighted_powers;
  }
  return weighted ? SpectrumFormula::weighted_products
                  : SpectrumFormula::unweighted_products;
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  ExperimentConfig config;

  if (!j.contains("command")) throw std::invalid_argument("config: missing field command");
  config.command = j.at("command").get<std::string>();

  if (!j.contains("space")) throw std::invalid_argument("config: missing field space");
  const Json& space_json = j.at("space");
  if (!space_json.is_object() || !space_json.contains("domain")) {
    throw std::invalid_argument("config: space needs a domain object");
  }
  config.domain = domain_from_json(space_json.at("domain"));
  if (space_json.contains("space")) {
    config.space = space_from_json(space_json);
  }

  if (j.contains("psi")) config.psi = poly_map_from_json(j.at("psi"));

  if (j.contains("phi")) {
    const Json& phi_json = j.at("phi");
    if (phi_json.is_string()) {
      if (phi_json.get<std::string>() != "componentwise-inverse") {
        throw std::invalid_argument("config: phi string form must be "
                                    "\"componentwise-inverse\"");
      }
      config.phi_inverse = true;
    } else {
      config.phi = poly_map_from_json(phi_json);
    }
  }

  if (j.contains("N_ladder")) {
    config.n_ladder = j.at("N_ladder").get<std::vector<int>>();
  }

  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    config.tol.tol_match = t.value("tol_match", config.tol.tol_match);
    config.tol.modulus_floor = t.value("modulus_floor", config.tol.modulus_floor);
    config.tol.tol_fix = t.value("tol_fix", config.tol.tol_fix);
    config.tol.tol_orbit = t.value("tol_orbit", config.tol.tol_orbit);
    config.tol.eps_div = t.value("eps_div", config.tol.eps_div);
    config.tol.merge_radius = t.value("merge_radius", config.tol.merge_radius);
    config.tol.liminf_threshold =
        t.value("liminf_threshold", config.tol.liminf_threshold);
    config.tol.grid_density = t.value("grid_density", config.tol.grid_density);
    config.tol.max_orbit_steps =
        t.value("max_orbit_steps", config.tol.max_orbit_steps);
  }

  if (j.contains("boundary")) {
    const Json& b = j.at("boundary");
    config.boundary_directions = b.value("directions", config.boundary_directions);
    if (b.contains("shells")) {
      config.boundary_shells = b.at("shells").get<std::vector<double>>();
    }
  }

  if (j.contains("z")) config.point = point_from_json(j.at("z"));
  config.output_dir = j.value("output_dir", config.output_dir);
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  return config;
}

Json resolved_config_json(const ExperimentConfig& config) {
  Json space_json;
  if (config.space) {
    space_json = to_json(*config.space);
  } else {
    space_json = Json{{"domain", to_json(config.domain)}};
  }
  Json phi_json;
  if (config.phi_inverse) {
    phi_json = "componentwise-inverse";
  } else if (config.phi) {
    phi_json = to_json(*config.phi);
  }
  return Json{
      {"command", config.command},
      {"space", space_json},
      {"psi", to_json(config_psi(config))},
      {"phi", phi_json},
      {"N_ladder", config.n_ladder},
      {"tolerances",
       Json{{"tol_match", config.tol.tol_match},
            {"modulus_floor", config.tol.modulus_floor},
            {"tol_fix", config.tol.tol_fix},
            {"tol_orbit", config.tol.tol_orbit},
            {"eps_div", config.tol.eps_div},
            {"merge_radius", config.tol.merge_radius},
            {"liminf_threshold", config.tol.liminf_threshold},
            {"grid_density", config.tol.grid_density},
            {"max_orbit_steps", config.tol.max_orbit_steps}}},
      {"boundary", Json{{"directions", config.boundary_directions},
                        {"shells", config.boundary_shells}}},
      {"z", config.point ? to_json(*config.point) : Json()},
      {"output_dir", config.output_dir},
      {"seed", config.seed},
  };
}

std::vector<std::string> validate(const ExperimentConfig& config) {
  std::vector<std::string> diagnostics;
  const auto complain = [&](const std::string& msg) { diagnostics.push_back(msg); };

  if (std::find(kCommands.begin(), kCommands.end(), config.command) ==
      kCommands.end()) {
    complain("unknown command '" + config.command + "'");
  }
  try {
    config.domain.validate();
  } catch (const std::exception& e) {
    complain(e.what());
  }

  for (std::size_t i = 0; i + 1 < config.n_ladder.size(); ++i) {
    if (config.n_ladder[i] >= config.n_ladder[i + 1]) {
      complain("N_ladder not increasing");
      break;
    }
  }
  if (config.n_ladder.empty()) complain("N_ladder is empty");
  for (int N : config.n_ladder) {
    if (N < 0) {
      complain("N_ladder has a negative degree");
      break;
    }
  }

  const auto positive = [&](double v, const char* name) {
    if (!(v > 0.0)) complain(std::string(name) + " must be positive");
  };
  positive(config.tol.tol_match, "tol_match");
  positive(config.tol.modulus_floor, "modulus_floor");
  positive(config.tol.tol_fix, "tol_fix");
  positive(config.tol.tol_orbit, "tol_orbit");
  positive(config.tol.eps_div, "eps_div");
  positive(config.tol.merge_radius, "merge_radius");
  positive(config.tol.liminf_threshold, "liminf_threshold");
  if (config.tol.grid_density < 1) complain("grid_density must be at least 1");
  if (config.tol.max_orbit_steps < 1) complain("max_orbit_steps must be at least 1");

  if (config.boundary_directions < 1) complain("boundary directions must be at least 1");
  for (double eps : config.boundary_shells) {
    if (!(eps > 0.0 && eps < config.domain.inradius())) {
      complain("boundary shell " + format_double(eps) + " outside (0, inradius)");
      break;
    }
  }

  const bool needs_space = config.command == "genzhu-scan" ||
                           config.command == "adjoint-check" ||
                           config.command == "spectrum" ||
                           config.command == "verify-conjecture" ||
                           config.command == "compactness-proxy";
  if (needs_space && !config.space) {
    complain("command '" + config.command + "' needs a space family");
  }

  if (config.psi && !config.psi->is_scalar()) {
    complain("weight symbol psi must be scalar");
  }
  if (config.psi && config.psi->vars_in() != config.domain.n) {
    complain("weight symbol psi has the wrong variable count");
  }

  if (config.phi_inverse) {
    if (config.domain.family != DomainFamily::annulus_product) {
      complain("componentwise-inverse is a self-map of annulus products only");
    }
  } else if (config.phi) {
    if (config.phi->vars_in() != config.domain.n ||
        config.phi->vars_out() != config.domain.n) {
      complain("composition symbol phi must be a self-map of the domain");
    } else {
      for (const Point& z : interior_samples(config.domain, 200)) {
        if (!config.domain.contains(config.phi->evaluate(z))) {
          complain("composition symbol leaves domain at sample z=" + point_to_text(z));
          break;
        }
      }
    }
  } else {
    complain("missing composition symbol phi");
  }

  if (config.space && config.space->family == SpaceFamily::weighted_hardy_disk &&
      !config.space->b.is_ones() && !config.n_ladder.empty()) {
    const int needed = config.n_ladder.back() + 1;
    if (static_cast<int>(config.space->b.list.size()) < needed) {
      complain("explicit b list has fewer than N+1 = " + std::to_string(needed) +
               " entries");
    }
  }

  if (config.point && static_cast<int>(config.point->size()) != config.domain.n) {
    complain("z has the wrong dimension");
  }
  return diagnostics;
}

namespace {

struct ReportFiles {
  std::filesystem::path json_path;
  std::filesystem::path csv_path;
};

ReportFiles report_paths(const ExperimentConfig& config) {
  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  const std::string stem = config.command + "-" + timestamp_utc();
  return {dir / (stem + ".json"), dir / (stem + ".csv")};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

Point default_probe_point(const DomainSpec& domain) {
  Point z(domain.n, Cplx(0.0, 0.0));
  z[0] = Cplx(0.3, 0.0);
  if (!domain.contains(z)) {
    throw std::invalid_argument(
        "config: no default probe point inside this domain; set the z field");
  }
  return z;
}

Point default_start_point(const DomainSpec& domain) {
  Point z(domain.n, Cplx(0.0, 0.0));
  if (!domain.contains(z)) {
    throw std::invalid_argument(
        "config: the origin is outside this domain; set the z field");
  }
  return z;
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
  {
    const auto diagnostics = validate(config);
    if (!diagnostics.empty()) {
      std::string msg = "invalid config:";
      for (const auto& d : diagnostics) msg += "\n  - " + d;
      throw std::invalid_argument(msg);
    }
  }

  RunResult result;
  Json report{{"command", config.command},
              {"config", resolved_config_json(config)}};
  std::string csv;

  if (config.command == "fixed-point") {
    const HoloMap map = config_map(config);
    const Point start = config.point ? *config.point : default_start_point(config.domain);
    const auto solved =
        solve_fixed_point(config.domain, map, start, config.tol.tol_fix);
    report["start"] = to_json(start);
    if (solved) {
      Point fz = map.evaluate(*solved);
      double residual = 0.0;
      for (std::size_t i = 0; i < fz.size(); ++i) residual += std::norm(fz[i] - (*solved)[i]);
      report["found"] = true;
      report["point"] = to_json(*solved);
      report["residual"] = std::sqrt(residual);
      result.exit_code = 0;
    } else {
      report["found"] = false;
      result.exit_code = 2;
    }
  } else if (config.command == "census") {
    const HoloMap map = config_map(config);
    const FixedPointReport census = fixed_point_census(
        config.domain, map, config.tol.grid_density, config.tol.merge_radius);
    report["census"] = to_json(census);
    std::ostringstream os;
    os << "index";
    for (int i = 0; i < config.domain.n; ++i) os << ",re" << i << ",im" << i;
    os << ",residual\n";
    for (std::size_t p = 0; p < census.points.size(); ++p) {
      os << p;
      for (const Cplx& c : census.points[p].location) {
        os << ',' << format_double(c.real()) << ',' << format_double(c.imag());
      }
      os << ',' << format_double(census.points[p].residual) << '\n';
    }
    csv = os.str();
    result.exit_code = 0;
  } else if (config.command == "genzhu-scan") {
    const SpaceSpec& space = require_space(config);
    const PolyMap psi = config_psi(config);
    const PolyMap& phi = require_phi(config);
    const GenzhuScan scan = genzhu_scan(space, psi, phi, config_ladder(config));
    report["scan"] = to_json(scan);
    report["verdict"] = scan.verdict;
    report["weight_liminf"] = to_json(estimate_weight_liminf(
        space, psi, config_ladder(config), config.tol.liminf_threshold));
    std::ostringstream os;
    os << "direction";
    for (int i = 0; i < config.domain.n; ++i) os << ",re" << i << ",im" << i;
    os << ",boundary_distance,q\n";
    const std::size_t shells = scan.epsilons.size();
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
      os << i / shells;
      for (const Cplx& c : scan.rows[i].z) {
        os << ',' << format_double(c.real()) << ',' << format_double(c.imag());
      }
      os << ',' << format_double(scan.rows[i].boundary_distance) << ','
         << format_double(scan.rows[i].q) << '\n';
    }
    csv = os.str();
    result.exit_code = 0;
  } else if (config.command == "adjoint-check") {
    const SpaceSpec& space = require_space(config);
    const PolyMap psi = config_psi(config);
    const PolyMap& phi = require_phi(config);
    const Point z = config.point ? *config.point : default_probe_point(config.domain);
    std::vector<double> residuals;
    residuals.reserve(config.n_ladder.size());
    for (int N : config.n_ladder) {
      residuals.push_back(adjoint_kernel_residual(space, psi, phi, z, N));
    }
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < residuals.size(); ++i) {
      if (residuals[i + 1] > residuals[i]) monotone = false;
    }
    report["z"] = to_json(z);
    report["N_ladder"] = config.n_ladder;
    report["residuals"] = residuals;
    report["monotone_decreasing"] = monotone;
    std::ostringstream os;
    os << "N,residual\n";
    for (std::size_t i = 0; i < residuals.size(); ++i) {
      os << config.n_ladder[i] << ',' << format_double(residuals[i]) << '\n';
    }
    csv = os.str();
    result.exit_code = 0;
  } else if (config.command == "spectrum") {
    const SpaceSpec& space = require_space(config);
    const PolyMap psi = config_psi(config);
    const PolyMap& phi = require_phi(config);
    std::vector<std::vector<Cplx>> computed;
    for (int N : config.n_ladder) {
      std::vector<Cplx> eigs = eigenvalues(build_matrix(space, psi, phi, N).entries);
      sort_by_modulus(eigs);
      computed.push_back(std::move(eigs));
    }
    const ConvergenceStudy study =
        truncation_convergence_study(space, psi, phi, config.n_ladder, 10);
    Json computed_json = Json::array();
    for (const auto& values : computed) {
      Json list = Json::array();
      for (const Cplx& v : values) list.push_back(to_json(v));
      computed_json.push_back(list);
    }
    report["N_ladder"] = config.n_ladder;
    report["computed"] = computed_json;
    report["study"] = to_json(study);
    std::ostringstream os;
    os << "N,re,im\n";
    for (std::size_t i = 0; i < computed.size(); ++i) {
      for (const Cplx& v : computed[i]) {
        os << config.n_ladder[i] << ',' << format_double(v.real()) << ','
           << format_double(v.imag()) << '\n';
      }
    }
    csv = os.str();
    result.exit_code = 0;
  } else if (config.command == "verify-conjecture") {
    const SpaceSpec& space = require_space(config);
    const PolyMap psi = config_psi(config);
    const PolyMap& phi = require_phi(config);
    const HoloMap map = HoloMap::polynomial(phi);
    const FixedPointReport census = fixed_point_census(
        config.domain, map, config.tol.grid_density, config.tol.merge_radius);
    report["census"] = to_json(census);
    report["unique_fixed_point"] = census.multiplicity == MultiplicityFlag::unique;
    if (census.multiplicity != MultiplicityFlag::unique) {
      report["verdict"] = "not-supported";
      report["reason"] = census.multiplicity == MultiplicityFlag::none_found
                             ? "no interior fixed point found"
                             : "several interior fixed points found";
      result.exit_code = 2;
    } else {
      const FixedPoint& fp = census.points.front();
      std::vector<std::vector<Cplx>> computed;
      for (int N : config.n_ladder) {
        std::vector<Cplx> eigs =
            eigenvalues(build_matrix(space, psi, phi, N).entries);
        sort_by_modulus(eigs);
        computed.push_back(std::move(eigs));
      }
      const PredictedSet predicted =
          predicted_set(psi, fp.location, fp.jacobian, config.tol.modulus_floor,
                        pick_formula(psi, config.domain.n));
      const SpectrumReport match =
          match_spectra(config.n_ladder, computed, predicted, config.tol.tol_match);
      report["spectrum"] = to_json(match);
      report["verdict"] = match.verdict;
      result.exit_code = match.supports_formula ? 0 : 2;
      std::ostringstream os;
      os << "re,im\n";
      for (const Cplx& v : match.computed.back()) {
        os << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
      }
      csv = os.str();
    }
  } else if (config.command == "compactness-proxy") {
    const SpaceSpec& space = require_space(config);
    const PolyMap psi = config_psi(config);
    const PolyMap& phi = require_phi(config);
    std::vector<OperatorMatrix> ladder;
    ladder.reserve(config.n_ladder.size());
    for (int N : config.n_ladder) ladder.push_back(build_matrix(space, psi, phi, N));
    const CompactnessReport proxy = compactness_proxy(ladder);
    report["proxy"] = to_json(proxy);
    report["verdict"] = proxy.verdict;
    std::ostringstream os;
    os << "index,sigma\n";
    for (std::size_t j = 0; j < proxy.singular_values.size(); ++j) {
      os << j << ',' << format_double(proxy.singular_values[j]) << '\n';
    }
    csv = os.str();
    result.exit_code = 0;
  } else {
    throw std::invalid_argument("config: unknown command '" + config.command + "'");
  }

  const ReportFiles paths = report_paths(config);
  write_text(paths.json_path, dump_json(report));
  result.files.push_back(paths.json_path.string());
  if (!csv.empty()) {
    write_text(paths.csv_path, csv);
    result.files.push_back(paths.csv_path.string());
  }
  result.report = std::move(report);
  return result;
}

}  // namespace wco
