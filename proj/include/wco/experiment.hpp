#ifndef WCO_EXPERIMENT_HPP
#define WCO_EXPERIMENT_HPP

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "wco/serialize.hpp"

namespace wco {

/// Tolerance and discretization knobs; every field has the project default
/// and the resolved values are embedded in each report.
struct ExperimentTolerances {
  double tol_match = 1e-4;
  double modulus_floor = 1e-3;
  double tol_fix = 1e-12;
  double tol_orbit = 1e-12;
  double eps_div = 1e-6;
  double merge_radius = 1e-8;
  double liminf_threshold = 1e-6;
  int grid_density = 9;
  int max_orbit_steps = 10000;
};

/// A parsed experiment: which pipeline to run, over which space/symbols,
/// with which truncation ladder and tolerances. `space` is present when the
/// config names a space family; commands that only need the domain (census,
/// fixed-point) accept a bare domain.
struct ExperimentConfig {
  std::string command;
  DomainSpec domain;
  std::optional<SpaceSpec> space;
  std::optional<PolyMap> psi;      // defaults to the constant 1
  std::optional<PolyMap> phi;      // absent when phi_inverse is set
  bool phi_inverse = false;        // phi = componentwise inverse (annulus census)
  std::vector<int> n_ladder = {20, 40, 60};
  ExperimentTolerances tol;
  int boundary_directions = 16;
  std::vector<double> boundary_shells = {1e-1, 1e-2, 1e-3};
  std::optional<Point> point;      // start / evaluation point ("z")
  std::string output_dir = ".";
  std::uint64_t seed = kDefaultDirectionSeed;
};

extern const std::vector<std::string> kCommands;

/// Parses a config JSON document. Throws std::invalid_argument naming the
/// offending field.
ExperimentConfig config_from_json(const Json& j);

/// The config with all defaults filled in; embedded into every report.
Json resolved_config_json(const ExperimentConfig& config);

/// Diagnostics (empty means valid): schema checks, tolerance sanity, and the
/// sampled self-map check on the composition symbol.
std::vector<std::string> validate(const ExperimentConfig& config);

struct RunResult {
  int exit_code = 0;  // 0 success, 2 verdict failure, (1 = error, via exception)
  Json report;
  std::vector<std::string> files;  // paths written, JSON first
};

/// Runs the configured command and writes <command>-<timestamp>.json (and a
/// CSV twin where the command has bulk numeric output) into output_dir.
/// Report contents depend only on the config and seed, never on the clock.
/// Throws on error; the CLI translates exceptions into exit code 1.
RunResult run(const ExperimentConfig& config);

}  // namespace wco

#endif
