#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "pdrelax/convex_oracle.hpp"
#include "pdrelax/energy_core.hpp"
#include "pdrelax/fem1d.hpp"
#include "pdrelax/fem2d.hpp"
#include "pdrelax/model3d.hpp"

namespace pdrelax::cli {

using json = nlohmann::json;

// Physical dimension of a config quantity. Stresses accept Pa, kPa, MPa, GPa,
// angles "deg"; dimensionless values must say "1".
enum class Dim { One, Stress, Angle };

// Reads {"value": x, "unit": "..."} and converts to SI. Throws ConfigError.
double quantity(const json& node, const std::string& key, Dim dim);
double quantity_or(const json& node, const std::string& key, Dim dim, double fallback);
json make_quantity(double value, Dim dim);

struct YieldSpec {
  std::string kind = "quadratic";  // quadratic, reference, triangle, constant_cap
  double y0 = -0.0385;
  double peak = 0.016;   // r_max for the quadratic, apex value for the triangle
  double level = 0.0;    // constant_cap

  DissipationFunction build(const EnvelopeParams& p) const;
};

struct EnvelopeCheckConfig {
  double b = 0.095, y_min = -0.058, y_max = 0.00107;
  YieldSpec r;
  double margin = 0.02;  // window padding in y1
  int nodes = 201;
  double tolerance_constant = 0.00505;
  bool recalibrate = true;  // re-measure the double-well constant and require 5% agreement
};

struct Fem1DCase {
  std::string name;
  double v_ext;
};

struct Fem1DConfig {
  Experiment1D base;
  std::vector<Fem1DCase> cases{{"a", 0.002}, {"b", 0.01}, {"c", 0.05}, {"d", 0.08}};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<EnergyKind> energies{EnergyKind::Condensed, EnergyKind::Relaxed};
  double equal_tol = 1e-8;
  double gap_max = 0.30;
  double cluster_radius = 0.1;  // in units of s_star
};

struct StrainPath {
  std::string name;
  SymTensor from, to;
  int steps = 400;
};

struct PointProbeConfig {
  double K = 3.9e9, mu = 2.8e9, b = 0.095, y_min = -0.058, y_max = 0.00107;
  std::vector<StrainPath> paths;
  double fd_tol = 1e-6;
  double jump_tol = 1e-6;
};

struct PlateConfig {
  double K = 3.9e9, mu = 2.8e9, b = 0.095, y_min = -0.058, y_max = 0.00107;
  double y0 = -0.0385, r_max = 0.016;  // fitted yield radius, used by the condensed law
  double hole_radius = 0.2;
  double grading = 1.0;
  std::vector<int> levels{0, 1};
  std::string mesh_file;  // replaces the generated pair when set
  LoadProgram program;
  PlateEnergy energy = PlateEnergy::Relaxed;
  double tolerance = 0.05;
  bool vtk = true;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> refine;
  std::optional<std::string> energy;
};

// A parsed command config. `canonical` is the effective configuration with all
// defaults and overrides applied; its hash tags every output.
struct RunConfig {
  std::string command;
  std::string out_dir;
  std::uint64_t seed = 0;
  json canonical;
  std::variant<EnvelopeCheckConfig, Fem1DConfig, PointProbeConfig, PlateConfig> body;

  std::string provenance() const;
};

RunConfig load_config(const std::string& command, const json& raw, const std::string& out_dir,
                      const Overrides& over, const std::string& config_dir);

}  // namespace pdrelax::cli
