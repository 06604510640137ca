#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pdrelax/energy_core.hpp"
#include "pdrelax/model3d.hpp"

namespace pdrelax {

struct PlaneStrainMesh {
  std::vector<std::array<double, 2>> nodes;
  std::vector<std::array<int, 4>> quads;  // counter-clockwise
  std::vector<int> fixed;                 // both components held at zero
  std::vector<int> loaded;                // u_x prescribed, u_y free

  // Throws ConfigError on bad indices, overlapping boundary sets or a
  // non-positive Jacobian at any quadrature point.
  void validate() const;
  int n_dofs() const { return 2 * static_cast<int>(nodes.size()); }
};

// Unit square with a centred hole, meshed as an O-grid of four sectors with
// 10 * 2^level cells along each sector and in the radial direction. Radial
// spacing grows geometrically by `grading` from the hole outward.
PlaneStrainMesh plate_with_hole(int level, double hole_radius = 0.2, double grading = 1.0);

PlaneStrainMesh read_mesh_json(std::istream& is);
void write_mesh_json(const PlaneStrainMesh& mesh, std::ostream& os);

enum class PlateEnergy { Relaxed, Condensed };

// Constitutive law seen by the plate: the relaxed tensorial envelope, or the
// condensed energy of the same material behind a flag. Every point starts
// from the virgin state, so the response is path independent.
struct PlateMaterial {
  RelaxedMaterial rm;
  PlateEnergy kind = PlateEnergy::Relaxed;
  // Law behind the condensed flag. When empty the reference triangle of rm is
  // used, whose condensed energy equals the envelope on Y1 and Y2.
  std::optional<MaterialParams> condensed_law;

  // Condensed flag set, with the dimensionless yield radius r of the material.
  static PlateMaterial condensed(const RelaxedMaterial& rm, const DissipationFunction& r);

  double energy(const SymTensor& eps) const;
  SymTensor stress(const SymTensor& eps) const;
  RegionTag region(const SymTensor& eps) const;
  // In-plane 3x3 block (xx, yy, xy with engineering shear), row-major.
  std::array<double, 9> tangent(const SymTensor& eps) const;
};

struct Assembly {
  std::vector<double> residual;  // internal force, all dofs
  // Upper and lower entries of the global tangent as (row, col, value);
  // duplicates are summed by the consumer.
  std::vector<std::array<double, 3>> tangent;
  double energy = 0.0;
};

Assembly assemble(const PlaneStrainMesh& mesh, const PlateMaterial& mat, const std::vector<double>& u,
                  bool with_tangent = true);
double total_energy(const PlaneStrainMesh& mesh, const PlateMaterial& mat, const std::vector<double>& u);

// Annular sector next to the hole (angles in degrees). Quantities are
// averaged over the quadrature points of elements whose centroid lies inside,
// so meshes of different density report comparable values.
struct MonitorPatch {
  std::array<double, 2> center{0.5, 0.5};
  double r_in = 0.2;
  double r_out = 0.23;
  double theta_lo = 81.0;
  double theta_hi = 99.0;

  bool contains(std::array<double, 2> x) const;
};

struct LoadProgram {
  int n_steps = 100;
  double u_final = -4e-4;  // right edge displacement at the end, compression negative
  // top of the hole, its neighbour towards the loaded edge, bottom
  std::vector<MonitorPatch> monitors{MonitorPatch{}, MonitorPatch{{0.5, 0.5}, 0.2, 0.23, 63.0, 81.0},
                                     MonitorPatch{{0.5, 0.5}, 0.2, 0.23, 261.0, 279.0}};
  int max_newton = 30;
  int max_halvings = 3;

  void validate() const;
};

struct MonitorSample {
  int n_elements;
  double sxx, syy, sxy, szz;
  double ux;
  RegionTag region;        // of the patch-averaged strain
  double yielded_fraction;  // area share of points outside Y1
};

struct StepRecord {
  int step;
  double load_factor;
  int newton_iterations;
  double residual_norm;
  double energy;
  std::vector<MonitorSample> monitors;
  std::vector<RegionTag> qp_regions;  // element-major, 4 per element
  // Energy at the start of each Newton solve and after every accepted update,
  // one list per (sub)increment of the converged attempt.
  std::vector<std::vector<double>> newton_energies;
};

struct ProgramResult {
  std::vector<StepRecord> steps;
  std::vector<double> u;  // final displacement
};

ProgramResult solve_program(const PlaneStrainMesh& mesh, const PlateMaterial& mat, const LoadProgram& lp);

// Element containing a physical point and its local coordinates.
struct Location {
  int element;
  double xi, eta;
};
Location locate(const PlaneStrainMesh& mesh, std::array<double, 2> x);

// Strain at a local point of an element under the displacement u.
SymTensor element_strain(const PlaneStrainMesh& mesh, int element, double xi, double eta,
                         const std::vector<double>& u);

// Sum of x and y reactions over the fixed and the loaded edges.
struct Reactions {
  double fixed_x, fixed_y, loaded_x, loaded_y;
};
Reactions reactions(const PlaneStrainMesh& mesh, const PlateMaterial& mat, const std::vector<double>& u);

// Monitor history as CSV, one row per step with six columns per monitor.
void write_monitor_csv(const ProgramResult& r, std::ostream& os, const std::string& provenance);

// Legacy ASCII VTK: displacement at nodes, centroid stresses and region tag
// per cell.
void write_vtk(const PlaneStrainMesh& mesh, const PlateMaterial& mat, const std::vector<double>& u,
               std::ostream& os);

}  // namespace pdrelax
