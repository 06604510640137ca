#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pdrelax/energy_core.hpp"

namespace pdrelax {

// Two downward parabolas meeting at (y0, r_max) and vanishing at y_min, y_max.
struct QuadraticYieldFit {
  double y_min = -0.058;
  double y_max = 0.00107;
  double y0 = -0.0385;
  double r_max = 0.016;

  DissipationFunction function() const;
};

enum class EnergyKind { Condensed, Relaxed };
std::string to_string(EnergyKind k);

// One-increment bar problem in dimensionless form. Element gradients map to
// the energy plane as y1 = y1_scale * u', y2 = y2_scale * v'.
struct Experiment1D {
  int n = 80;
  double L = 1.0;
  double u_ext = -0.0454;
  double v_ext = 0.05;
  double b = 0.095;
  double alpha = 1.0;
  std::uint64_t seed = 1;
  EnergyKind kind = EnergyKind::Condensed;
  QuadraticYieldFit fit;
  double y1_scale = 1.0;
  double y2_scale = 1.0;
  int max_iter = 10000;

  void validate() const;
  EnvelopeParams envelope() const { return EnvelopeParams(b, fit.y_min, fit.y_max); }
  Vec2 y_ext() const { return {y1_scale * u_ext / L, y2_scale * v_ext / L}; }
};

struct NodalArrays {
  std::vector<double> u;
  std::vector<double> v;
};

struct MeshSolution {
  NodalArrays nodes;
  std::vector<Vec2> grads;  // per-element (y1, y2)
  std::vector<Region> regions;
  double energy = 0.0;
  int iterations = 0;
  double stationarity = 0.0;
};

double total_energy(const Experiment1D& e, const NodalArrays& sol);
NodalArrays initial_guess(const Experiment1D& e);
NodalArrays affine_solution(const Experiment1D& e);

// Limited-memory quasi-Newton descent from initial_guess. Kinks of the
// density in y1 are handled through one-sided slopes, and stationarity is
// measured with the best subgradient selection within 1e-9 of a kink.
MeshSolution minimize(const Experiment1D& e);

// Case of the bar experiment the boundary data falls into.
enum class Regime { A, B, C, D, Outside };
std::string to_string(Regime r);
Regime regime_of(const Experiment1D& e);

// Assignment of element gradients to the triangle corners (apex, y_min side,
// y_max side) on the side of y2 = sign. Lloyd iterations start from the
// corners; a gradient is a hit when it is within radius of its own corner.
struct CornerClusters {
  std::array<Vec2, 3> corners;
  std::array<Vec2, 3> centroids;
  std::array<int, 3> counts{};
  std::vector<int> label;
  std::vector<double> distance;  // to the corner of the assigned cluster
  int misses = 0;
  double worst = 0.0;
};
CornerClusters corner_clusters(const EnvelopeParams& p, const std::vector<Vec2>& grads, int sign, double radius);

// Uniform [-1, 1) stream used for the perturbation; fixed for a given seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double symmetric_unit() { return 2.0 * static_cast<double>(next() >> 11) * 0x1.0p-53 - 1.0; }

 private:
  std::uint64_t state_;
};

}  // namespace pdrelax
