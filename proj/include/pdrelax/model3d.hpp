#pragma once

#include <array>

#include "pdrelax/energy_core.hpp"
#include "pdrelax/material_update.hpp"
#include "pdrelax/tensor.hpp"

namespace pdrelax {

// Tensorial material whose yield radius is the reference triangle rho0 over
// the trace interval [tr_min, tr_max].
struct RelaxedMaterial {
  double K;
  double mu;
  double beta;
  double tr_min;
  double tr_max;

  RelaxedMaterial(double K, double mu, double beta, double tr_min, double tr_max);

  // Trace bounds tr = sqrt(2mu/K) y and beta = 2 mu b.
  static RelaxedMaterial from_envelope(double K, double mu, const EnvelopeParams& p);

  double rho0(double tr) const;
  EnvelopeParams envelope() const;
  MaterialParams material() const;  // same moduli with rho = rho0
  double trace_scale() const;       // sqrt(K / 2mu): y1 = trace_scale * tr
};

struct RelaxedValue {
  double energy;
  Region region;
};

// psi_rel(eps) = 2mu f_c(sqrt(K/2mu) tr eps, |dev eps - eps_p,n|); p_n must be 0.
RelaxedValue relaxed_energy_3d(const RelaxedMaterial& rm, const SymTensor& eps, const InternalState& s_n);
SymTensor relaxed_stress_3d(const RelaxedMaterial& rm, const SymTensor& eps, const InternalState& s_n);

// 6x6 tangent in Voigt order xx, yy, zz, yz, xz, xy with engineering shear
// strains, built from forward differences of the stress. Row-major.
struct Tangent {
  std::array<double, 36> C;
  double asymmetry;  // |C - C^T| / |C| before symmetrization
};
Tangent tangent_3d(const RelaxedMaterial& rm, const SymTensor& eps, const InternalState& s_n, double h = -1.0);

}  // namespace pdrelax
