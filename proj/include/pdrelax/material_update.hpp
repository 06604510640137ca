#pragma once

#include "pdrelax/energy_core.hpp"
#include "pdrelax/tensor.hpp"

namespace pdrelax {

// Bulk, shear and hardening moduli plus the pressure-dependent yield radius
// rho(tr eps), all in stress units.
struct MaterialParams {
  double K;
  double mu;
  double beta;
  DissipationFunction rho;

  MaterialParams(double K, double mu, double beta, DissipationFunction rho);

  // rho(t) = 2 mu r(sqrt(K/2mu) t) and beta = 2 mu b.
  static MaterialParams from_dimensionless(double K, double mu, double b, const DissipationFunction& r);
};

struct InternalState {
  SymTensor eps_p;  // deviatoric plastic strain
  double p = 0.0;   // equivalent plastic strain
};

double free_energy(const MaterialParams& m, const SymTensor& eps, const InternalState& s);
SymTensor stress(const MaterialParams& m, const SymTensor& eps, const InternalState& s);
double yield_function(const MaterialParams& m, const SymTensor& eps, const InternalState& s);

// Closed-form one-step update: radial return on dev eps - eps_p,n with the
// excess [2mu |dev eps - eps_p,n| - rho]_+ / (2mu + beta), then p += |d eps_p|.
InternalState incremental_update(const MaterialParams& m, const SymTensor& eps, const InternalState& s_n);

// Energy left after minimizing out the internal variables for one step. The
// constant beta/2 |eps_p,n|^2 is dropped.
double condensed_energy_3d(const MaterialParams& m, const SymTensor& eps, const InternalState& s_n);

// psi(eps, eps_p, p) plus the dissipation distance, which is 0 when
// p - p_n >= |eps_p - eps_p,n| and +inf otherwise.
double incremental_functional(const MaterialParams& m, const SymTensor& eps, const InternalState& s_n,
                              const InternalState& trial);

}  // namespace pdrelax
