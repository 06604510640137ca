#include "pdrelax/material_update.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pdrelax/errors.hpp"

namespace pdrelax {

MaterialParams::MaterialParams(double K_, double mu_, double beta_, DissipationFunction rho_)
    : K(K_), mu(mu_), beta(beta_), rho(std::move(rho_)) {
  if (!(K > 0.0) || !(mu > 0.0) || !(beta > 0.0)) throw ConfigError("K, mu and beta must be positive");
}

MaterialParams MaterialParams::from_dimensionless(double K, double mu, double b, const DissipationFunction& r) {
  return MaterialParams(K, mu, 2.0 * mu * b, r.rescaled(2.0 * mu, std::sqrt(K / (2.0 * mu))));
}

double free_energy(const MaterialParams& m, const SymTensor& eps, const InternalState& s) {
  double tr = eps.trace();
  double el = (eps.dev() - s.eps_p).norm();
  double ep = s.eps_p.norm();
  return 0.5 * m.K * tr * tr + m.mu * el * el + m.rho(tr) * s.p + 0.5 * m.beta * ep * ep;
}

SymTensor stress(const MaterialParams& m, const SymTensor& eps, const InternalState& s) {
  double tr = eps.trace();
  double drho = 0.0;
  if (s.p != 0.0) {
    auto d = m.rho.slope(tr);
    if (!d) {
      std::ostringstream os;
      os << "rho has a kink at tr eps = " << tr;
      throw NondifferentiableRho(os.str());
    }
    drho = *d;
  }
  return (m.K * tr + drho * s.p) * SymTensor::identity() + 2.0 * m.mu * (eps.dev() - s.eps_p);
}

double yield_function(const MaterialParams& m, const SymTensor& eps, const InternalState& s) {
  SymTensor driving = 2.0 * m.mu * (eps.dev() - s.eps_p) - m.beta * s.eps_p;
  return driving.norm() - m.rho(eps.trace());
}

InternalState incremental_update(const MaterialParams& m, const SymTensor& eps, const InternalState& s_n) {
  SymTensor trial = eps.dev() - s_n.eps_p;
  double len = trial.norm();
  double excess = 2.0 * m.mu * len - m.rho(eps.trace());
  if (excess <= 0.0) return s_n;
  if (len == 0.0) throw DegenerateDirection("plastic step with zero deviatoric driving direction");
  double lambda = excess / (2.0 * m.mu + m.beta);
  InternalState out;
  out.eps_p = s_n.eps_p + (lambda / len) * trial;
  // remove round-off trace so the flow stays deviatoric
  out.eps_p = out.eps_p.dev();
  out.p = s_n.p + lambda;
  return out;
}

double condensed_energy_3d(const MaterialParams& m, const SymTensor& eps, const InternalState& s_n) {
  double tr = eps.trace();
  double len = (eps.dev() - s_n.eps_p).norm();
  double r = m.rho(tr);
  double excess = std::max(0.0, 2.0 * m.mu * len - r);
  return 0.5 * m.K * tr * tr + m.mu * len * len + r * s_n.p - 0.5 * excess * excess / (2.0 * m.mu + m.beta);
}

double incremental_functional(const MaterialParams& m, const SymTensor& eps, const InternalState& s_n,
                              const InternalState& trial) {
  double step = (trial.eps_p - s_n.eps_p).norm();
  // tolerate round-off in p computed as p_n + |d eps_p|
  if (trial.p - s_n.p < step - 1e-12 * (step + std::abs(s_n.p))) return std::numeric_limits<double>::infinity();
  return free_energy(m, eps, trial);
}

}  // namespace pdrelax
