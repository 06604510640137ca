#include "pdrelax/model3d.hpp"

#include <algorithm>
#include <cmath>

#include "pdrelax/errors.hpp"

namespace pdrelax {

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

void require_virgin(const InternalState& s) {
  if (s.p != 0.0) throw UnsupportedState("relaxed 3D energy is only defined for p_n = 0");
}

}  // namespace

RelaxedMaterial::RelaxedMaterial(double K_, double mu_, double beta_, double lo, double hi)
    : K(K_), mu(mu_), beta(beta_), tr_min(lo), tr_max(hi) {
  if (!(K > 0.0) || !(mu > 0.0) || !(beta > 0.0)) throw ConfigError("K, mu and beta must be positive");
  if (!(tr_min < tr_max)) throw ConfigError("trace bounds need tr_min < tr_max");
}

RelaxedMaterial RelaxedMaterial::from_envelope(double K, double mu, const EnvelopeParams& p) {
  double s = std::sqrt(2.0 * mu / K);
  return RelaxedMaterial(K, mu, 2.0 * mu * p.b, s * p.y_min, s * p.y_max);
}

double RelaxedMaterial::trace_scale() const { return std::sqrt(K / (2.0 * mu)); }

double RelaxedMaterial::rho0(double tr) const {
  double half = 0.5 * (tr_max - tr_min), mid = 0.5 * (tr_max + tr_min);
  return std::sqrt(beta * K) * std::max(0.0, half - std::abs(tr - mid));
}

EnvelopeParams RelaxedMaterial::envelope() const {
  double k = trace_scale();
  return EnvelopeParams(beta / (2.0 * mu), k * tr_min, k * tr_max);
}

MaterialParams RelaxedMaterial::material() const {
  double half = 0.5 * (tr_max - tr_min);
  return MaterialParams(K, mu, beta, DissipationFunction::triangle(tr_min, tr_max, std::sqrt(beta * K) * half));
}

RelaxedValue relaxed_energy_3d(const RelaxedMaterial& rm, const SymTensor& eps, const InternalState& s_n) {
  require_virgin(s_n);
  const double K = rm.K, mu = rm.mu, beta = rm.beta;
  const double tr = eps.trace();
  const double q = (eps.dev() - s_n.eps_p).norm();
  const EnvelopeParams p = rm.envelope();
  const Region reg = classify(p, rm.trace_scale() * tr, q);
  const double elastic = 0.5 * K * tr * tr + mu * q * q;
  const double rho0 = rm.rho0(tr);
  const double soft = 2.0 * mu * beta / (2.0 * mu + beta);
  double psi = 0.0;
  switch (reg.tag) {
    case RegionTag::YTilde:
      psi = 0.5 * K * tr * tr + 0.5 * soft * q * q;
      break;
    case RegionTag::Y1:
      psi = elastic;
      break;
    case RegionTag::Y2:
    case RegionTag::Y3: {
      double d = q - rho0 / (2.0 * mu);
      psi = elastic - 4.0 * mu * mu / (2.0 * (2.0 * mu + beta)) * d * d;
      if (reg.tag == RegionTag::Y3) {
        double e = q + rho0 / beta -
                   (2.0 * mu + beta) / (2.0 * mu) * std::sqrt(K / beta) * 0.5 * (rm.tr_max - rm.tr_min);
        psi -= 0.5 * soft * e * e;
      }
      break;
    }
    case RegionTag::Y4:
      psi = 0.5 * K * tr * tr + 0.5 * soft * q * q + 0.5 * K * (tr - rm.tr_min) * (rm.tr_max - tr);
      break;
  }
  return {psi, reg};
}

SymTensor relaxed_stress_3d(const RelaxedMaterial& rm, const SymTensor& eps, const InternalState& s_n) {
  require_virgin(s_n);
  const double K = rm.K, mu = rm.mu, beta = rm.beta;
  const double tr = eps.trace();
  const SymTensor a = eps.dev() - s_n.eps_p;
  const double q = a.norm();
  const double y1 = rm.trace_scale() * tr;
  const EnvelopeParams p = rm.envelope();
  if (y1 == p.y_min || y1 == p.y_max || tr == rm.tr_min || tr == rm.tr_max)
    throw NondifferentiablePoint("relaxed stress undefined at the trace bounds");
  const Region reg = classify(p, y1, q);
  const SymTensor I = SymTensor::identity();
  const double soft = 2.0 * mu * beta / (2.0 * mu + beta);
  const double mid = 0.5 * (rm.tr_max + rm.tr_min);
  // slope of rho0; the printed formulas take the branch tr > mid
  const double drho0 = std::sqrt(beta * K) * sgn(mid - tr);
  const double rho0 = rm.rho0(tr);

  auto unit = [&]() {
    if (q == 0.0) throw DegenerateDeviator("plastic branch needs a nonzero deviator");
    return (1.0 / q) * a;
  };

  switch (reg.tag) {
    case RegionTag::YTilde:
      return K * tr * I + soft * a;
    case RegionTag::Y1:
      return K * tr * I + 2.0 * mu * a;
    case RegionTag::Y2:
    case RegionTag::Y3: {
      SymTensor n = unit();
      double d = q - rho0 / (2.0 * mu);
      SymTensor s = K * tr * I + 2.0 * mu * a - (4.0 * mu * mu / (2.0 * mu + beta)) * d * n +
                    (2.0 * mu / (2.0 * mu + beta)) * d * drho0 * I;
      if (reg.tag == RegionTag::Y3) {
        double e = q + rho0 / beta -
                   (2.0 * mu + beta) / (2.0 * mu) * std::sqrt(K / beta) * 0.5 * (rm.tr_max - rm.tr_min);
        s -= (2.0 * mu / (2.0 * mu + beta)) * e * drho0 * I;
        s -= soft * e * n;
      }
      return s;
    }
    case RegionTag::Y4:
      return K * tr * I + soft * a + K * (mid - tr) * I;
  }
  return {};
}

Tangent tangent_3d(const RelaxedMaterial& rm, const SymTensor& eps, const InternalState& s_n, double h) {
  if (h <= 0.0) h = 1e-7 * (1.0 + eps.norm());
  const SymTensor base = relaxed_stress_3d(rm, eps, s_n);
  Tangent t{};
  for (int k = 0; k < 6; ++k) {
    SymTensor e = eps;
    e[k] += k < 3 ? h : 0.5 * h;  // engineering shear: gamma = 2 eps_ij
    SymTensor s = relaxed_stress_3d(rm, e, s_n);
    for (int i = 0; i < 6; ++i) t.C[i * 6 + k] = (s[i] - base[i]) / h;
  }
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      double d = t.C[i * 6 + j] - t.C[j * 6 + i];
      num += d * d;
      den += t.C[i * 6 + j] * t.C[i * 6 + j];
    }
  t.asymmetry = den > 0.0 ? std::sqrt(num / den) : 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      double m = 0.5 * (t.C[i * 6 + j] + t.C[j * 6 + i]);
      t.C[i * 6 + j] = t.C[j * 6 + i] = m;
    }
  return t;
}

}  // namespace pdrelax
