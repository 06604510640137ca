// Acceptance runner: one line per criterion, "criterion N PASS|FAIL <summary>".
// Exit status is 0 only when every selected criterion passes.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdrelax/convex_oracle.hpp"
#include "pdrelax/energy_core.hpp"
#include "pdrelax/errors.hpp"
#include "pdrelax/fem1d.hpp"
#include "pdrelax/fem2d.hpp"
#include "pdrelax/material_update.hpp"
#include "pdrelax/model3d.hpp"
#include "pdrelax/provenance.hpp"

using namespace pdrelax;

namespace {

// Oracle error constant: flat-part error over grid step on the double-well
// fixture below, measured once and frozen here.
constexpr double kFrozenC = 0.00505;
constexpr double K = 3.9e9, MU = 2.8e9;

EnvelopeParams params() { return {0.095, -0.058, 0.00107}; }
DissipationFunction fitted() { return QuadraticYieldFit{}.function(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double operator()(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
};

std::string num(double x, int digits = 3) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Rect window(const EnvelopeParams& p) { return {p.y_min - 0.02, p.y_max + 0.02, -2 * p.y2_star(), 2 * p.y2_star()}; }

GridFunction condensed_hull(const EnvelopeParams& p, const DissipationFunction& r, int n) {
  return lower_convex_hull(sample([&](double a, double b) { return condensed_energy(p, r, {a, b}); }, window(p), n, n));
}

Outcome envelope_equivalence() {
  auto t0 = std::chrono::steady_clock::now();
  auto p = params();
  double c_now = double_well_constant();
  const int n = 201;
  auto hull = condensed_hull(p, fitted(), n);
  double h = std::max(hull.h1(), hull.h2());
  double tol = kFrozenC * h;
  double worst = 0, sum_inner = 0;
  int inner = 0;
  std::map<RegionTag, double> by_region;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double y1 = hull.node1(i), y2 = hull.node2(j);
      double e = std::abs(hull(i, j) - relaxed_energy(p, {y1, y2}));
      worst = std::max(worst, e);
      auto& slot = by_region[classify(p, y1, y2).tag];
      slot = std::max(slot, e);
      if (i > 0 && j > 0 && i < n - 1 && j < n - 1) {
        sum_inner += e;
        ++inner;
      }
    }
  Outcome o;
  bool calibrated = std::abs(c_now - kFrozenC) <= 0.05 * kFrozenC;
  o.pass = worst <= tol && calibrated;
  o.detail = "max " + num(worst) + " <= C*h " + num(tol) + " (C " + num(kFrozenC) + ", fixture " + num(c_now, 4) +
             ", h " + num(h) + "), interior mean " + num(sum_inner / inner) + ", per region max";
  for (auto& [tag, e] : by_region) o.detail += " " + to_string(tag) + "=" + num(e, 2);
  o.detail += ", " + num(seconds_since(t0), 2) + " s";
  return o;
}

Outcome reference_hull_agreement() {
  auto t0 = std::chrono::steady_clock::now();
  auto p = params();
  const int n = 201;
  auto a = condensed_hull(p, fitted(), n);
  auto b = condensed_hull(p, DissipationFunction::reference(p), n);
  double tol = kFrozenC * std::max(a.h1(), a.h2());
  double worst = 0;
  for (size_t k = 0; k < a.values().size(); ++k) worst = std::max(worst, std::abs(a.values()[k] - b.values()[k]));
  Outcome o;
  o.pass = worst <= tol;
  o.detail = "hulls of f(r) and f(r0) differ by at most " + num(worst) + " <= " + num(tol) + ", " +
             num(seconds_since(t0), 2) + " s";
  return o;
}

Outcome envelope_structure() {
  auto t0 = std::chrono::steady_clock::now();
  auto p = params();
  auto r = fitted();
  Rng rng(31);
  double elastic_diff = 0, worst_excess = -1;
  int elastic = 0;
  for (int k = 0; k < 1000000; ++k) {
    double y1 = rng(p.y_min - 0.03, p.y_max + 0.03), y2 = rng(-0.3, 0.3);
    double fc = relaxed_energy(p, {y1, y2}), f = condensed_energy(p, r, {y1, y2});
    worst_excess = std::max(worst_excess, fc - f);
    RegionTag t = classify(p, y1, y2).tag;
    if (t == RegionTag::YTilde || t == RegionTag::Y1) {
      elastic_diff = std::max(elastic_diff, std::abs(fc - f));
      ++elastic;
    }
  }
  // barycentric samples of the two triangles
  double affine_err = 0;
  for (int sign : {1, -1}) {
    Vec2 a = touching_point(p, Corner::Apex, sign), m = touching_point(p, Corner::AtMin, sign),
         x = touching_point(p, Corner::AtMax, sign);
    double fa = relaxed_energy(p, {a[0], a[1]}), fm = relaxed_energy(p, {m[0], m[1]}),
           fx = relaxed_energy(p, {x[0], x[1]});
    for (int k = 0; k < 50000; ++k) {
      double u = rng(0, 1), v = rng(0, 1);
      if (u + v > 1) u = 1 - u, v = 1 - v;
      double w = 1 - u - v;
      double e = relaxed_energy(p, {w * a[0] + u * m[0] + v * x[0], w * a[1] + u * m[1] + v * x[1]});
      affine_err = std::max(affine_err, std::abs(e - (w * fa + u * fm + v * fx)));
    }
  }
  double convex_violation = 0;
  for (int k = 0; k < 100000; ++k) {
    EnergyPoint x{rng(-0.1, 0.04), rng(-0.3, 0.3)}, y{rng(-0.1, 0.04), rng(-0.3, 0.3)};
    double fm = relaxed_energy(p, {0.5 * (x.y1 + y.y1), 0.5 * (x.y2 + y.y2)});
    double avg = 0.5 * (relaxed_energy(p, x) + relaxed_energy(p, y));
    convex_violation = std::max(convex_violation, (fm - avg) / std::max(std::abs(avg), 1e-300));
  }
  Outcome o;
  o.pass = elastic_diff == 0.0 && worst_excess <= 0.0 && affine_err <= 1e-12 && convex_violation <= 1e-12;
  o.detail = "elastic-set mismatch " + num(elastic_diff) + " over " + std::to_string(elastic) +
             " points, max(f_c - f) " + num(worst_excess) + " on 1e6 samples, triangle affinity " + num(affine_err) +
             ", midpoint violation " + num(convex_violation) + " relative, " + num(seconds_since(t0), 2) + " s";
  return o;
}

// Point strictly inside a region, so a stencil of half-width margin stays there.
Vec2 interior_point(Rng& rng, const EnvelopeParams& p, RegionTag t, double margin) {
  for (;;) {
    double y1 = rng(p.y_min - 0.03, p.y_max + 0.03), y2 = rng(-0.25, 0.25);
    Region c = classify(p, y1, y2);
    if (c.tag != t) continue;
    if (std::abs(y1 - p.y_mid()) < margin) continue;  // r0 peak
    bool inside = true;
    for (double d1 : {-margin, 0.0, margin})
      for (double d2 : {-margin, 0.0, margin}) inside &= classify(p, y1 + d1, y2 + d2) == c;
    if (inside) return {y1, y2};
  }
}

SymTensor unit_deviator(Rng& rng) {
  SymTensor d;
  for (int k = 0; k < 6; ++k) d[k] = rng(-1, 1);
  d = d.dev();
  return (1.0 / d.norm()) * d;
}

Outcome gradient_checks() {
  auto t0 = std::chrono::steady_clock::now();
  auto p = params();
  auto rm = RelaxedMaterial::from_envelope(K, MU, p);
  Rng rng(41);
  const int per_region = 10000;
  const double h = 1e-7, margin = 1e-5;
  double worst2d = 0, worst3d = 0;
  std::string detail;
  for (RegionTag t : {RegionTag::YTilde, RegionTag::Y1, RegionTag::Y2, RegionTag::Y3, RegionTag::Y4}) {
    double w2 = 0, w3 = 0;
    for (int k = 0; k < per_region; ++k) {
      Vec2 y = interior_point(rng, p, t, margin);
      Vec2 g = relaxed_gradient(p, {y[0], y[1]});
      double d1 = (relaxed_energy(p, {y[0] + h, y[1]}) - relaxed_energy(p, {y[0] - h, y[1]})) / (2 * h);
      double d2 = (relaxed_energy(p, {y[0], y[1] + h}) - relaxed_energy(p, {y[0], y[1] - h})) / (2 * h);
      double gn = std::hypot(g[0], g[1]);
      w2 = std::max(w2, std::max(std::abs(d1 - g[0]), std::abs(d2 - g[1])) / gn);

      // the same point as a tensor with a random deviatoric direction
      SymTensor e = (y[0] / rm.trace_scale() / 3.0) * SymTensor::identity() + std::abs(y[1]) * unit_deviator(rng);
      SymTensor sig = relaxed_stress_3d(rm, e, {});
      double hs = 1e-7 * (std::abs(e.trace()) + e.dev().norm());
      double err = 0;
      for (int i = 0; i < 6; ++i) {
        SymTensor a = e, b = e;
        a[i] += hs;
        b[i] -= hs;
        double d = (relaxed_energy_3d(rm, a, {}).energy - relaxed_energy_3d(rm, b, {}).energy) / (2 * hs);
        err = std::max(err, std::abs(d - (i < 3 ? sig[i] : 2 * sig[i])));
      }
      w3 = std::max(w3, err / sig.norm());
    }
    worst2d = std::max(worst2d, w2);
    worst3d = std::max(worst3d, w3);
    detail += " " + to_string(t) + " " + num(w2, 2) + "/" + num(w3, 2);
  }
  Outcome o;
  o.pass = worst2d <= 1e-6 && worst3d <= 1e-6;
  o.detail = "max relative FD error (gradient/stress) per region:" + detail + ", " +
             std::to_string(per_region) + " points each, " + num(seconds_since(t0), 2) + " s";
  return o;
}

// Minimizer of psi + D over (eps_p, p), computed without the closed-form update.
// For a step of length t the best direction maximizes its inner product with
// 2mu a - beta eps_p,n (a = dev eps - eps_p,n); t is then found by golden section.
InternalState numeric_update(const MaterialParams& m, const SymTensor& eps, const InternalState& sn) {
  SymTensor a = eps.dev() - sn.eps_p;
  SymTensor drive = 2.0 * m.mu * a - m.beta * sn.eps_p;
  double dn = drive.norm();
  if (dn == 0.0) return sn;
  SymTensor n = (1.0 / dn) * drive;
  auto along = [&](double t) { return incremental_functional(m, eps, sn, {sn.eps_p + t * n, sn.p + t}); };
  double hi = dn / (2.0 * m.mu + m.beta) * 2.0 + 1e-12;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.0, x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = along(x1), f2 = along(x2);
  for (int it = 0; it < 300 && hi - lo > 1e-18; ++it) {
    if (f1 < f2) {
      hi = x2, x2 = x1, f2 = f1, x1 = hi - g * (hi - lo), f1 = along(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2, x2 = lo + g * (hi - lo), f2 = along(x2);
    }
  }
  double t = 0.5 * (lo + hi);
  if (along(0.0) <= along(t)) t = 0.0;
  return {sn.eps_p + t * n, sn.p + t};
}

// Kuhn-Tucker residual of the discrete flow, in units of 2mu.
double kt_residual(const MaterialParams& m, const SymTensor& eps, const InternalState& sn, const InternalState& s) {
  double phi = yield_function(m, eps, s) / (2.0 * m.mu);
  double step = (s.eps_p - sn.eps_p).norm();
  if (step == 0.0) return std::max(phi, 0.0);
  // flow direction must be the normalized driving stress
  SymTensor drive = 2.0 * m.mu * (eps.dev() - s.eps_p) - m.beta * s.eps_p;
  double dn = drive.norm();
  double misalign = dn == 0.0 ? 1.0 : ((1.0 / step) * (s.eps_p - sn.eps_p) - (1.0 / dn) * drive).norm();
  return std::max({std::abs(phi), misalign * dn / (2.0 * m.mu)});
}

Outcome update_consistency() {
  auto t0 = std::chrono::steady_clock::now();
  auto m = MaterialParams::from_dimensionless(K, MU, 0.095, fitted());
  double tr_lo = m.rho.lo(), tr_hi = m.rho.hi();
  Rng rng(51);
  double worst = 0, worst_kt = 0, virgin = 0, virgin_kt = 0;
  int plastic = 0;
  for (int k = 0; k < 1000; ++k) {
    bool fresh = k % 4 == 0;
    InternalState sn;
    if (!fresh) {
      sn.eps_p = rng(0.0, 5e-3) * unit_deviator(rng);
      sn.p = sn.eps_p.norm() + rng(0.0, 2e-3);
    }
    SymTensor eps = (rng(tr_lo, tr_hi) / 3.0) * SymTensor::identity() + sn.eps_p + rng(0.0, 2e-2) * unit_deviator(rng);
    InternalState got = incremental_update(m, eps, sn);
    InternalState ref = numeric_update(m, eps, sn);
    double diff = std::max((got.eps_p - ref.eps_p).norm(), std::abs(got.p - ref.p));
    double kt = kt_residual(m, eps, sn, got);
    if (got.p > sn.p) ++plastic;
    worst = std::max(worst, diff);
    worst_kt = std::max(worst_kt, kt);
    if (fresh) {
      virgin = std::max(virgin, diff);
      virgin_kt = std::max(virgin_kt, kt);
    }
  }
  Outcome o;
  o.pass = worst <= 1e-8 && worst_kt <= 1e-10;
  o.detail = "1000 states (" + std::to_string(plastic) + " plastic): max |update - numeric argmin| " + num(worst) +
             ", max KT residual " + num(worst_kt) + "; virgin subset " + num(virgin) + " / " + num(virgin_kt) +
             " (the closed form omits the back stress of eps_p,n), " + num(seconds_since(t0), 2) + " s";
  return o;
}

Outcome bar_regimes() {
  auto t0 = std::chrono::steady_clock::now();
  struct Case {
    char name;
    double v;
  };
  const std::array<Case, 4> cases{{{'a', 0.002}, {'b', 0.01}, {'c', 0.05}, {'d', 0.08}}};
  Outcome o;
  std::string detail;
  bool relaxed_ok = true;
  int below_affine = 0, runs = 0;
  for (const Case& c : cases) {
    Experiment1D e;
    e.v_ext = c.v;
    auto p = e.envelope();
    Vec2 y = e.y_ext();
    double target = e.L * relaxed_energy(p, {y[0], y[1]});
    e.kind = EnergyKind::Condensed;
    double affine = total_energy(e, affine_solution(e));
    double gap_lo = 1e300, gap_hi = -1e300;
    int misses = 0;
    double far = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      e.seed = seed;
      e.kind = EnergyKind::Relaxed;
      MeshSolution rel = minimize(e);
      relaxed_ok &= std::abs(rel.energy - target) <= 1e-8 * std::abs(target);
      e.kind = EnergyKind::Condensed;
      MeshSolution con = minimize(e);
      double gap = (con.energy - rel.energy) / std::abs(rel.energy);
      gap_lo = std::min(gap_lo, gap);
      gap_hi = std::max(gap_hi, gap);
      ++runs;
      if (con.energy < affine) ++below_affine;
      if (c.name == 'd') {
        CornerClusters cc = corner_clusters(p, con.grads, y[1] >= 0 ? 1 : -1, 0.1 * p.s_star());
        misses += cc.misses;
        far = std::max(far, cc.worst);
      }
    }
    bool ok = c.name == 'a' ? std::abs(gap_hi) <= 1e-8 && std::abs(gap_lo) <= 1e-8
                            : gap_lo > 0.0 && gap_hi <= 0.30;
    if (c.name == 'd') ok &= misses == 0;
    o.pass &= ok;
    detail += std::string(" (") + c.name + ") v=" + num(c.v) + " " + to_string(regime_of(e)) + " gap " +
              num(100 * gap_lo, 4) + "%.." + num(100 * gap_hi, 4) + "%" + (ok ? "" : " FAIL");
    if (c.name == 'd')
      detail += ", " + std::to_string(misses) + "/400 gradients outside 0.1 s* of the corners (worst " + num(far) + ")";
    detail += ";";
  }
  o.pass &= relaxed_ok;
  o.detail = "n=80, alpha=1, seeds 1-5:" + detail + " relaxed runs at L f_c(y_ext) " +
             std::string(relaxed_ok ? "yes" : "no") + "; condensed below affine in " + std::to_string(below_affine) +
             "/" + std::to_string(runs) + ", " + num(seconds_since(t0), 2) + " s";
  return o;
}

std::array<std::array<double, 3>, 3> random_rotation(Rng& rng) {
  double q[4], n = 0;
  for (double& x : q) {
    x = rng(-1, 1);
    n += x * x;
  }
  n = std::sqrt(n);
  double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
  return {{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
           {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
           {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}}};
}

Outcome substitution_identity() {
  auto t0 = std::chrono::steady_clock::now();
  auto p = params();
  auto rm = RelaxedMaterial::from_envelope(K, MU, p);
  Rng rng(71);
  auto random_tensor = [&] {
    SymTensor e;
    for (int i = 0; i < 6; ++i) e[i] = rng(-0.04, 0.04);
    return e + (rng(-0.09, 0.03) / rm.trace_scale() / 3.0) * SymTensor::identity();
  };
  double worst = 0;
  for (int k = 0; k < 100000; ++k) {
    SymTensor e = random_tensor();
    InternalState sn;
    if (k % 2) sn.eps_p = rng(0.0, 0.02) * unit_deviator(rng);
    double psi = relaxed_energy_3d(rm, e, sn).energy;
    double fc = relaxed_energy(p, {rm.trace_scale() * e.trace(), (e.dev() - sn.eps_p).norm()});
    worst = std::max(worst, std::abs(psi - 2 * MU * fc) / std::max(1.0, std::abs(psi)));
  }
  double iso = 0;
  for (int k = 0; k < 1000; ++k) {
    SymTensor e = random_tensor();
    auto q = random_rotation(rng);
    double a = relaxed_energy_3d(rm, e, {}).energy, b = relaxed_energy_3d(rm, e.rotated(q), {}).energy;
    iso = std::max(iso, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  Outcome o;
  o.pass = worst <= 1e-12 && iso <= 1e-12;
  o.detail = "psi_rel vs 2 mu f_c max relative " + num(worst) + " on 1e5 tensors, rotation change " + num(iso) +
             " on 1e3 rotations, " + num(seconds_since(t0), 2) + " s";
  return o;
}

Outcome plate_mesh_independence() {
  auto t0 = std::chrono::steady_clock::now();
  PlateMaterial mat{RelaxedMaterial::from_envelope(K, MU, params())};
  LoadProgram lp;
  std::array<ProgramResult, 2> res;
  std::array<size_t, 2> elems{};
  for (int level : {0, 1}) {
    PlaneStrainMesh mesh = plate_with_hole(level);
    elems[level] = mesh.quads.size();
    res[level] = solve_program(mesh, mat, lp);
  }
  Outcome o;
  std::string detail;
  double worst = 0;
  for (size_t m = 0; m < lp.monitors.size(); ++m) {
    double diff = 0, ref = 0;
    int first = -1;
    bool starts_y1 = res[0].steps.front().monitors[m].region == RegionTag::Y1 &&
                     res[1].steps.front().monitors[m].region == RegionTag::Y1;
    for (size_t s = 0; s < res[1].steps.size(); ++s) {
      const auto& a = res[0].steps[s].monitors[m];
      const auto& b = res[1].steps[s].monitors[m];
      diff = std::max({diff, std::abs(a.sxx - b.sxx), std::abs(a.syy - b.syy), std::abs(a.sxy - b.sxy)});
      ref = std::max({ref, std::abs(b.sxx), std::abs(b.syy), std::abs(b.sxy)});
      if (first < 0 && a.region == RegionTag::Y2 && b.region == RegionTag::Y2) first = int(s) + 1;
    }
    double rel = diff / ref;
    worst = std::max(worst, rel);
    bool ok = rel <= 0.05 && starts_y1 && first > 0;
    o.pass &= ok;
    detail += " monitor " + std::to_string(m) + " " + num(100 * rel, 3) + "% Y1->Y2 at step " + std::to_string(first) + ";";
  }
  o.detail = std::to_string(elems[0]) + " vs " + std::to_string(elems[1]) + " quads, " +
             std::to_string(lp.n_steps) + " steps:" + detail + " worst " + num(100 * worst, 3) + "% <= 5%, " +
             num(seconds_since(t0), 2) + " s";
  return o;
}

// Every emitted artifact, regenerated from scratch.
std::string artifacts() {
  std::ostringstream os;
  auto p = params();
  auto hull = condensed_hull(p, fitted(), 41);
  write_csv(hull, os, provenance_line("acceptance-envelope", 0));
  for (std::uint64_t seed : {3u, 4u}) {
    Experiment1D e;
    e.seed = seed;
    e.v_ext = 0.08;
    MeshSolution s = minimize(e);
    os << provenance_line("acceptance-fem1d", seed) << "\n";
    for (size_t i = 0; i < s.grads.size(); ++i) os << fmt_double(s.grads[i][0]) << "," << fmt_double(s.grads[i][1]) << "\n";
    os << fmt_double(s.energy) << "\n";
  }
  PlateMaterial mat{RelaxedMaterial::from_envelope(K, MU, p)};
  LoadProgram lp;
  lp.n_steps = 30;
  PlaneStrainMesh mesh = plate_with_hole(0);
  ProgramResult r = solve_program(mesh, mat, lp);
  write_monitor_csv(r, os, provenance_line("acceptance-plate", 0));
  write_vtk(mesh, mat, r.u, os);
  return os.str();
}

Outcome determinism() {
  auto t0 = std::chrono::steady_clock::now();
  std::string a = artifacts(), b = artifacts();
  Outcome o;
  o.pass = a == b;
  o.detail = "two regenerations of oracle CSV, bar gradients and plate CSV/VTK (" + std::to_string(a.size()) +
             " bytes, hash " + hex64(fnv1a64(a)) + ") " + (o.pass ? "identical" : "differ") + ", " +
             num(seconds_since(t0), 2) + " s";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> selected;
  app.add_option("--criterion,-c", selected, "criterion numbers to run (default: all)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8, 9};

  const std::map<int, std::pair<const char*, std::function<Outcome()>>> table{
      {1, {"envelope equivalence", envelope_equivalence}},
      {2, {"hull independent of r", reference_hull_agreement}},
      {3, {"envelope structure", envelope_structure}},
      {4, {"gradient checks", gradient_checks}},
      {5, {"update consistency", update_consistency}},
      {6, {"bar regimes", bar_regimes}},
      {7, {"3D substitution identity", substitution_identity}},
      {8, {"plate mesh independence", plate_mesh_independence}},
      {9, {"determinism", determinism}},
  };
  bool all = true;
  for (int c : selected) {
    const auto& [name, run] = table.at(c);
    Outcome o;
    try {
      o = run();
    } catch (const Error& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    all &= o.pass;
    std::printf("criterion %d %s %s: %s\n", c, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
