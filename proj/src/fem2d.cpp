#include "pdrelax/fem2d.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "pdrelax/errors.hpp"
#include "pdrelax/material_update.hpp"
#include "pdrelax/provenance.hpp"

namespace pdrelax {

namespace {

constexpr double kXiNode[4] = {-1.0, 1.0, 1.0, -1.0};
constexpr double kEtaNode[4] = {-1.0, -1.0, 1.0, 1.0};
const double kGauss = 1.0 / std::sqrt(3.0);

struct ShapeAt {
  double N[4];
  double dx[4];  // dN/dx
  double dy[4];  // dN/dy
  double detJ;
};

ShapeAt shape_at(const PlaneStrainMesh& m, int e, double xi, double eta) {
  ShapeAt s{};
  double dxi[4], deta[4];
  for (int a = 0; a < 4; ++a) {
    s.N[a] = 0.25 * (1 + kXiNode[a] * xi) * (1 + kEtaNode[a] * eta);
    dxi[a] = 0.25 * kXiNode[a] * (1 + kEtaNode[a] * eta);
    deta[a] = 0.25 * kEtaNode[a] * (1 + kXiNode[a] * xi);
  }
  double j11 = 0, j12 = 0, j21 = 0, j22 = 0;
  for (int a = 0; a < 4; ++a) {
    const auto& x = m.nodes[m.quads[e][a]];
    j11 += dxi[a] * x[0];
    j12 += dxi[a] * x[1];
    j21 += deta[a] * x[0];
    j22 += deta[a] * x[1];
  }
  s.detJ = j11 * j22 - j12 * j21;
  const double inv = 1.0 / s.detJ;
  for (int a = 0; a < 4; ++a) {
    s.dx[a] = inv * (j22 * dxi[a] - j12 * deta[a]);
    s.dy[a] = inv * (-j21 * dxi[a] + j11 * deta[a]);
  }
  return s;
}

SymTensor strain_from(const PlaneStrainMesh& m, int e, const ShapeAt& s, const std::vector<double>& u) {
  SymTensor eps;
  for (int a = 0; a < 4; ++a) {
    const int n = m.quads[e][a];
    const double ux = u[2 * n], uy = u[2 * n + 1];
    eps[0] += s.dx[a] * ux;
    eps[1] += s.dy[a] * uy;
    eps[5] += 0.5 * (s.dy[a] * ux + s.dx[a] * uy);
  }
  return eps;
}

// Re-throw model errors with the quadrature point attached, keeping the type.
template <class F>
auto at_point(int e, int q, F&& f) {
  auto where = [&](const char* what) {
    return "element " + std::to_string(e) + " point " + std::to_string(q) + ": " + what;
  };
  try {
    return f();
  } catch (const NondifferentiablePoint& x) {
    throw NondifferentiablePoint(where(x.what()));
  } catch (const DegenerateDeviator& x) {
    throw DegenerateDeviator(where(x.what()));
  } catch (const NondifferentiableRho& x) {
    throw NondifferentiableRho(where(x.what()));
  } catch (const DegenerateDirection& x) {
    throw DegenerateDirection(where(x.what()));
  } catch (const UnsupportedState& x) {
    throw UnsupportedState(where(x.what()));
  }
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

void PlaneStrainMesh::validate() const {
  const int nn = static_cast<int>(nodes.size());
  if (nn < 4 || quads.empty()) throw ConfigError("mesh needs at least one quadrilateral");
  for (const auto& x : nodes)
    if (!std::isfinite(x[0]) || !std::isfinite(x[1])) throw ConfigError("non-finite node coordinate");
  for (const auto& q : quads)
    for (int n : q)
      if (n < 0 || n >= nn) throw ConfigError("element references missing node " + std::to_string(n));
  std::vector<char> mark(nn, 0);
  for (int n : fixed) {
    if (n < 0 || n >= nn) throw ConfigError("fixed set references missing node");
    mark[n] = 1;
  }
  for (int n : loaded) {
    if (n < 0 || n >= nn) throw ConfigError("loaded set references missing node");
    if (mark[n] == 1) throw ConfigError("boundary sets overlap at node " + std::to_string(n));
  }
  for (int e = 0; e < static_cast<int>(quads.size()); ++e)
    for (int q = 0; q < 4; ++q) {
      ShapeAt s = shape_at(*this, e, kXiNode[q] * kGauss, kEtaNode[q] * kGauss);
      if (!(s.detJ > 0.0)) throw ConfigError("non-positive Jacobian in element " + std::to_string(e));
    }
}

PlaneStrainMesh plate_with_hole(int level, double hole_radius, double grading) {
  if (level < 0 || level > 6) throw ConfigError("refinement level must lie in [0, 6]");
  if (!(hole_radius > 0.0 && hole_radius < 0.45)) throw ConfigError("hole radius must lie in (0, 0.45)");
  if (!(grading > 0.0)) throw ConfigError("grading must be positive");
  const int nc = 10 << level, nr = nc, na = 4 * nc;
  PlaneStrainMesh m;
  m.nodes.reserve(static_cast<size_t>(na) * (nr + 1));
  // radial parameter, geometric when grading != 1
  std::vector<double> s(nr + 1);
  for (int k = 0; k <= nr; ++k)
    s[k] = grading == 1.0 ? static_cast<double>(k) / nr
                          : (std::pow(grading, k) - 1.0) / (std::pow(grading, nr) - 1.0);
  for (int k = 0; k <= nr; ++k)
    for (int a = 0; a < na; ++a) {
      // outer point walks the square counter-clockwise from corner (1, 0)
      const int side = a / nc;
      const double t = static_cast<double>(a % nc) / nc;
      std::array<double, 2> out;
      switch (side) {
        case 0: out = {1.0, t}; break;
        case 1: out = {1.0 - t, 1.0}; break;
        case 2: out = {0.0, 1.0 - t}; break;
        default: out = {t, 0.0}; break;
      }
      const double th = -0.25 * std::numbers::pi + 2.0 * std::numbers::pi * a / na;
      const std::array<double, 2> in{0.5 + hole_radius * std::cos(th), 0.5 + hole_radius * std::sin(th)};
      m.nodes.push_back({in[0] + s[k] * (out[0] - in[0]), in[1] + s[k] * (out[1] - in[1])});
    }
  auto id = [&](int a, int k) { return k * na + (a % na); };
  for (int k = 0; k < nr; ++k)
    for (int a = 0; a < na; ++a) m.quads.push_back({id(a, k), id(a, k + 1), id(a + 1, k + 1), id(a + 1, k)});
  for (int a = 0; a < na; ++a) {
    const int n = id(a, nr);
    if (m.nodes[n][0] == 0.0) m.fixed.push_back(n);
    if (m.nodes[n][0] == 1.0) m.loaded.push_back(n);
  }
  return m;
}

PlaneStrainMesh read_mesh_json(std::istream& is) {
  PlaneStrainMesh m;
  try {
    nlohmann::json j = nlohmann::json::parse(is);
    m.nodes = j.at("nodes").get<std::vector<std::array<double, 2>>>();
    m.quads = j.at("quads").get<std::vector<std::array<int, 4>>>();
    m.fixed = j.at("fixed").get<std::vector<int>>();
    m.loaded = j.at("loaded").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("mesh json: ") + e.what());
  }
  m.validate();
  return m;
}

void write_mesh_json(const PlaneStrainMesh& m, std::ostream& os) {
  nlohmann::json j;
  j["nodes"] = m.nodes;
  j["quads"] = m.quads;
  j["fixed"] = m.fixed;
  j["loaded"] = m.loaded;
  os << j.dump() << '\n';
}

PlateMaterial PlateMaterial::condensed(const RelaxedMaterial& rm, const DissipationFunction& r) {
  return {rm, PlateEnergy::Condensed, MaterialParams::from_dimensionless(rm.K, rm.mu, rm.beta / (2.0 * rm.mu), r)};
}

double PlateMaterial::energy(const SymTensor& eps) const {
  if (kind == PlateEnergy::Relaxed) return relaxed_energy_3d(rm, eps, {}).energy;
  if (condensed_law) return condensed_energy_3d(*condensed_law, eps, {});
  return condensed_energy_3d(rm.material(), eps, {});
}

SymTensor PlateMaterial::stress(const SymTensor& eps) const {
  if (kind == PlateEnergy::Relaxed) return relaxed_stress_3d(rm, eps, {});
  if (condensed_law) return pdrelax::stress(*condensed_law, eps, incremental_update(*condensed_law, eps, {}));
  const MaterialParams m = rm.material();
  return pdrelax::stress(m, eps, incremental_update(m, eps, {}));
}

RegionTag PlateMaterial::region(const SymTensor& eps) const {
  return classify(rm.envelope(), rm.trace_scale() * eps.trace(), eps.dev().norm()).tag;
}

std::array<double, 9> PlateMaterial::tangent(const SymTensor& eps) const {
  // Perturbation relative to the strain level keeps the difference quotient
  // well inside the smooth pieces of the law.
  const double h = 1e-6 * eps.norm() + 1e-12;
  std::array<double, 9> D{};
  if (kind == PlateEnergy::Relaxed) {
    Tangent t = tangent_3d(rm, eps, {}, h);
    constexpr int idx[3] = {0, 1, 5};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) D[i * 3 + j] = t.C[idx[i] * 6 + idx[j]];
    return D;
  }
  const SymTensor base = stress(eps);
  constexpr int slot[3] = {0, 1, 5};
  for (int j = 0; j < 3; ++j) {
    SymTensor e = eps;
    e[slot[j]] += j < 2 ? h : 0.5 * h;
    SymTensor s = stress(e);
    for (int i = 0; i < 3; ++i) D[i * 3 + j] = (s[slot[i]] - base[slot[i]]) / h;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) D[i * 3 + j] = D[j * 3 + i] = 0.5 * (D[i * 3 + j] + D[j * 3 + i]);
  return D;
}

Assembly assemble(const PlaneStrainMesh& mesh, const PlateMaterial& mat, const std::vector<double>& u,
                  bool with_tangent) {
  if (static_cast<int>(u.size()) != mesh.n_dofs()) throw ConfigError("displacement size does not match mesh");
  Assembly out;
  out.residual.assign(u.size(), 0.0);
  if (with_tangent) out.tangent.reserve(mesh.quads.size() * 64);
  for (int e = 0; e < static_cast<int>(mesh.quads.size()); ++e) {
    double ke[8][8] = {};
    for (int q = 0; q < 4; ++q) {
      const ShapeAt s = shape_at(mesh, e, kXiNode[q] * kGauss, kEtaNode[q] * kGauss);
      const SymTensor eps = strain_from(mesh, e, s, u);
      const double w = s.detJ;  // unit Gauss weights
      at_point(e, q, [&] {
        out.energy += w * mat.energy(eps);
        const SymTensor sig = mat.stress(eps);
        for (int a = 0; a < 4; ++a) {
          const int n = mesh.quads[e][a];
          out.residual[2 * n] += w * (sig[0] * s.dx[a] + sig[5] * s.dy[a]);
          out.residual[2 * n + 1] += w * (sig[5] * s.dx[a] + sig[1] * s.dy[a]);
        }
        if (!with_tangent) return 0;
        const auto D = mat.tangent(eps);
        double B[3][8] = {};
        for (int a = 0; a < 4; ++a) {
          B[0][2 * a] = s.dx[a];
          B[1][2 * a + 1] = s.dy[a];
          B[2][2 * a] = s.dy[a];
          B[2][2 * a + 1] = s.dx[a];
        }
        double DB[3][8];
        for (int i = 0; i < 3; ++i)
          for (int c = 0; c < 8; ++c) DB[i][c] = D[i * 3] * B[0][c] + D[i * 3 + 1] * B[1][c] + D[i * 3 + 2] * B[2][c];
        for (int r = 0; r < 8; ++r)
          for (int c = 0; c < 8; ++c) ke[r][c] += w * (B[0][r] * DB[0][c] + B[1][r] * DB[1][c] + B[2][r] * DB[2][c]);
        return 0;
      });
    }
    if (!with_tangent) continue;
    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 8; ++c) {
        const int gr = 2 * mesh.quads[e][r / 2] + r % 2, gc = 2 * mesh.quads[e][c / 2] + c % 2;
        out.tangent.push_back({static_cast<double>(gr), static_cast<double>(gc), 0.5 * (ke[r][c] + ke[c][r])});
      }
  }
  return out;
}

double total_energy(const PlaneStrainMesh& mesh, const PlateMaterial& mat, const std::vector<double>& u) {
  double E = 0.0;
  for (int e = 0; e < static_cast<int>(mesh.quads.size()); ++e)
    for (int q = 0; q < 4; ++q) {
      const ShapeAt s = shape_at(mesh, e, kXiNode[q] * kGauss, kEtaNode[q] * kGauss);
      const SymTensor eps = strain_from(mesh, e, s, u);
      E += s.detJ * at_point(e, q, [&] { return mat.energy(eps); });
    }
  return E;
}

bool MonitorPatch::contains(std::array<double, 2> x) const {
  const double dx = x[0] - center[0], dy = x[1] - center[1];
  const double r = std::hypot(dx, dy);
  if (r < r_in || r > r_out) return false;
  double th = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
  // bring the angle into [theta_lo, theta_lo + 360)
  while (th < theta_lo) th += 360.0;
  while (th >= theta_lo + 360.0) th -= 360.0;
  return th <= theta_hi;
}

void LoadProgram::validate() const {
  if (n_steps < 1) throw ConfigError("n_steps must be at least 1");
  if (!std::isfinite(u_final)) throw ConfigError("u_final must be finite");
  if (max_newton < 1) throw ConfigError("max_newton must be at least 1");
  if (max_halvings < 0) throw ConfigError("max_halvings must be non-negative");
  for (const auto& m : monitors)
    if (!(m.r_out > m.r_in && m.theta_hi > m.theta_lo)) throw ConfigError("empty monitor patch");
}

Location locate(const PlaneStrainMesh& mesh, std::array<double, 2> x) {
  for (int e = 0; e < static_cast<int>(mesh.quads.size()); ++e) {
    double lo0 = INFINITY, hi0 = -INFINITY, lo1 = INFINITY, hi1 = -INFINITY;
    for (int n : mesh.quads[e]) {
      lo0 = std::min(lo0, mesh.nodes[n][0]);
      hi0 = std::max(hi0, mesh.nodes[n][0]);
      lo1 = std::min(lo1, mesh.nodes[n][1]);
      hi1 = std::max(hi1, mesh.nodes[n][1]);
    }
    if (x[0] < lo0 - 1e-12 || x[0] > hi0 + 1e-12 || x[1] < lo1 - 1e-12 || x[1] > hi1 + 1e-12) continue;
    // invert the bilinear map by Newton from the centre
    double xi = 0.0, eta = 0.0;
    bool ok = false;
    for (int it = 0; it < 30; ++it) {
      double px = 0, py = 0, a11 = 0, a12 = 0, a21 = 0, a22 = 0;
      for (int a = 0; a < 4; ++a) {
        const auto& p = mesh.nodes[mesh.quads[e][a]];
        const double N = 0.25 * (1 + kXiNode[a] * xi) * (1 + kEtaNode[a] * eta);
        const double dxi = 0.25 * kXiNode[a] * (1 + kEtaNode[a] * eta);
        const double deta = 0.25 * kEtaNode[a] * (1 + kXiNode[a] * xi);
        px += N * p[0];
        py += N * p[1];
        a11 += dxi * p[0];
        a12 += deta * p[0];
        a21 += dxi * p[1];
        a22 += deta * p[1];
      }
      const double rx = x[0] - px, ry = x[1] - py;
      const double det = a11 * a22 - a12 * a21;
      const double dxi = (a22 * rx - a12 * ry) / det, deta = (-a21 * rx + a11 * ry) / det;
      xi += dxi;
      eta += deta;
      if (std::abs(dxi) + std::abs(deta) < 1e-13) {
        ok = true;
        break;
      }
    }
    if (ok && std::abs(xi) <= 1.0 + 1e-10 && std::abs(eta) <= 1.0 + 1e-10) return {e, xi, eta};
  }
  throw ConfigError("monitor point outside the mesh");
}

SymTensor element_strain(const PlaneStrainMesh& mesh, int element, double xi, double eta,
                         const std::vector<double>& u) {
  return strain_from(mesh, element, shape_at(mesh, element, xi, eta), u);
}

Reactions reactions(const PlaneStrainMesh& mesh, const PlateMaterial& mat, const std::vector<double>& u) {
  const Assembly a = assemble(mesh, mat, u, false);
  Reactions r{0, 0, 0, 0};
  for (int n : mesh.fixed) {
    r.fixed_x += a.residual[2 * n];
    r.fixed_y += a.residual[2 * n + 1];
  }
  for (int n : mesh.loaded) {
    r.loaded_x += a.residual[2 * n];
    r.loaded_y += a.residual[2 * n + 1];
  }
  return r;
}

namespace {

class NewtonSolver {
 public:
  NewtonSolver(const PlaneStrainMesh& mesh, const PlateMaterial& mat, int max_iter)
      : mesh_(mesh), mat_(mat), max_iter_(max_iter), map_(mesh.n_dofs(), 0) {
    for (int n : mesh.fixed) map_[2 * n] = map_[2 * n + 1] = -1;
    for (int n : mesh.loaded) map_[2 * n] = -1;
    int k = 0;
    for (int& m : map_)
      if (m == 0) m = k++;
    n_free_ = k;
  }

  void impose(std::vector<double>& u, double ux) const {
    for (int n : mesh_.fixed) u[2 * n] = u[2 * n + 1] = 0.0;
    for (int n : mesh_.loaded) u[2 * n] = ux;
  }

  struct Outcome {
    bool converged;
    int iterations;
    double residual;
    double energy;
    std::vector<double> history;
  };

  // Equilibrium for the current boundary values in u; u is updated in place.
  Outcome solve(std::vector<double>& u) const {
    Assembly a = assemble(mesh_, mat_, u, true);
    std::vector<double> hist{a.energy};
    for (int it = 0; it < max_iter_; ++it) {
      Eigen::VectorXd r(n_free_);
      for (size_t d = 0; d < u.size(); ++d)
        if (map_[d] >= 0) r[map_[d]] = a.residual[d];
      const double rn = r.norm();
      if (rn <= 1e-8 * (1.0 + norm2(a.residual))) return {true, it, rn, a.energy, hist};

      std::vector<Eigen::Triplet<double>> trip;
      trip.reserve(a.tangent.size());
      for (const auto& t : a.tangent) {
        const int i = map_[static_cast<int>(t[0])], j = map_[static_cast<int>(t[1])];
        if (i >= 0 && j >= 0) trip.emplace_back(i, j, t[2]);
      }
      Eigen::SparseMatrix<double> K(n_free_, n_free_);
      K.setFromTriplets(trip.begin(), trip.end());
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
      if (ldlt.info() != Eigen::Success) return {false, it, rn, a.energy, hist};
      const Eigen::VectorXd du = ldlt.solve(-r);
      if (ldlt.info() != Eigen::Success || !du.allFinite()) return {false, it, rn, a.energy, hist};

      // Backtrack until the energy does not grow; round-off sized increases
      // are tolerated only when the residual also drops.
      const double slope = r.dot(du);
      double step = 1.0;
      bool accepted = false;
      std::vector<double> trial(u.size());
      for (int ls = 0; ls < 30 && !accepted; ++ls, step *= 0.5) {
        for (size_t d = 0; d < u.size(); ++d) trial[d] = map_[d] >= 0 ? u[d] + step * du[map_[d]] : u[d];
        Assembly b;
        try {
          b = assemble(mesh_, mat_, trial, true);
        } catch (const Error&) {
          continue;
        }
        const double noise = 1e-12 * std::abs(a.energy);
        double rb = 0.0;
        for (size_t d = 0; d < u.size(); ++d)
          if (map_[d] >= 0) rb += b.residual[d] * b.residual[d];
        rb = std::sqrt(rb);
        const bool decrease = b.energy <= a.energy + 1e-4 * step * std::min(slope, 0.0);
        const bool flat = b.energy <= a.energy + noise && rb < rn;
        if (decrease || flat) {
          u.swap(trial);
          a = std::move(b);
          hist.push_back(a.energy);
          accepted = true;
        }
      }
      if (!accepted) return {false, it, rn, a.energy, hist};
    }
    Eigen::VectorXd r(n_free_);
    for (size_t d = 0; d < u.size(); ++d)
      if (map_[d] >= 0) r[map_[d]] = a.residual[d];
    const double rn = r.norm();
    return {rn <= 1e-8 * (1.0 + norm2(a.residual)), max_iter_, rn, a.energy, hist};
  }

 private:
  const PlaneStrainMesh& mesh_;
  const PlateMaterial& mat_;
  int max_iter_;
  std::vector<int> map_;
  int n_free_ = 0;
};

}  // namespace

ProgramResult solve_program(const PlaneStrainMesh& mesh, const PlateMaterial& mat, const LoadProgram& lp) {
  mesh.validate();
  lp.validate();
  struct Point {
    int element;
    double weight;
    ShapeAt shape;
  };
  std::vector<std::vector<Point>> patches;
  for (const auto& mp : lp.monitors) {
    std::vector<Point> pts;
    for (int e = 0; e < static_cast<int>(mesh.quads.size()); ++e) {
      std::array<double, 2> c{0.0, 0.0};
      for (int n : mesh.quads[e]) {
        c[0] += 0.25 * mesh.nodes[n][0];
        c[1] += 0.25 * mesh.nodes[n][1];
      }
      if (!mp.contains(c)) continue;
      for (int q = 0; q < 4; ++q) {
        ShapeAt s = shape_at(mesh, e, kXiNode[q] * kGauss, kEtaNode[q] * kGauss);
        pts.push_back({e, s.detJ, s});
      }
    }
    if (pts.empty()) throw ConfigError("monitor patch contains no element centroid");
    patches.push_back(std::move(pts));
  }
  NewtonSolver newton(mesh, mat, lp.max_newton);
  ProgramResult res;
  std::vector<double> u(mesh.n_dofs(), 0.0);
  double lam_prev = 0.0;
  for (int step = 1; step <= lp.n_steps; ++step) {
    const double lam = static_cast<double>(step) / lp.n_steps;
    std::vector<double> start = u;
    NewtonSolver::Outcome out{false, 0, 0.0, 0.0, {}};
    int iters = 0;
    std::vector<std::vector<double>> histories;
    for (int halv = 0; halv <= lp.max_halvings; ++halv) {
      const int sub = 1 << halv;
      std::vector<double> w = start;
      bool ok = true;
      iters = 0;
      histories.clear();
      for (int k = 1; k <= sub && ok; ++k) {
        newton.impose(w, (lam_prev + (lam - lam_prev) * k / sub) * lp.u_final);
        try {
          out = newton.solve(w);
        } catch (const Error&) {
          out.converged = false;
        }
        iters += out.iterations;
        histories.push_back(std::move(out.history));
        ok = out.converged;
      }
      if (ok) {
        u.swap(w);
        break;
      }
      if (halv == lp.max_halvings)
        throw NoConvergence("Newton failed at load step " + std::to_string(step) + " after " +
                                std::to_string(lp.max_halvings) + " halvings",
                            step);
    }
    lam_prev = lam;

    StepRecord rec{step, lam, iters, out.residual, out.energy, {}, {}, std::move(histories)};
    for (const auto& pts : patches) {
      SymTensor eps_avg, sig_avg;
      double area = 0.0, yielded = 0.0, ux = 0.0;
      for (const auto& p : pts) {
        const SymTensor eps = strain_from(mesh, p.element, p.shape, u);
        eps_avg += p.weight * eps;
        sig_avg += p.weight * mat.stress(eps);
        if (mat.region(eps) != RegionTag::Y1) yielded += p.weight;
        for (int a = 0; a < 4; ++a) ux += p.weight * p.shape.N[a] * u[2 * mesh.quads[p.element][a]];
        area += p.weight;
      }
      eps_avg *= 1.0 / area;
      sig_avg *= 1.0 / area;
      rec.monitors.push_back({static_cast<int>(pts.size() / 4), sig_avg[0], sig_avg[1], sig_avg[5], sig_avg[2],
                              ux / area, mat.region(eps_avg), yielded / area});
    }
    rec.qp_regions.reserve(4 * mesh.quads.size());
    for (int e = 0; e < static_cast<int>(mesh.quads.size()); ++e)
      for (int q = 0; q < 4; ++q)
        rec.qp_regions.push_back(mat.region(element_strain(mesh, e, kXiNode[q] * kGauss, kEtaNode[q] * kGauss, u)));
    res.steps.push_back(std::move(rec));
  }
  res.u = std::move(u);
  return res;
}

void write_monitor_csv(const ProgramResult& r, std::ostream& os, const std::string& provenance) {
  os << provenance << '\n' << "step,load_factor";
  const size_t nm = r.steps.empty() ? 0 : r.steps.front().monitors.size();
  for (size_t m = 0; m < nm; ++m)
    os << ",m" << m << "_sxx,m" << m << "_syy,m" << m << "_sxy,m" << m << "_ux,m" << m << "_region,m" << m
       << "_yielded";
  os << '\n';
  for (const auto& s : r.steps) {
    os << s.step << ',' << fmt_double(s.load_factor);
    for (const auto& m : s.monitors)
      os << ',' << fmt_double(m.sxx) << ',' << fmt_double(m.syy) << ',' << fmt_double(m.sxy) << ','
         << fmt_double(m.ux) << ',' << to_string(m.region) << ',' << fmt_double(m.yielded_fraction);
    os << '\n';
  }
}

void write_vtk(const PlaneStrainMesh& mesh, const PlateMaterial& mat, const std::vector<double>& u,
               std::ostream& os) {
  const size_t nn = mesh.nodes.size(), ne = mesh.quads.size();
  os << "# vtk DataFile Version 3.0\nplate with hole\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << nn << " double\n";
  for (const auto& x : mesh.nodes) os << fmt_double(x[0]) << ' ' << fmt_double(x[1]) << " 0\n";
  os << "CELLS " << ne << ' ' << 5 * ne << '\n';
  for (const auto& q : mesh.quads) os << "4 " << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
  os << "CELL_TYPES " << ne << '\n';
  for (size_t e = 0; e < ne; ++e) os << "9\n";
  os << "POINT_DATA " << nn << "\nVECTORS displacement double\n";
  for (size_t n = 0; n < nn; ++n) os << fmt_double(u[2 * n]) << ' ' << fmt_double(u[2 * n + 1]) << " 0\n";

  std::vector<SymTensor> sig(ne);
  std::vector<int> tag(ne);
  for (size_t e = 0; e < ne; ++e) {
    const SymTensor eps = element_strain(mesh, static_cast<int>(e), 0.0, 0.0, u);
    sig[e] = mat.stress(eps);
    tag[e] = static_cast<int>(mat.region(eps));
  }
  os << "CELL_DATA " << ne << '\n';
  const std::pair<const char*, int> comps[] = {{"sxx", 0}, {"syy", 1}, {"sxy", 5}, {"szz", 2}};
  for (const auto& [name, k] : comps) {
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (size_t e = 0; e < ne; ++e) os << fmt_double(sig[e][k]) << '\n';
  }
  // 0 Y_tilde, 1..4 Y1..Y4
  os << "SCALARS region int 1\nLOOKUP_TABLE default\n";
  for (size_t e = 0; e < ne; ++e) os << tag[e] << '\n';
}

}  // namespace pdrelax
