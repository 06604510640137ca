#include "pdrelax/fem1d.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <sstream>

#include "pdrelax/errors.hpp"

namespace pdrelax {

DissipationFunction QuadraticYieldFit::function() const {
  return DissipationFunction::quadratic(y_min, y_max, y0, r_max);
}

std::string to_string(EnergyKind k) { return k == EnergyKind::Condensed ? "condensed" : "relaxed"; }

std::string to_string(Regime r) {
  switch (r) {
    case Regime::A: return "a";
    case Regime::B: return "b";
    case Regime::C: return "c";
    case Regime::D: return "d";
    case Regime::Outside: return "outside";
  }
  return "?";
}

void Experiment1D::validate() const {
  if (n < 2) throw ConfigError("need at least 2 elements");
  if (!(L > 0.0)) throw ConfigError("length must be positive");
  if (!(alpha >= 0.0)) throw ConfigError("perturbation amplitude must be nonnegative");
  if (!(y1_scale > 0.0) || !(y2_scale > 0.0)) throw ConfigError("gradient scales must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be positive");
  if (!(fit.y_min < fit.y0 && fit.y0 < fit.y_max) || !(fit.r_max > 0.0))
    throw ConfigError("quadratic fit needs y_min < y0 < y_max and r_max > 0");
  envelope();  // validates b and the support
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

NodalArrays affine_solution(const Experiment1D& e) {
  NodalArrays a;
  a.u.resize(e.n + 1);
  a.v.resize(e.n + 1);
  for (int i = 0; i <= e.n; ++i) {
    double t = static_cast<double>(i) / e.n;
    a.u[i] = t * e.u_ext;
    a.v[i] = t * e.v_ext;
  }
  a.u[e.n] = e.u_ext;
  a.v[e.n] = e.v_ext;
  return a;
}

NodalArrays initial_guess(const Experiment1D& e) {
  e.validate();
  NodalArrays a = affine_solution(e);
  // one stream, u perturbations first, then v, as rand(i) and rand(n+i)
  SplitMix64 rng(e.seed);
  double amp = e.alpha * e.L / e.n;
  std::vector<double> du(e.n + 1, 0.0), dv(e.n + 1, 0.0);
  for (int i = 1; i < e.n; ++i) du[i] = amp * rng.symmetric_unit();
  for (int i = 1; i < e.n; ++i) dv[i] = amp * rng.symmetric_unit();
  for (int i = 1; i < e.n; ++i) {
    a.u[i] += du[i];
    a.v[i] += dv[i];
  }
  return a;
}

namespace {

class BarProblem {
 public:
  explicit BarProblem(const Experiment1D& e)
      : e_(e), p_(e.envelope()), r_(e.fit.function()), h_(e.L / e.n) {}

  Vec2 element_y(const NodalArrays& a, int k) const {
    return {e_.y1_scale * (a.u[k + 1] - a.u[k]) / h_, e_.y2_scale * (a.v[k + 1] - a.v[k]) / h_};
  }

  double density(Vec2 y) const {
    EnergyPoint pt{y[0], y[1], 0.0};
    return e_.kind == EnergyKind::Condensed ? condensed_energy(p_, r_, pt) : relaxed_energy(p_, pt);
  }

  Vec2 density_grad(Vec2 y) const {
    EnergyPoint pt{y[0], y[1], 0.0};
    if (e_.kind == EnergyKind::Condensed) return condensed_gradient(p_, r_, pt);
    try {
      return relaxed_gradient(p_, pt);
    } catch (const NondifferentiablePoint&) {
      Vec2 l = side_grad(y, -1), r = side_grad(y, +1);
      return {0.5 * (l[0] + r[0]), 0.5 * (l[1] + r[1])};
    }
  }

  // gradient just left (side < 0) or right of y1
  Vec2 side_grad(Vec2 y, int side) const {
    double step = kKink * std::max(1.0, std::abs(y[0]));
    Vec2 z{y[0] + side * step, y[1]};
    EnergyPoint pt{z[0], z[1], 0.0};
    return e_.kind == EnergyKind::Condensed ? condensed_gradient(p_, r_, pt) : relaxed_gradient(p_, pt);
  }

  bool near_kink(double y1) const {
    return std::abs(y1 - p_.y_min) <= kKink || std::abs(y1 - p_.y_max) <= kKink;
  }

  double energy(const NodalArrays& a) const {
    double w = 0.0;
    for (int k = 0; k < e_.n; ++k) w += density(element_y(a, k)) * h_;
    return w;
  }

  // Energy and gradient w.r.t. interior nodes, packed [u_1..u_{n-1}, v_1..v_{n-1}].
  double eval(const NodalArrays& a, std::vector<double>& g) const {
    const int n = e_.n;
    g.assign(2 * (n - 1), 0.0);
    double w = 0.0;
    for (int k = 0; k < n; ++k) {
      Vec2 y = element_y(a, k);
      w += density(y) * h_;
      Vec2 d = density_grad(y);
      double gu = e_.y1_scale * d[0], gv = e_.y2_scale * d[1];
      if (k >= 1) {  // left node k
        g[k - 1] -= gu;
        g[n - 1 + k - 1] -= gv;
      }
      if (k + 1 <= n - 1) {  // right node k+1
        g[k] += gu;
        g[n - 1 + k] += gv;
      }
    }
    return w;
  }

  // Norm of the nodal gradient under the subgradient selection that best
  // equalizes element stresses; elements within kKink of a kink of the
  // density may pick any value between their one-sided slopes.
  double stationarity(const NodalArrays& a) const {
    const int n = e_.n;
    double total = 0.0;
    for (int c = 0; c < 2; ++c) {
      std::vector<double> lo(n), hi(n);
      for (int k = 0; k < n; ++k) {
        Vec2 y = element_y(a, k);
        if (c == 0 && near_kink(y[0])) {
          double l = side_grad(y, -1)[0], r = side_grad(y, +1)[0], m = density_grad(y)[0];
          lo[k] = std::min({l, r, m});
          hi[k] = std::max({l, r, m});
        } else {
          lo[k] = hi[k] = density_grad(y)[c];
        }
      }
      // minimax common value, then clamp each interval toward it
      double top = *std::max_element(lo.begin(), lo.end());
      double bot = *std::min_element(hi.begin(), hi.end());
      double lam = 0.5 * (top + bot);
      double scale = c == 0 ? e_.y1_scale : e_.y2_scale;
      std::vector<double> s(n);
      for (int k = 0; k < n; ++k) s[k] = std::clamp(lam, lo[k], hi[k]);
      for (int k = 1; k < n; ++k) {
        double r = scale * (s[k - 1] - s[k]);
        total += r * r;
      }
    }
    return std::sqrt(total);
  }

  double kink_value(int side) const { return side < 0 ? p_.y_min : p_.y_max; }

  static constexpr double kKink = 1e-9;

 private:
  const Experiment1D& e_;
  EnvelopeParams p_;
  DissipationFunction r_;
  double h_;
};

}  // namespace

double total_energy(const Experiment1D& e, const NodalArrays& sol) {
  e.validate();
  if (sol.u.size() != static_cast<size_t>(e.n + 1) || sol.v.size() != static_cast<size_t>(e.n + 1))
    throw ConfigError("nodal arrays must have n+1 entries");
  return BarProblem(e).energy(sol);
}

namespace {

// Quasi-Newton search over element gradients. The Dirichlet data fix the sum
// of each gradient component, so directions live in the sum-zero subspace.
// The density has kinks on the lines y1 = y_min and y1 = y_max; an element
// whose step would cross one stops on it and stays pinned there until the
// common stress leaves its one-sided slope interval.
class ElementSearch {
 public:
  ElementSearch(const BarProblem& prob, const Experiment1D& e)
      : prob_(prob), e_(e), n_(e.n), target1_(e.n * e.y_ext()[0]), target2_(e.n * e.y_ext()[1]) {}

  struct Result {
    std::vector<Vec2> z;
    int iterations;
  };

  Result run(std::vector<Vec2> z, const std::function<bool(const std::vector<Vec2>&)>& done) {
    z_ = std::move(z);
    pin_.assign(n_, 0);
    double F = value(z_);
    std::vector<double> g = projected_gradient(z_);
    std::deque<std::vector<double>> S, Y;
    std::deque<double> rho;
    int it = 0, fails = 0;
    for (; it < e_.max_iter; ++it) {
      if (done(z_)) break;
      bool released = snap() | release();
      if (released) {
        restore_sum();
        S.clear();
        Y.clear();
        rho.clear();
        g = projected_gradient(z_);
      }
      std::vector<double> d = direction(g, S, Y, rho);
      double slope = dot(g, d);
      if (!(slope < 0.0)) {
        S.clear();
        Y.clear();
        rho.clear();
        d = g;
        for (double& x : d) x = -x;
        slope = dot(g, d);
        if (!(slope < 0.0)) break;
      }
      if (S.empty()) {
        double dmax = 0.0;
        for (double x : d) dmax = std::max(dmax, std::abs(x));
        double cap = 1e-2 / dmax;
        if (cap < 1.0) {
          for (double& x : d) x *= cap;
          slope *= cap;
        }
      }
      // first kink met along d
      double t_break = INFINITY;
      int k_break = -1, side_break = 0;
      for (int k = 0; k < n_; ++k) {
        if (pin_[k] != 0 || d[k] == 0.0) continue;
        for (int side : {-1, +1}) {
          double t = (prob_.kink_value(side) - z_[k][0]) / d[k];
          if (t > 0.0 && t < t_break) {
            t_break = t;
            k_break = k;
            side_break = side;
          }
        }
      }
      double t = std::min(1.0, t_break);
      bool ok = false;
      std::vector<Vec2> zn(n_);
      double Fn = F;
      for (int ls = 0; ls < 60; ++ls) {
        for (int k = 0; k < n_; ++k) zn[k] = {z_[k][0] + t * d[k], z_[k][1] + t * d[n_ + k]};
        const bool lands = t == t_break;
        if (lands) zn[k_break][0] = prob_.kink_value(side_break);
        Fn = value(zn);
        bool accept = Fn <= F + 1e-4 * t * slope;
        if (!accept && Fn <= F + 1e-14 * std::abs(F)) {
          // energy differences have reached rounding; judge the step by the
          // gradient instead: it must shrink, or the slope along d must flatten
          std::vector<double> gt = projected_gradient(zn);
          accept = dot(gt, gt) < 0.25 * dot(g, g) || std::abs(dot(gt, d)) <= 0.5 * std::abs(slope);
        }
        if (accept) {
          ok = true;
          if (lands) pin_[k_break] = side_break;
          break;
        }
        t *= 0.5;
      }
      if (!ok) {
        if (!S.empty() || ++fails < 3) {
          S.clear();
          Y.clear();
          rho.clear();
          if (release_any()) {
            restore_sum();
            g = projected_gradient(z_);
          }
          continue;
        }
        break;
      }
      fails = 0;
      std::vector<double> gn = projected_gradient(zn);
      const bool pinned_now = t == t_break;
      if (pinned_now) {
        S.clear();
        Y.clear();
        rho.clear();
      } else {
        std::vector<double> sv(2 * n_), yv(2 * n_);
        for (int k = 0; k < n_; ++k) {
          sv[k] = zn[k][0] - z_[k][0];
          sv[n_ + k] = zn[k][1] - z_[k][1];
        }
        for (int i = 0; i < 2 * n_; ++i) yv[i] = gn[i] - g[i];
        double sy = dot(sv, yv);
        if (sy > 1e-12 * std::sqrt(dot(sv, sv) * dot(yv, yv))) {
          S.push_back(std::move(sv));
          Y.push_back(std::move(yv));
          rho.push_back(1.0 / sy);
          if (S.size() > 12) {
            S.pop_front();
            Y.pop_front();
            rho.pop_front();
          }
        }
      }
      z_.swap(zn);
      restore_sum();
      g.swap(gn);
      F = value(z_);
    }
    return {z_, it};
  }

 private:
  double value(const std::vector<Vec2>& z) const {
    double F = 0.0;
    for (const Vec2& y : z) F += prob_.density(y);
    return F;
  }

  Vec2 grad(const std::vector<Vec2>& z, int k) const {
    if (pin_[k] == 0) return prob_.density_grad(z[k]);
    // y1 slope from the inner side; the y2 slope is continuous across
    return {prob_.side_grad(z[k], -pin_[k])[0], prob_.density_grad(z[k])[1]};
  }

  // Slope interval of a pinned element in the y1 direction.
  std::pair<double, double> interval(int k) const {
    double l = prob_.side_grad(z_[k], -1)[0], r = prob_.side_grad(z_[k], +1)[0];
    return {std::min(l, r), std::max(l, r)};
  }

  // Common stress of the free elements in y1.
  bool stress1(double& lam) const {
    double s = 0.0;
    int m = 0;
    for (int k = 0; k < n_; ++k)
      if (pin_[k] == 0) {
        s += grad(z_, k)[0];
        ++m;
      }
    if (m == 0) return false;
    lam = s / m;
    return true;
  }

  std::vector<double> projected_gradient(const std::vector<Vec2>& z) const {
    std::vector<double> g(2 * n_, 0.0);
    double m1 = 0.0, m2 = 0.0;
    int free = 0;
    for (int k = 0; k < n_; ++k) {
      Vec2 gk = grad(z, k);
      if (pin_[k] == 0) {
        g[k] = gk[0];
        m1 += gk[0];
        ++free;
      }
      g[n_ + k] = gk[1];
      m2 += gk[1];
    }
    if (free > 0) m1 /= free;
    m2 /= n_;
    for (int k = 0; k < n_; ++k) {
      if (pin_[k] == 0) g[k] -= m1;
      g[n_ + k] -= m2;
    }
    return g;
  }

  std::vector<double> direction(const std::vector<double>& g, const std::deque<std::vector<double>>& S,
                                const std::deque<std::vector<double>>& Y, const std::deque<double>& rho) const {
    std::vector<double> d = g;
    std::vector<double> alpha(S.size());
    for (int k = static_cast<int>(S.size()) - 1; k >= 0; --k) {
      alpha[k] = rho[k] * dot(S[k], d);
      for (size_t i = 0; i < d.size(); ++i) d[i] -= alpha[k] * Y[k][i];
    }
    double gamma = S.empty() ? 1.0 : dot(S.back(), Y.back()) / dot(Y.back(), Y.back());
    for (double& x : d) x *= gamma;
    for (size_t k = 0; k < S.size(); ++k) {
      double beta = rho[k] * dot(Y[k], d);
      for (size_t i = 0; i < d.size(); ++i) d[i] += (alpha[k] - beta) * S[k][i];
    }
    for (double& x : d) x = -x;
    return d;
  }

  // Snapping, releasing and rounding in long runs all disturb the gradient
  // sums fixed by the Dirichlet data; spread the error back over the
  // elements that are free to move (all of them for y2).
  void restore_sum() {
    double err1 = -target1_, err2 = -target2_;
    int free = 0;
    for (int k = 0; k < n_; ++k) {
      err1 += z_[k][0];
      err2 += z_[k][1];
      free += pin_[k] == 0;
    }
    for (int k = 0; k < n_; ++k) {
      if (pin_[k] == 0 && free > 0) z_[k][0] -= err1 / free;
      z_[k][1] -= err2 / n_;
    }
  }

  // Elements sitting on a kink up to rounding are pinned outright; reaching
  // them by a line search would need steps below the energy resolution.
  bool snap() {
    bool any = false;
    for (int k = 0; k < n_; ++k) {
      if (pin_[k] != 0) continue;
      for (int side : {-1, +1}) {
        double m = prob_.kink_value(side);
        if (std::abs(z_[k][0] - m) <= 1e-12 * (1.0 + std::abs(m))) {
          z_[k][0] = m;
          pin_[k] = side;
          any = true;
        }
      }
    }
    return any;
  }

  // Release the pinned element whose interval is violated most, once the
  // free elements nearly agree on their stress.
  bool release() {
    double lam;
    if (!stress1(lam)) return release_any();
    double spread = 0.0, scale = std::abs(lam);
    for (int k = 0; k < n_; ++k)
      if (pin_[k] == 0) {
        double gk = grad(z_, k)[0];
        spread = std::max(spread, std::abs(gk - lam));
        scale = std::max(scale, std::abs(gk));
      }
    if (spread > 1e-3 * (scale + 1e-12)) return false;
    return release_worst(lam);
  }

  bool release_any() {
    double lam;
    if (stress1(lam)) return release_worst(lam);
    // everything pinned: free the element with the widest interval
    int best = -1;
    double width = -1.0;
    for (int k = 0; k < n_; ++k) {
      auto [lo, hi] = interval(k);
      if (hi - lo > width) {
        width = hi - lo;
        best = k;
      }
    }
    if (best < 0) return false;
    pin_[best] = 0;
    return true;
  }

  bool release_worst(double lam) {
    int worst = -1;
    double viol = 0.0, dir = 0.0;
    for (int k = 0; k < n_; ++k) {
      if (pin_[k] == 0) continue;
      auto [lo, hi] = interval(k);
      double v = lam > hi ? lam - hi : (lam < lo ? lo - lam : 0.0);
      if (v > viol) {
        viol = v;
        worst = k;
        dir = lam > hi ? 1.0 : -1.0;
      }
    }
    if (worst < 0 || viol <= 1e-14 * (1.0 + std::abs(lam))) return false;
    pin_[worst] = 0;
    // step off the kink to the side that lowers the energy at stress lam
    z_[worst][0] += dir * 1e-10;
    return true;
  }

  static double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }

  const BarProblem& prob_;
  const Experiment1D& e_;
  int n_;
  double target1_;
  double target2_;
  std::vector<Vec2> z_;
  std::vector<int> pin_;
};

NodalArrays nodes_from(const Experiment1D& e, const std::vector<Vec2>& z) {
  NodalArrays a = affine_solution(e);
  const double h = e.L / e.n;
  for (int i = 1; i < e.n; ++i) {
    a.u[i] = a.u[i - 1] + h * z[i - 1][0] / e.y1_scale;
    a.v[i] = a.v[i - 1] + h * z[i - 1][1] / e.y2_scale;
  }
  return a;
}

}  // namespace

MeshSolution minimize(const Experiment1D& e) {
  e.validate();
  const int n = e.n;
  BarProblem prob(e);
  const NodalArrays start = initial_guess(e);
  std::vector<Vec2> z(n);
  for (int k = 0; k < n; ++k) z[k] = prob.element_y(start, k);

  double stat = INFINITY;
  NodalArrays a = start;
  auto done = [&](const std::vector<Vec2>& zz) {
    a = nodes_from(e, zz);
    stat = prob.stationarity(a);
    return stat <= 1e-8 * (1.0 + std::abs(prob.energy(a)));
  };
  ElementSearch search(prob, e);
  ElementSearch::Result r = search.run(std::move(z), done);
  done(r.z);

  MeshSolution out;
  out.nodes = a;
  out.energy = prob.energy(a);
  out.iterations = r.iterations;
  out.stationarity = stat;
  EnvelopeParams p = e.envelope();
  for (int k = 0; k < n; ++k) {
    Vec2 y = prob.element_y(a, k);
    out.grads.push_back(y);
    out.regions.push_back(classify(p, y[0], y[1]));
  }
  if (stat > 1e-8 * (1.0 + std::abs(out.energy))) {
    std::ostringstream os;
    os << "bar minimization stopped after " << r.iterations << " iterations with stationarity " << stat;
    throw NoConvergence(os.str(), r.iterations);
  }
  return out;
}

Regime regime_of(const Experiment1D& e) {
  EnvelopeParams p = e.envelope();
  Vec2 y = e.y_ext();
  Region reg = classify(p, y[0], y[1]);
  switch (reg.tag) {
    case RegionTag::Y1: return Regime::A;
    case RegionTag::Y2: return std::abs(y[1]) <= e.fit.function()(y[0]) ? Regime::B : Regime::C;
    case RegionTag::Y3: return Regime::D;
    default: return Regime::Outside;
  }
}

CornerClusters corner_clusters(const EnvelopeParams& p, const std::vector<Vec2>& grads, int sign, double radius) {
  CornerClusters c;
  c.corners = {touching_point(p, Corner::Apex, sign), touching_point(p, Corner::AtMin, sign),
               touching_point(p, Corner::AtMax, sign)};
  c.centroids = c.corners;
  c.label.assign(grads.size(), -1);
  auto dist = [](Vec2 a, Vec2 b) { return std::hypot(a[0] - b[0], a[1] - b[1]); };
  for (int pass = 0; pass < 100; ++pass) {
    bool moved = false;
    for (std::size_t i = 0; i < grads.size(); ++i) {
      int best = 0;
      for (int j = 1; j < 3; ++j)
        if (dist(grads[i], c.centroids[j]) < dist(grads[i], c.centroids[best])) best = j;
      moved |= best != c.label[i];
      c.label[i] = best;
    }
    if (!moved) break;
    std::array<Vec2, 3> sum{};
    c.counts = {};
    for (std::size_t i = 0; i < grads.size(); ++i) {
      sum[c.label[i]][0] += grads[i][0];
      sum[c.label[i]][1] += grads[i][1];
      ++c.counts[c.label[i]];
    }
    for (int j = 0; j < 3; ++j)
      if (c.counts[j] > 0) c.centroids[j] = {sum[j][0] / c.counts[j], sum[j][1] / c.counts[j]};
  }
  c.counts = {};
  for (std::size_t i = 0; i < grads.size(); ++i) {
    ++c.counts[c.label[i]];
    double d = dist(grads[i], c.corners[c.label[i]]);
    c.distance.push_back(d);
    c.worst = std::max(c.worst, d);
    if (d > radius) ++c.misses;
  }
  return c;
}

}  // namespace pdrelax
