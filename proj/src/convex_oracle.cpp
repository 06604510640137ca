#include "pdrelax/convex_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "pdrelax/errors.hpp"

namespace pdrelax {

GridFunction::GridFunction(Rect domain, int n1, int n2, std::vector<double> values)
    : dom_(domain), n1_(n1), n2_(n2), v_(std::move(values)) {
  if (n1 < 3 || n2 < 3) throw ConfigError("grid needs at least 3 nodes per axis");
  if (!(dom_.a1 < dom_.b1) || !(dom_.a2 < dom_.b2)) throw ConfigError("grid domain is degenerate");
  if (v_.size() != static_cast<size_t>(n1) * n2) throw ConfigError("grid value count does not match n1*n2");
  for (double x : v_)
    if (!std::isfinite(x)) throw NonFiniteSample("grid contains a non-finite value");
}

double GridFunction::node1(int i) const {
  return i == n1_ - 1 ? dom_.b1 : dom_.a1 + i * h1();
}
double GridFunction::node2(int j) const {
  return j == n2_ - 1 ? dom_.b2 : dom_.a2 + j * h2();
}

double GridFunction::interpolate(double y1, double y2) const {
  double s = (y1 - dom_.a1) / h1(), t = (y2 - dom_.a2) / h2();
  int i = std::clamp(static_cast<int>(std::floor(s)), 0, n1_ - 2);
  int j = std::clamp(static_cast<int>(std::floor(t)), 0, n2_ - 2);
  double fs = s - i, ft = t - j;
  // snap round-off so that nodes return stored values exactly
  if (std::abs(fs) < 1e-9) fs = 0.0;
  if (std::abs(fs - 1.0) < 1e-9) fs = 1.0;
  if (std::abs(ft) < 1e-9) ft = 0.0;
  if (std::abs(ft - 1.0) < 1e-9) ft = 1.0;
  const GridFunction& g = *this;
  return (1 - fs) * (1 - ft) * g(i, j) + fs * (1 - ft) * g(i + 1, j) + (1 - fs) * ft * g(i, j + 1) +
         fs * ft * g(i + 1, j + 1);
}

GridFunction sample(const ScalarField& f, Rect domain, int n1, int n2) {
  if (n1 < 3 || n2 < 3) throw ConfigError("grid needs at least 3 nodes per axis");
  GridFunction probe(domain, n1, n2, std::vector<double>(static_cast<size_t>(n1) * n2, 0.0));
  std::vector<double> v(static_cast<size_t>(n1) * n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      double y1 = probe.node1(i), y2 = probe.node2(j);
      double x = f(y1, y2);
      if (!std::isfinite(x)) {
        std::ostringstream os;
        os << "sample at (" << y1 << ", " << y2 << ") is not finite";
        throw NonFiniteSample(os.str());
      }
      v[static_cast<size_t>(i) * n2 + j] = x;
    }
  return GridFunction(domain, n1, n2, std::move(v));
}

// ---------------------------------------------------------------------------
// Per-node supporting plane LP.
//
// For a node x the envelope value is max t subject to
//   t <= f_k + <v, x - y_k>   for all samples k,
// a 3-variable LP in (v, t). Seidel's incremental scheme: when constraint j
// cuts the current optimum, the new optimum lies on its boundary, which turns
// the problem into a 2-variable LP in v, and one level further into an
// interval. A box |v_i| <= M keeps every subproblem bounded.

namespace {

// Samples that may be hull vertices, stored column-wise in processing order.
struct Candidates {
  std::vector<double> y1, y2, f;
  size_t size() const { return f.size(); }
};

class PlaneLP {
 public:
  PlaneLP(const Candidates& c, double box, double tol) : c_(c), box_(box), tol_(tol) {}

  // Constraints are visited as prefix[0..P) followed by 0..N-1. Returns the
  // optimal t; v carries the result.
  double solve(double x1, double x2, const std::vector<int>& prefix, Vec2& v) {
    prefix_ = &prefix;
    recent_.clear();
    const size_t P = prefix.size(), N = c_.size();
    double t = INFINITY;
    for (size_t i = 0; i < P + N; ++i) {
      int j = at(i);
      double bound = c_.f[j] + v[0] * (x1 - c_.y1[j]) + v[1] * (x2 - c_.y2[j]);
      if (t > bound + tol_) {
        t = on_plane(j, i, x1, x2, v);
        note(j);
      }
      if (i >= P) {
        // fast scan over the remaining contiguous block
        const double v0 = v[0], v1 = v[1];
        const double thresh = t - v0 * x1 - v1 * x2 - tol_;
        const double* F = c_.f.data();
        const double* A = c_.y1.data();
        const double* B = c_.y2.data();
        size_t k = i + 1 - P;
        while (k < N && F[k] - v0 * A[k] - v1 * B[k] >= thresh) ++k;
        i = k + P - 1;
      }
    }
    return t;
  }

  std::vector<int> recent_;  // constraints that moved the optimum last

 private:
  int at(size_t i) const {
    const size_t P = prefix_->size();
    return i < P ? (*prefix_)[i] : static_cast<int>(i - P);
  }

  // maximize f_j + <v, x - y_j> subject to <y_k - y_j, v> <= f_k - f_j for
  // the constraints visited before position pos
  double on_plane(int j, size_t pos, double x1, double x2, Vec2& v) {
    double c1 = x1 - c_.y1[j], c2 = x2 - c_.y2[j];
    v[0] = c1 > 0 ? box_ : (c1 < 0 ? -box_ : 0.0);
    v[1] = c2 > 0 ? box_ : (c2 < 0 ? -box_ : 0.0);
    for (size_t m = 0; m < pos; ++m) {
      int k = at(m);
      if (k == j) continue;
      double a1 = c_.y1[k] - c_.y1[j], a2 = c_.y2[k] - c_.y2[j], b = c_.f[k] - c_.f[j];
      if (a1 * v[0] + a2 * v[1] > b + tol_) {
        on_line(j, k, m, c1, c2, v);
        note(k);
      }
    }
    return c_.f[j] + c1 * v[0] + c2 * v[1];
  }

  // maximize <c, v> on the line <y_k - y_j, v> = f_k - f_j under the box and
  // the constraints visited before position pos
  void on_line(int j, int k, size_t pos, double c1, double c2, Vec2& v) {
    double a1 = c_.y1[k] - c_.y1[j], a2 = c_.y2[k] - c_.y2[j], b = c_.f[k] - c_.f[j];
    double nn = a1 * a1 + a2 * a2;
    double p1 = a1 * b / nn, p2 = a2 * b / nn;  // foot point on the line
    double inv = 1.0 / std::sqrt(nn);
    double u1 = -a2 * inv, u2 = a1 * inv;  // direction along the line
    double lo = -INFINITY, hi = INFINITY;
    auto cut = [&](double q1, double q2, double rhs) {
      // q . (p + s u) <= rhs
      double qu = q1 * u1 + q2 * u2;
      double slack = rhs - (q1 * p1 + q2 * p2);
      if (std::abs(qu) < 1e-300) return;  // parallel; feasibility assumed
      double s = slack / qu;
      if (qu > 0) hi = std::min(hi, s);
      else lo = std::max(lo, s);
    };
    cut(1, 0, box_);
    cut(-1, 0, box_);
    cut(0, 1, box_);
    cut(0, -1, box_);
    for (size_t m = 0; m < pos; ++m) {
      int q = at(m);
      if (q == j || q == k) continue;
      cut(c_.y1[q] - c_.y1[j], c_.y2[q] - c_.y2[j], c_.f[q] - c_.f[j]);
    }
    if (lo > hi) lo = hi = 0.5 * (lo + hi);  // round-off in a degenerate corner
    double cu = c1 * u1 + c2 * u2;
    double s = cu > 0 ? hi : (cu < 0 ? lo : std::clamp(0.0, lo, hi));
    v[0] = p1 + s * u1;
    v[1] = p2 + s * u2;
  }

  void note(int k) {
    if (std::find(recent_.begin(), recent_.end(), k) != recent_.end()) return;
    recent_.push_back(k);
    if (recent_.size() > 6) recent_.erase(recent_.begin());
  }

  const Candidates& c_;
  double box_;
  double tol_;
  const std::vector<int>* prefix_ = nullptr;
};

}  // namespace

GridFunction lower_convex_hull(const GridFunction& g) {
  const int n1 = g.n1(), n2 = g.n2();
  double fmin = INFINITY, fmax = -INFINITY;
  for (double x : g.values()) {
    fmin = std::min(fmin, x);
    fmax = std::max(fmax, x);
  }
  // Drop samples that sit on or above the midpoint of two opposite
  // neighbours; they cannot be vertices of the lower hull.
  static const int dirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  std::vector<int> kept;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      bool keep = true;
      for (auto& d : dirs) {
        int ia = i - d[0], ja = j - d[1], ib = i + d[0], jb = j + d[1];
        if (ia < 0 || ib >= n1 || ja < 0 || ja >= n2 || jb < 0 || jb >= n2) continue;
        if (g(i, j) >= 0.5 * (g(ia, ja) + g(ib, jb))) {
          keep = false;
          break;
        }
      }
      if (keep) kept.push_back(i * n2 + j);
    }

  // Fixed pseudo-random order keeps the expected cost linear and the output
  // reproducible.
  std::mt19937_64 rng(0x5eed1234abcdULL);
  std::shuffle(kept.begin(), kept.end(), rng);
  Candidates cand;
  std::vector<int> slot(static_cast<size_t>(n1) * n2, -1);  // grid index -> candidate id
  for (size_t c = 0; c < kept.size(); ++c) {
    int idx = kept[c];
    cand.y1.push_back(g.node1(idx / n2));
    cand.y2.push_back(g.node2(idx % n2));
    cand.f.push_back(g.values()[idx]);
    slot[idx] = static_cast<int>(c);
  }

  const double hmin = std::min(g.h1(), g.h2());
  const double diam = std::hypot(g.domain().b1 - g.domain().a1, g.domain().b2 - g.domain().a2);
  const double box = 2.0 * (fmax - fmin) / hmin + 1.0;
  const double tol = 8.0 * 2.2e-16 * (std::max(std::abs(fmin), std::abs(fmax)) + box * diam);

  PlaneLP lp(cand, box, tol);
  std::vector<double> out(g.values().size());
  std::vector<int> prefix;
  Vec2 v{0.0, 0.0};
  std::vector<int> recent;
  for (int i = 0; i < n1; ++i) {
    // serpentine sweep so consecutive nodes are neighbours
    for (int jj = 0; jj < n2; ++jj) {
      int j = (i % 2 == 0) ? jj : n2 - 1 - jj;
      // warm start: nearby candidates, then whatever was tight last time
      prefix.clear();
      for (int di = -2; di <= 2; ++di)
        for (int dj = -2; dj <= 2; ++dj) {
          int a = i + di, b = j + dj;
          if (a < 0 || a >= n1 || b < 0 || b >= n2) continue;
          int c = slot[static_cast<size_t>(a) * n2 + b];
          if (c >= 0) prefix.push_back(c);
        }
      prefix.insert(prefix.end(), recent.begin(), recent.end());
      double x1 = g.node1(i), x2 = g.node2(j);
      double t = lp.solve(x1, x2, prefix, v);
      out[static_cast<size_t>(i) * n2 + j] = std::min(t, g(i, j));
      recent = lp.recent_;
    }
  }
  return GridFunction(g.domain(), n1, n2, std::move(out));
}

bool supporting_plane_check(const GridFunction& g, const std::vector<Vec2>& points, Vec2 v, double c) {
  if (points.empty()) return false;
  for (int i = 0; i < g.n1(); ++i)
    for (int j = 0; j < g.n2(); ++j) {
      double f = g(i, j);
      double plane = v[0] * g.node1(i) + v[1] * g.node2(j) + c;
      if (plane > f + 1e-8 * (1.0 + std::abs(f))) return false;
    }
  for (const Vec2& y : points) {
    const Rect& d = g.domain();
    if (y[0] < d.a1 || y[0] > d.b1 || y[1] < d.a2 || y[1] > d.b2) return false;
    double f = g.interpolate(y[0], y[1]);
    double plane = v[0] * y[0] + v[1] * y[1] + c;
    if (std::abs(f - plane) > 1e-8 * (1.0 + std::abs(f))) return false;
  }
  return true;
}

std::vector<Vec2> touch_set(const GridFunction& g, Vec2 v, double c) {
  std::vector<Vec2> out;
  for (int i = 0; i < g.n1(); ++i)
    for (int j = 0; j < g.n2(); ++j) {
      double f = g(i, j);
      double plane = v[0] * g.node1(i) + v[1] * g.node2(j) + c;
      if (std::abs(f - plane) <= 1e-8 * (1.0 + std::abs(f))) out.push_back({g.node1(i), g.node2(j)});
    }
  return out;
}

void write_csv(const GridFunction& g, std::ostream& os, const std::string& comment) {
  if (!comment.empty()) os << "# " << comment << "\n";
  os << "y1,y2,value\n";
  char buf[96];
  for (int i = 0; i < g.n1(); ++i)
    for (int j = 0; j < g.n2(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.node1(i), g.node2(j), g(i, j));
      os << buf;
    }
}

GridFunction read_csv(std::istream& is) {
  std::string line;
  bool header = false;
  std::map<double, int> c1, c2;
  std::vector<std::array<double, 3>> rows;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("y1,y2,value", 0) != 0) throw ConfigError("grid CSV must start with header y1,y2,value");
      header = true;
      continue;
    }
    std::array<double, 3> r{};
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r[0], &r[1], &r[2]) != 3)
      throw ConfigError("malformed grid CSV row: " + line);
    c1[r[0]] = 0;
    c2[r[1]] = 0;
    rows.push_back(r);
  }
  int n1 = 0, n2 = 0;
  for (auto& [k, idx] : c1) idx = n1++;
  for (auto& [k, idx] : c2) idx = n2++;
  if (n1 < 3 || n2 < 3 || rows.size() != static_cast<size_t>(n1) * n2)
    throw ConfigError("grid CSV does not describe a full tensor grid");
  std::vector<double> v(rows.size());
  for (auto& r : rows) v[static_cast<size_t>(c1[r[0]]) * n2 + c2[r[1]]] = r[2];
  Rect d{c1.begin()->first, c1.rbegin()->first, c2.begin()->first, c2.rbegin()->first};
  return GridFunction(d, n1, n2, std::move(v));
}

double double_well_constant(int n) {
  if (n < 5) throw ConfigError("double-well fixture needs at least 5 nodes");
  const double h = 4.0 / (n - 2);
  auto g = sample([](double t, double) { return (t * t - 1) * (t * t - 1); }, {-2 - h / 2, 2 + h / 2, -1, 1}, n, 3);
  auto hull = lower_convex_hull(g);
  double err = 0;
  for (int i = 0; i < n; ++i)
    if (std::abs(g.node1(i)) <= 1)
      for (int j = 0; j < 3; ++j) err = std::max(err, std::abs(hull(i, j)));
  return err / g.h1();
}

}  // namespace pdrelax
