#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "pdrelax/convex_oracle.hpp"
#include "pdrelax/errors.hpp"

using namespace pdrelax;

namespace {

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (size_t k = 0; k < a.values().size(); ++k) m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  return m;
}

// Window over the support with y_min, y_mid, y_max, the apex height and y2_star on grid nodes.
GridFunction aligned_condensed(int per_half, int per_band) {
  auto p = fx::params();
  double h1 = p.s_star() / per_half;
  double h2 = (p.y2_star() - p.apex_height()) / per_band;
  int below = static_cast<int>(std::ceil(p.apex_height() / h2)) + 2;
  Rect d{p.y_min - 4 * h1, p.y_max + 4 * h1, p.apex_height() - below * h2, p.y2_star() + 4 * h2};
  int n1 = 2 * per_half + 9, n2 = below + per_band + 5;
  auto r0 = DissipationFunction::reference(p);
  return sample([&](double a, double b) { return condensed_energy(p, r0, {a, b}); }, d, n1, n2);
}

}  // namespace

TEST_SUITE("convex_oracle") {

TEST_CASE("sampling") {
  auto c = sample([](double, double) { return 3.0; }, {0, 1, 0, 1}, 4, 5);
  for (double v : c.values()) CHECK(v == 3.0);
  auto lin = sample([](double a, double) { return a; }, {0, 1, 0, 1}, 3, 3);
  CHECK(lin(0, 2) == 0.0);
  CHECK(lin(1, 0) == 0.5);
  CHECK(lin(2, 1) == 1.0);
  CHECK_THROWS_AS(sample([](double a, double) { return 1.0 / a; }, {0, 1, 0, 1}, 3, 3), NonFiniteSample);
  CHECK_THROWS_AS(sample([](double, double) { return 0.0; }, {0, 1, 0, 1}, 2, 3), ConfigError);
  CHECK(lin.interpolate(0.25, 0.7) == doctest::Approx(0.25));
}

TEST_CASE("condensed grid corner values agree with direct evaluation") {
  auto p = fx::params();
  auto r = fx::fitted_r();
  Rect d{p.y_min - 0.02, p.y_max + 0.02, -2 * p.y2_star(), 2 * p.y2_star()};
  auto g = sample([&](double a, double b) { return condensed_energy(p, r, {a, b}); }, d, 21, 21);
  CHECK(g(0, 0) == condensed_energy(p, r, {d.a1, d.a2}));
  CHECK(g(20, 20) == condensed_energy(p, r, {d.b1, d.b2}));
  CHECK(g(0, 20) == condensed_energy(p, r, {d.a1, d.b2}));
}

TEST_CASE("convex input is its own hull") {
  auto g = sample([](double a, double b) { return 0.5 * (a * a + b * b); }, {-1, 1, -1, 1}, 31, 27);
  auto h = lower_convex_hull(g);
  CHECK(max_abs_diff(g, h) <= 1e-12);
}

TEST_CASE("double well is flattened between the wells") {
  const int n = 81;
  auto g = sample([](double t, double s) { return (t * t - 1) * (t * t - 1) + s * s; }, {-2, 2, -1, 1}, n, 9);
  auto h = lower_convex_hull(g);
  double hstep = g.h1();
  for (int i = 0; i < n; ++i) {
    double t = g.node1(i);
    for (int j = 0; j < 9; ++j) {
      double expect = (std::abs(t) <= 1 ? 0.0 : (t * t - 1) * (t * t - 1)) + g.node2(j) * g.node2(j);
      CHECK(std::abs(h(i, j) - expect) <= hstep);
    }
  }
}

TEST_CASE("hull properties on the condensed energy") {
  auto p = fx::params();
  auto r = fx::fitted_r();
  Rect d{p.y_min - 0.02, p.y_max + 0.02, -2 * p.y2_star(), 2 * p.y2_star()};
  auto g = sample([&](double a, double b) { return condensed_energy(p, r, {a, b}); }, d, 41, 41);
  auto h = lower_convex_hull(g);
  for (size_t k = 0; k < g.values().size(); ++k) CHECK(h.values()[k] <= g.values()[k]);
  CHECK(max_abs_diff(lower_convex_hull(h), h) <= 1e-12);
  // along grid lines the hull is convex
  for (int i = 1; i + 1 < 41; ++i)
    for (int j = 0; j < 41; ++j) CHECK(h(i - 1, j) + h(i + 1, j) - 2 * h(i, j) >= -1e-12);
  // f of r0 lies below f of r, and the hulls keep that order
  auto g0 = sample([&](double a, double b) { return condensed_energy(p, DissipationFunction::reference(p), {a, b}); },
                   d, 41, 41);
  auto h0 = lower_convex_hull(g0);
  for (size_t k = 0; k < g.values().size(); ++k) CHECK(h0.values()[k] <= h.values()[k] + 1e-14);
}

TEST_CASE("hull error shrinks under nested refinement") {
  auto p = fx::params();
  auto r = fx::fitted_r();
  Rect d{p.y_min - 0.02, p.y_max + 0.02, -2 * p.y2_star(), 2 * p.y2_star()};
  double prev_max = 1e300, prev_mean = 1e300;
  for (int n : {13, 25, 49}) {
    auto g = sample([&](double a, double b) { return condensed_energy(p, r, {a, b}); }, d, n, n);
    auto h = lower_convex_hull(g);
    // compare on the coarsest grid's nodes
    int stride = (n - 1) / 12;
    double mx = 0.0, mean = 0.0;
    for (int i = 0; i < n; i += stride)
      for (int j = 0; j < n; j += stride) {
        double e = h(i, j) - relaxed_energy(p, {g.node1(i), g.node2(j)});
        CHECK(e >= -1e-12);  // the sample hull never undercuts the true envelope
        mx = std::max(mx, e);
        mean += e;
      }
    mean /= 169.0;
    CHECK(mx <= prev_max + 1e-15);
    CHECK(mean < prev_mean);
    prev_max = mx;
    prev_mean = mean;
  }
}

TEST_CASE("tangent plane at the apex touches the base corners along the triangle edges") {
  auto p = fx::params();
  auto g = aligned_condensed(8, 12);
  Vec2 a = touching_point(p, Corner::Apex, 1), m = touching_point(p, Corner::AtMin, 1),
       x = touching_point(p, Corner::AtMax, 1);
  Vec2 v = {p.y_mid(), p.apex_height()};  // gradient of f at the apex
  double c = 0.5 * (a[0] * a[0] + a[1] * a[1]) - v[0] * a[0] - v[1] * a[1];
  CHECK(supporting_plane_check(g, {a, m, x}, v, c));
  // f of r0 equals the envelope on Y2, so the contact runs along both edges from the apex
  auto touch = touch_set(g, v, c);
  auto on_edge = [&](Vec2 y, Vec2 e) {
    double cross = (y[0] - a[0]) * (e[1] - a[1]) - (y[1] - a[1]) * (e[0] - a[0]);
    return std::abs(cross) <= 1e-12 && (y[0] - a[0]) * (e[0] - a[0]) >= 0.0;
  };
  int corners = 0;
  for (const Vec2& y : touch) {
    CHECK((on_edge(y, m) || on_edge(y, x)));
    for (const Vec2& k : {a, m, x}) corners += std::hypot(y[0] - k[0], y[1] - k[1]) < 1e-12;
  }
  CHECK(corners == 3);
  // shifted down the plane still supports but touches nowhere
  CHECK(touch_set(g, v, c - 1.0).empty());
  CHECK_FALSE(supporting_plane_check(g, {a}, v, c - 1.0));
  CHECK_FALSE(supporting_plane_check(g, {}, v, c));
}

TEST_CASE("strictly convex sample touches its tangent plane once") {
  auto g = sample([](double a, double b) { return a * a + 2 * b * b; }, {-1, 1, -1, 1}, 21, 21);
  double x1 = g.node1(13), x2 = g.node2(6);
  Vec2 v = {2 * x1, 4 * x2};
  double c = x1 * x1 + 2 * x2 * x2 - v[0] * x1 - v[1] * x2;
  CHECK(supporting_plane_check(g, {{x1, x2}}, v, c));
  CHECK(touch_set(g, v, c).size() == 1);
}

TEST_CASE("csv round trip") {
  auto g = sample([](double a, double b) { return std::sin(a) * std::exp(b) / 3.0; }, {-1, 2, 0, 0.3}, 5, 4);
  std::stringstream ss;
  write_csv(g, ss, "note");
  auto back = read_csv(ss);
  CHECK(back.n1() == 5);
  CHECK(back.n2() == 4);
  CHECK(back.values() == g.values());
  std::stringstream bad("a,b,c\n1,2,3\n");
  CHECK_THROWS_AS(read_csv(bad), ConfigError);
}

}
