#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "pdrelax/errors.hpp"
#include "pdrelax/material_update.hpp"

using namespace pdrelax;

namespace {

const double K = 3.9e9, MU = 2.8e9;

MaterialParams rock() { return MaterialParams::from_dimensionless(K, MU, 0.095, fx::fitted_r()); }

SymTensor random_strain(fx::Sampler& s, double tr_lo, double tr_hi, double dev_scale) {
  SymTensor d;
  for (int k = 0; k < 6; ++k) d[k] = s.uniform(-dev_scale, dev_scale);
  d = d.dev();
  return d + (s.uniform(tr_lo, tr_hi) / 3.0) * SymTensor::identity();
}

// Golden-section minimum of a unimodal scalar function.
template <class F>
double golden_min(F f, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi, c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-16 * (1 + std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_SUITE("material_update") {

TEST_CASE("parameter scaling") {
  auto m = rock();
  CHECK(m.beta == doctest::Approx(2 * MU * 0.095));
  double k = std::sqrt(K / (2 * MU));
  CHECK(m.rho(-0.0385 / k) == doctest::Approx(2 * MU * 0.016));
  CHECK(m.rho(0.1) == 0.0);
  CHECK_THROWS_AS(MaterialParams(-1.0, MU, 1.0, fx::fitted_r()), ConfigError);
}

TEST_CASE("tensor algebra") {
  fx::Sampler s(1);
  for (int k = 0; k < 100; ++k) {
    SymTensor e = random_strain(s, -0.05, 0.05, 0.01);
    CHECK(std::abs(e.dev().trace()) <= 1e-14);
    auto m = e.matrix();
    double fro = 0;
    for (auto& row : m)
      for (double v : row) fro += v * v;
    CHECK(e.norm() == doctest::Approx(std::sqrt(fro)).epsilon(1e-14));
  }
}

TEST_CASE("free energy by hand") {
  auto m = rock();
  CHECK(free_energy(m, {}, {}) == 0.0);
  fx::Sampler s(2);
  SymTensor e = random_strain(s, -0.03, -0.02, 0.01);
  InternalState full{e.dev(), 0.0};
  CHECK(free_energy(m, e, full) ==
        doctest::Approx(0.5 * K * e.trace() * e.trace() + 0.5 * m.beta * e.dev().norm() * e.dev().norm()));
  InternalState st{0.3 * e.dev(), 0.004};
  double tr = e.trace(), q = 0.7 * e.dev().norm(), ep = 0.3 * e.dev().norm();
  double hand = 0.5 * K * tr * tr + MU * q * q + m.rho(tr) * 0.004 + 0.5 * m.beta * ep * ep;
  CHECK(free_energy(m, e, st) == doctest::Approx(hand).epsilon(1e-13));
}

TEST_CASE("stress is the strain derivative of the free energy") {
  auto m = rock();
  fx::Sampler s(3);
  for (int k = 0; k < 500; ++k) {
    SymTensor e = random_strain(s, -0.06, 0.0, 0.01);
    SymTensor ep;
    for (int i = 0; i < 6; ++i) ep[i] = s.uniform(-0.003, 0.003);
    InternalState st{ep.dev(), s.uniform(0, 0.01)};
    SymTensor sig = stress(m, e, st);
    for (int i = 0; i < 6; ++i) {
      double h = 1e-7;
      SymTensor a = e, b = e;
      a[i] += h;
      b[i] -= h;
      double d = (free_energy(m, a, st) - free_energy(m, b, st)) / (2 * h);
      double expect = i < 3 ? sig[i] : 2 * sig[i];  // off-diagonal slots stand for two entries
      CHECK(fx::near(d, expect, 1e-6, 1e-6 * K * 1e-3));
    }
  }
}

TEST_CASE("stress special cases") {
  auto m = rock();
  fx::Sampler s(4);
  SymTensor e = random_strain(s, -0.04, -0.01, 0.01);
  InternalState st{0.2 * e.dev(), 0.0};
  SymTensor sig = stress(m, e, st);
  SymTensor expect = K * e.trace() * SymTensor::identity() + 2 * MU * (e.dev() - st.eps_p);
  for (int i = 0; i < 6; ++i) CHECK(sig[i] == doctest::Approx(expect[i]));
  // hydrostatic strain gives a spherical stress with the hardening term
  double a = -0.01;
  InternalState sp{{}, 0.002};
  SymTensor hs = stress(m, a * SymTensor::identity(), sp);
  double drho = *m.rho.slope(3 * a);
  for (int i = 0; i < 3; ++i) CHECK(hs[i] == doctest::Approx(K * 3 * a + drho * 0.002));
  for (int i = 3; i < 6; ++i) CHECK(hs[i] == 0.0);
  // the fitted radius is smooth at its peak but kinked at the support ends
  CHECK_NOTHROW(stress(m, ((-0.0385 / std::sqrt(K / (2 * MU))) / 3) * SymTensor::identity(), sp));
  CHECK_THROWS_AS(stress(m, SymTensor{{m.rho.lo(), 0, 0, 0, 0, 0}}, sp), NondifferentiableRho);
}

TEST_CASE("yield function") {
  auto m = rock();
  CHECK(yield_function(m, {}, {}) == doctest::Approx(-m.rho(0.0)));
  SymTensor e = 0.01 * SymTensor{{1, -1, 0, 0, 0, 0}} + (0.05 / 3) * SymTensor::identity();
  CHECK(m.rho(e.trace()) == 0.0);
  CHECK(yield_function(m, e, {}) > 0.0);
}

TEST_CASE("elastic steps leave the state alone") {
  auto m = rock();
  SymTensor e = 1e-4 * SymTensor{{1, -1, 0, 0, 0, 0}} + (-0.03 / 3) * SymTensor::identity();
  InternalState sn{1e-5 * SymTensor{{0, 0, 0, 1, 0, 0}}, 0.01};
  InternalState out = incremental_update(m, e, sn);
  CHECK(out.p == sn.p);
  CHECK(out.eps_p.c == sn.eps_p.c);
}

TEST_CASE("closed form outside the support") {
  auto m = rock();
  SymTensor e = 0.01 * SymTensor{{1, -1, 0, 0.5, 0, 0}} + (0.05 / 3) * SymTensor::identity();
  InternalState out = incremental_update(m, e, {});
  SymTensor expect = (2 * MU / (2 * MU + m.beta)) * e.dev();
  for (int i = 0; i < 6; ++i) CHECK(out.eps_p[i] == doctest::Approx(expect[i]).epsilon(1e-13));
  CHECK(out.p == doctest::Approx(expect.norm()).epsilon(1e-13));
}

TEST_CASE("virgin plastic steps minimize the incremental functional") {
  auto m = rock();
  fx::Sampler s(5);
  int plastic = 0;
  for (int k = 0; k < 300; ++k) {
    SymTensor e = random_strain(s, -0.07, 0.002, 0.02);
    InternalState out = incremental_update(m, e, {});
    double q = e.dev().norm();
    if (q == 0.0) continue;
    SymTensor n = (1.0 / q) * e.dev();
    // the optimal plastic strain is coaxial with dev eps; search its length
    auto along = [&](double t) { return incremental_functional(m, e, {}, {t * n, t}); };
    double t = golden_min(along, 0.0, q);
    double best = along(t);
    CHECK(std::abs(out.p - t) <= 1e-8 * (1 + q));
    CHECK(incremental_functional(m, e, {}, out) <= best + 1e-10 * (1 + std::abs(best)));
    CHECK(std::abs(out.eps_p.trace()) <= 1e-12);
    CHECK(out.p == doctest::Approx(out.eps_p.norm()).epsilon(1e-14));
    if (out.p > 0.0) {
      ++plastic;
      CHECK(std::abs(yield_function(m, e, out)) <= 1e-10 * 2 * MU);
    } else {
      CHECK(yield_function(m, e, out) <= 1e-10 * 2 * MU);
    }
    // random perturbations of the returned state never do better
    for (int j = 0; j < 5; ++j) {
      SymTensor d;
      for (int i = 0; i < 6; ++i) d[i] = s.uniform(-1e-4, 1e-4);
      InternalState pert{out.eps_p + d.dev(), 0.0};
      pert.p = pert.eps_p.norm() + s.uniform(0, 1e-4);
      double fp = incremental_functional(m, e, {}, pert), f0 = incremental_functional(m, e, {}, out);
      CHECK(fp - f0 >= -1e-10 * (1 + std::abs(f0)));
    }
  }
  CHECK(plastic > 100);
}

TEST_CASE("infeasible trial states cost infinity") {
  auto m = rock();
  InternalState sn{};
  InternalState bad{1e-3 * SymTensor{{1, -1, 0, 0, 0, 0}}, 0.0};
  CHECK(std::isinf(incremental_functional(m, SymTensor{}, sn, bad)));
}

TEST_CASE("condensed energy: elastic branch and virgin identity") {
  auto m = rock();
  SymTensor e = 1e-4 * SymTensor{{1, -1, 0, 0, 0, 0}} + (-0.03 / 3) * SymTensor::identity();
  InternalState sn{1e-5 * SymTensor{{0, 0, 0, 1, 0, 0}}, 0.01};
  double tr = e.trace(), q = (e.dev() - sn.eps_p).norm();
  CHECK(condensed_energy_3d(m, e, sn) == doctest::Approx(0.5 * K * tr * tr + MU * q * q + m.rho(tr) * 0.01));
  fx::Sampler s(6);
  for (int k = 0; k < 200; ++k) {
    SymTensor x = random_strain(s, -0.07, 0.002, 0.02);
    double w = condensed_energy_3d(m, x, {});
    CHECK(w == doctest::Approx(incremental_functional(m, x, {}, incremental_update(m, x, {}))).epsilon(1e-12));
  }
}

TEST_CASE("condensed energy equals 2 mu times the dimensionless one") {
  auto m = rock();
  auto p = fx::params();
  auto r = fx::fitted_r();
  double k = std::sqrt(K / (2 * MU));
  fx::Sampler s(8);
  for (int i = 0; i < 500; ++i) {
    SymTensor x = random_strain(s, -0.08, 0.01, 0.02);
    double y1 = k * x.trace(), y2 = x.dev().norm();
    CHECK(condensed_energy_3d(m, x, {}) == doctest::Approx(2 * MU * condensed_energy(p, r, {y1, y2})).epsilon(1e-12));
  }
}

}
