#pragma once

#include <array>
#include <cmath>

namespace pdrelax {

// Symmetric 3x3 tensor, components ordered xx, yy, zz, yz, xz, xy.
struct SymTensor {
  std::array<double, 6> c{};

  static SymTensor identity() { return {{1, 1, 1, 0, 0, 0}}; }
  static SymTensor from_matrix(const std::array<std::array<double, 3>, 3>& m) {
    return {{m[0][0], m[1][1], m[2][2], 0.5 * (m[1][2] + m[2][1]), 0.5 * (m[0][2] + m[2][0]),
             0.5 * (m[0][1] + m[1][0])}};
  }

  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }

  double operator()(int i, int j) const {
    if (i == j) return c[i];
    int k = 3 - i - j;  // (1,2)->0 is yz at slot 3, etc.
    return c[3 + k];
  }

  double trace() const { return c[0] + c[1] + c[2]; }
  SymTensor dev() const {
    double m = trace() / 3.0;
    SymTensor d = *this;
    d.c[0] -= m;
    d.c[1] -= m;
    d.c[2] -= m;
    return d;
  }
  double dot(const SymTensor& o) const {
    return c[0] * o.c[0] + c[1] * o.c[1] + c[2] * o.c[2] + 2.0 * (c[3] * o.c[3] + c[4] * o.c[4] + c[5] * o.c[5]);
  }
  double norm() const { return std::sqrt(dot(*this)); }

  std::array<std::array<double, 3>, 3> matrix() const {
    std::array<std::array<double, 3>, 3> m{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[i][j] = (*this)(i, j);
    return m;
  }

  // Q * this * Q^T
  SymTensor rotated(const std::array<std::array<double, 3>, 3>& q) const {
    auto a = matrix();
    std::array<std::array<double, 3>, 3> t{}, r{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) t[i][j] += q[i][k] * a[k][j];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) r[i][j] += t[i][k] * q[j][k];
    return from_matrix(r);
  }

  SymTensor& operator+=(const SymTensor& o) {
    for (int i = 0; i < 6; ++i) c[i] += o.c[i];
    return *this;
  }
  SymTensor& operator-=(const SymTensor& o) {
    for (int i = 0; i < 6; ++i) c[i] -= o.c[i];
    return *this;
  }
  SymTensor& operator*=(double s) {
    for (double& x : c) x *= s;
    return *this;
  }
};

inline SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
inline SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
inline SymTensor operator*(double s, SymTensor a) { return a *= s; }
inline SymTensor operator*(SymTensor a, double s) { return a *= s; }

}  // namespace pdrelax
