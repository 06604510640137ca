#pragma once

#include <random>

#include "pdrelax/energy_core.hpp"
#include "pdrelax/fem1d.hpp"

namespace fx {

inline pdrelax::EnvelopeParams params() { return {0.095, -0.058, 0.00107}; }
inline pdrelax::DissipationFunction fitted_r() { return pdrelax::QuadraticYieldFit{}.function(); }

// Relative closeness with an absolute floor.
inline bool near(double a, double b, double rel, double abs_floor = 0.0) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

struct Sampler {
  std::mt19937_64 gen;
  explicit Sampler(unsigned long long seed) : gen(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
};

}  // namespace fx
