#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "pdrelax/energy_core.hpp"

namespace pdrelax {

struct Rect {
  double a1, b1, a2, b2;
};

// Samples of a bivariate function on a uniform tensor grid, endpoints
// included. Storage is row-major in the first coordinate: index i*n2 + j.
class GridFunction {
 public:
  GridFunction(Rect domain, int n1, int n2, std::vector<double> values);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  const Rect& domain() const { return dom_; }
  double h1() const { return (dom_.b1 - dom_.a1) / (n1_ - 1); }
  double h2() const { return (dom_.b2 - dom_.a2) / (n2_ - 1); }
  double node1(int i) const;
  double node2(int j) const;

  double operator()(int i, int j) const { return v_[static_cast<size_t>(i) * n2_ + j]; }
  const std::vector<double>& values() const { return v_; }

  // Bilinear interpolation; exact at nodes.
  double interpolate(double y1, double y2) const;

 private:
  Rect dom_;
  int n1_, n2_;
  std::vector<double> v_;
};

using ScalarField = std::function<double(double, double)>;

GridFunction sample(const ScalarField& f, Rect domain, int n1, int n2);

// Restriction to the grid of the convex envelope of the samples: for every
// node the best supporting plane below all samples, found by a small linear
// program in (slope, offset).
GridFunction lower_convex_hull(const GridFunction& g);

// Does <v, y> + c stay below every sample and meet the samples at each listed
// point (to 1e-8 (1 + |f|))? Listed points are evaluated by interpolation.
bool supporting_plane_check(const GridFunction& g, const std::vector<Vec2>& points, Vec2 v, double c);

// Grid nodes where the plane meets the samples within the same tolerance.
std::vector<Vec2> touch_set(const GridFunction& g, Vec2 v, double c);

// Flat-part error of the oracle on w(t) = (t^2 - 1)^2, sampled at n nodes on
// [-2 - h/2, 2 + h/2] (constant in the second coordinate), divided by h. Hull
// errors on other smooth inputs are compared against this constant times h.
double double_well_constant(int n = 201);

// CSV with header y1,y2,value; comment lines starting with '#' are skipped on
// load. The grid shape is recovered from the distinct coordinates.
void write_csv(const GridFunction& g, std::ostream& os, const std::string& comment = "");
GridFunction read_csv(std::istream& is);

}  // namespace pdrelax
