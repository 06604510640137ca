#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pdrelax {

using Vec2 = std::array<double, 2>;

// Hardening ratio and support of the yield radius in dimensionless trace units.
struct EnvelopeParams {
  double b;
  double y_min;
  double y_max;

  EnvelopeParams(double b, double y_min, double y_max);

  double y_mid() const { return 0.5 * (y_min + y_max); }
  double s_star() const { return 0.5 * (y_max - y_min); }
  double y2_star() const;       // top of the triangle region, (b+1)/sqrt(b) * s_star
  double apex_height() const;   // sqrt(b) * s_star, the peak of the reference triangle
};

// A nonnegative function that is concave on [lo, hi] and vanishes outside.
// Used both for the dimensionless yield radius and for the stress-valued rho.
class DissipationFunction {
 public:
  using Fn = std::function<double(double)>;

  // value and slope are only called inside [lo, hi]; kinks lists interior
  // points where slope is undefined. The support ends count as kinks when the
  // inner slope there is nonzero.
  DissipationFunction(Fn value, Fn slope, double lo, double hi, std::string tag,
                      std::vector<double> kinks = {});

  double operator()(double x) const;
  std::optional<double> slope(double x) const;
  // Mean of the one-sided slopes; equals slope() wherever that exists.
  double slope_hint(double x) const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::string& tag() const { return tag_; }

  // Sampled midpoint test on the support.
  bool concave_on_support(int samples = 4096, double tol = 1e-10) const;

  // x -> value_scale * f(arg_scale * x), e.g. the dimensional rho from r.
  DissipationFunction rescaled(double value_scale, double arg_scale) const;

  static DissipationFunction triangle(double lo, double hi, double peak);
  static DissipationFunction quadratic(double lo, double hi, double apex, double peak);
  static DissipationFunction reference(const EnvelopeParams& p);  // r0
  static DissipationFunction constant_cap(double lo, double hi, double level);

 private:
  double one_sided(double x, int side) const;

  Fn value_;
  Fn slope_;
  double lo_;
  double hi_;
  std::string tag_;
  std::vector<double> kinks_;
};

enum class RegionTag { YTilde, Y1, Y2, Y3, Y4 };

struct Region {
  RegionTag tag;
  int sign;  // sign of y2, 0 on the axis
  bool operator==(const Region&) const = default;
};

std::string to_string(RegionTag t);

// Dimensionless strain state with plastic shift z_n on the second coordinate.
struct EnergyPoint {
  double y1;
  double y2;
  double z_n = 0.0;
};

double r0_eval(const EnvelopeParams& p, double y1);

double condensed_energy(const EnvelopeParams& p, const DissipationFunction& r, const EnergyPoint& y);

// Gradient in (y1, y2). At kinks of r the mean one-sided slope is used; the
// clamp contributes nothing on its inactive side.
Vec2 condensed_gradient(const EnvelopeParams& p, const DissipationFunction& r, const EnergyPoint& y);

bool small_b_condition(const EnvelopeParams& p, const DissipationFunction& r);

Region classify(const EnvelopeParams& p, double y1, double y2);

// Closed-form convex envelope, valid when small_b_condition holds for the r it
// stands for. Not checked here; see RelaxedEnvelope.
double relaxed_energy(const EnvelopeParams& p, const EnergyPoint& y);
Vec2 relaxed_gradient(const EnvelopeParams& p, const EnergyPoint& y);

enum class Curve {
  AlphaMinPlus, AlphaMinMinus, BetaMinPlus, BetaMinMinus,
  AlphaMaxPlus, AlphaMaxMinus, BetaMaxPlus, BetaMaxMinus,
  AlphaInfPlus, AlphaInfMinus, BetaInfPlus, BetaInfMinus,
};

// Families of laminate endpoints. Finite families take s in (0, s_star],
// the unbounded pair takes s > y2_star.
Vec2 construction_curve(const EnvelopeParams& p, Curve which, double s);

enum class Corner { Apex, AtMin, AtMax };
Vec2 touching_point(const EnvelopeParams& p, Corner c, int sign);

// Envelope bound to a specific r; construction fails unless the small-b
// condition holds and r is admissible.
class RelaxedEnvelope {
 public:
  RelaxedEnvelope(EnvelopeParams p, DissipationFunction r);

  double energy(const EnergyPoint& y) const { return relaxed_energy(p_, y); }
  Vec2 gradient(const EnergyPoint& y) const { return relaxed_gradient(p_, y); }
  Region region(const EnergyPoint& y) const { return classify(p_, y.y1, y.y2 - y.z_n); }
  double condensed(const EnergyPoint& y) const { return condensed_energy(p_, r_, y); }

  const EnvelopeParams& params() const { return p_; }
  const DissipationFunction& dissipation() const { return r_; }

 private:
  EnvelopeParams p_;
  DissipationFunction r_;
};

}  // namespace pdrelax
