#include "pdrelax/energy_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "pdrelax/errors.hpp"

namespace pdrelax {

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }
double pos(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

EnvelopeParams::EnvelopeParams(double b_, double lo, double hi) : b(b_), y_min(lo), y_max(hi) {
  if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("hardening ratio b must be positive and finite");
  if (!(y_min < y_max) || !std::isfinite(y_min) || !std::isfinite(y_max))
    throw ConfigError("support requires y_min < y_max");
}

double EnvelopeParams::y2_star() const { return (b + 1.0) / std::sqrt(b) * s_star(); }
double EnvelopeParams::apex_height() const { return std::sqrt(b) * s_star(); }

// ---------------------------------------------------------------------------

DissipationFunction::DissipationFunction(Fn value, Fn slope, double lo, double hi, std::string tag,
                                         std::vector<double> kinks)
    : value_(std::move(value)), slope_(std::move(slope)), lo_(lo), hi_(hi), tag_(std::move(tag)),
      kinks_(std::move(kinks)) {
  if (!(lo_ < hi_)) throw ConfigError("dissipation support must satisfy lo < hi");
  if (!value_ || !slope_) throw ConfigError("dissipation function needs value and slope callables");
}

double DissipationFunction::operator()(double x) const {
  if (x < lo_ || x > hi_) return 0.0;
  return std::max(0.0, value_(x));
}

double DissipationFunction::one_sided(double x, int side) const {
  // side < 0: limit from the left, side > 0: from the right
  double step = 1e-9 * std::max(1.0, hi_ - lo_) * (hi_ - lo_);
  double z = x + side * step;
  if (z <= lo_ || z >= hi_) return 0.0;
  return slope_(z);
}

std::optional<double> DissipationFunction::slope(double x) const {
  if (x < lo_ || x > hi_) return 0.0;
  if (x == lo_ || x == hi_) {
    double inner = slope_(x);
    if (inner != 0.0) return std::nullopt;
    return 0.0;
  }
  for (double k : kinks_)
    if (x == k) return std::nullopt;
  return slope_(x);
}

double DissipationFunction::slope_hint(double x) const {
  if (auto s = slope(x)) return *s;
  return 0.5 * (one_sided(x, -1) + one_sided(x, +1));
}

bool DissipationFunction::concave_on_support(int samples, double tol) const {
  double h = (hi_ - lo_) / samples;
  for (int i = 0; i < samples; ++i) {
    double a = lo_ + i * h;
    for (int span = 1; i + 2 * span <= samples; span *= 2) {
      double m = a + span * h, c = a + 2 * span * h;
      double fa = (*this)(a), fm = (*this)(m), fc = (*this)(c);
      if (fm + tol < 0.5 * (fa + fc)) return false;
    }
    if ((*this)(a) < -tol) return false;
  }
  return true;
}

DissipationFunction DissipationFunction::rescaled(double value_scale, double arg_scale) const {
  if (!(value_scale > 0.0) || !(arg_scale > 0.0)) throw ConfigError("rescale factors must be positive");
  auto v = value_;
  auto s = slope_;
  std::vector<double> k;
  for (double x : kinks_) k.push_back(x / arg_scale);
  return DissipationFunction([v, value_scale, arg_scale](double x) { return value_scale * v(arg_scale * x); },
                             [s, value_scale, arg_scale](double x) {
                               return value_scale * arg_scale * s(arg_scale * x);
                             },
                             lo_ / arg_scale, hi_ / arg_scale, tag_, std::move(k));
}

DissipationFunction DissipationFunction::triangle(double lo, double hi, double peak) {
  double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double k = peak / half;
  return DissipationFunction([=](double x) { return k * (half - std::abs(x - mid)); },
                             [=](double x) { return k * sgn(mid - x); }, lo, hi, "triangle-r0", {mid});
}

DissipationFunction DissipationFunction::quadratic(double lo, double hi, double apex, double peak) {
  if (!(lo < apex && apex < hi) || !(peak > 0.0))
    throw ConfigError("quadratic fit needs lo < apex < hi and a positive peak");
  double dl = apex - lo, dr = hi - apex;
  return DissipationFunction(
      [=](double x) {
        double d = (x - apex) / (x <= apex ? dl : dr);
        return peak * (1.0 - d * d);
      },
      [=](double x) {
        double w = x <= apex ? dl : dr;
        return -2.0 * peak * (x - apex) / (w * w);
      },
      lo, hi, "quadratic-drucker-prager");
}

DissipationFunction DissipationFunction::reference(const EnvelopeParams& p) {
  return triangle(p.y_min, p.y_max, p.apex_height());
}

DissipationFunction DissipationFunction::constant_cap(double lo, double hi, double level) {
  return DissipationFunction([=](double) { return level; }, [](double) { return 0.0; }, lo, hi, "constant");
}

// ---------------------------------------------------------------------------

std::string to_string(RegionTag t) {
  switch (t) {
    case RegionTag::YTilde: return "Y_TILDE";
    case RegionTag::Y1: return "Y1";
    case RegionTag::Y2: return "Y2";
    case RegionTag::Y3: return "Y3";
    case RegionTag::Y4: return "Y4";
  }
  return "?";
}

double r0_eval(const EnvelopeParams& p, double y1) {
  if (y1 < p.y_min || y1 > p.y_max) return 0.0;
  return std::sqrt(p.b) * std::max(0.0, p.s_star() - std::abs(y1 - p.y_mid()));
}

double condensed_energy(const EnvelopeParams& p, const DissipationFunction& r, const EnergyPoint& y) {
  double w = y.y2 - y.z_n;
  double excess = pos(std::abs(w) - r(y.y1));
  return 0.5 * (y.y1 * y.y1 + w * w) - excess * excess / (2.0 * (p.b + 1.0));
}

Vec2 condensed_gradient(const EnvelopeParams& p, const DissipationFunction& r, const EnergyPoint& y) {
  double w = y.y2 - y.z_n;
  double excess = pos(std::abs(w) - r(y.y1));
  double g1 = y.y1;
  if (excess > 0.0) g1 += excess * r.slope_hint(y.y1) / (p.b + 1.0);
  double g2 = w - excess * sgn(w) / (p.b + 1.0);
  return {g1, g2};
}

bool small_b_condition(const EnvelopeParams& p, const DissipationFunction& r) {
  return p.apex_height() <= r(p.y_mid());
}

Region classify(const EnvelopeParams& p, double y1, double y2) {
  int s = static_cast<int>(sgn(y2));
  if (y1 <= p.y_min || y1 >= p.y_max) return {RegionTag::YTilde, s};
  double a = std::abs(y2);
  double r0 = r0_eval(p, y1);
  if (a < r0) return {RegionTag::Y1, s};
  // the upper bound equals r0 only at the apex; max keeps rounding from skipping Y2 there
  if (a <= std::max(r0, p.y2_star() - r0 / p.b)) return {RegionTag::Y2, s};
  if (a <= p.y2_star()) return {RegionTag::Y3, s};
  return {RegionTag::Y4, s};
}

double relaxed_energy(const EnvelopeParams& p, const EnergyPoint& y) {
  const double y1 = y.y1, w = y.y2 - y.z_n, a = std::abs(w), b = p.b;
  const double soft = b / (b + 1.0);
  switch (classify(p, y1, w).tag) {
    case RegionTag::YTilde:
      // r vanishes here; same arithmetic as the condensed energy so the two agree bit for bit
      return 0.5 * (y1 * y1 + w * w) - a * a / (2.0 * (b + 1.0));
    case RegionTag::Y1:
      return 0.5 * (y1 * y1 + w * w);
    case RegionTag::Y2: {
      double d = a - r0_eval(p, y1);
      return 0.5 * (y1 * y1 + w * w) - d * d / (2.0 * (b + 1.0));
    }
    case RegionTag::Y3: {
      double r0 = r0_eval(p, y1);
      double d = a - r0;
      double e = a - p.y2_star() + r0 / b;
      return 0.5 * (y1 * y1 + w * w) - d * d / (2.0 * (b + 1.0)) - 0.5 * soft * e * e;
    }
    case RegionTag::Y4:
      return 0.5 * y1 * y1 + 0.5 * soft * w * w + 0.5 * (y1 - p.y_min) * (p.y_max - y1);
  }
  return 0.0;
}

Vec2 relaxed_gradient(const EnvelopeParams& p, const EnergyPoint& y) {
  const double y1 = y.y1, w = y.y2 - y.z_n, b = p.b;
  if (y1 == p.y_min || y1 == p.y_max) {
    std::ostringstream os;
    os << "envelope is not differentiable on y1 = " << y1 << " (support endpoint)";
    throw NondifferentiablePoint(os.str());
  }
  const double soft = b / (b + 1.0);
  switch (classify(p, y1, w).tag) {
    case RegionTag::YTilde:
      return {y1, soft * w};
    case RegionTag::Y1:
      return {y1, w};
    case RegionTag::Y2: {
      double r0 = r0_eval(p, y1);
      double d = std::abs(w) - r0;
      return {y1 + sgn(p.y_mid() - y1) * std::sqrt(b) / (b + 1.0) * d, soft * w + sgn(w) * r0 / (b + 1.0)};
    }
    case RegionTag::Y3:
      return {p.y_mid(), sgn(w) * p.apex_height()};
    case RegionTag::Y4:
      return {p.y_mid(), soft * w};
  }
  return {0.0, 0.0};
}

Vec2 construction_curve(const EnvelopeParams& p, Curve which, double s) {
  const double sb = std::sqrt(p.b);
  const double steep = (p.b + 1.0) / sb;
  bool unbounded = which >= Curve::AlphaInfPlus;
  if (unbounded ? !(s > p.y2_star()) : !(s > 0.0 && s <= p.s_star())) {
    std::ostringstream os;
    os << "curve parameter s = " << s << " outside its validity range";
    throw OutOfRange(os.str());
  }
  switch (which) {
    case Curve::AlphaMinPlus: return {p.y_min + s, sb * s};
    case Curve::AlphaMinMinus: return {p.y_min + s, -sb * s};
    case Curve::BetaMinPlus: return {p.y_min, steep * s};
    case Curve::BetaMinMinus: return {p.y_min, -steep * s};
    case Curve::AlphaMaxPlus: return {p.y_max - s, sb * s};
    case Curve::AlphaMaxMinus: return {p.y_max - s, -sb * s};
    case Curve::BetaMaxPlus: return {p.y_max, steep * s};
    case Curve::BetaMaxMinus: return {p.y_max, -steep * s};
    case Curve::AlphaInfPlus: return {p.y_min, s};
    case Curve::AlphaInfMinus: return {p.y_min, -s};
    case Curve::BetaInfPlus: return {p.y_max, s};
    case Curve::BetaInfMinus: return {p.y_max, -s};
  }
  return {0.0, 0.0};
}

Vec2 touching_point(const EnvelopeParams& p, Corner c, int sign) {
  double s = sign < 0 ? -1.0 : 1.0;
  switch (c) {
    case Corner::Apex: return {p.y_mid(), s * p.apex_height()};
    case Corner::AtMin: return {p.y_min, s * p.y2_star()};
    case Corner::AtMax: return {p.y_max, s * p.y2_star()};
  }
  return {0.0, 0.0};
}

RelaxedEnvelope::RelaxedEnvelope(EnvelopeParams p, DissipationFunction r) : p_(p), r_(std::move(r)) {
  if (r_.lo() != p_.y_min || r_.hi() != p_.y_max)
    throw ConfigError("dissipation support must match [y_min, y_max]");
  if (!r_.concave_on_support()) throw ConfigError("dissipation function is not concave on its support");
  if (!small_b_condition(p_, r_))
    throw ConfigError("small-b condition fails: sqrt(b)*s_star exceeds r(y_mid), closed-form envelope not valid");
}

}  // namespace pdrelax
