#include "pentapack/motion.hpp"

#include <cmath>

#include "pentapack/error.hpp"

namespace pentapack {

double wrap_angle(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative number can round up to exactly 2pi
  if (r >= kTwoPi) r = 0.0;
  return r;
}

Mat2 rotation_matrix(double alpha) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  return {{{c, -s}, {s, c}}};
}

Vec2 rotate(double alpha, const Vec2& v) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  return {c * v[0] - s * v[1], s * v[0] + c * v[1]};
}

Motion identity_motion() { return Motion{}; }

Motion compose(const Motion& g, const Motion& h) {
  const Vec2 ay = rotate(g.alpha, h.x);
  return Motion{{g.x[0] + ay[0], g.x[1] + ay[1]}, wrap_angle(g.alpha + h.alpha)};
}

Motion invert(const Motion& g) {
  const Vec2 back = rotate(-g.alpha, g.x);
  return Motion{{-back[0], -back[1]}, wrap_angle(-g.alpha)};
}

Motion from_polar(const MotionPoint& p) {
  if (!(p.rho >= 0.0)) throw InvalidArgument("from_polar: rho must be nonnegative");
  return Motion{{p.rho * std::cos(p.theta), p.rho * std::sin(p.theta)}, wrap_angle(p.alpha)};
}

MotionPoint to_polar(const Motion& g) {
  const double rho = std::hypot(g.x[0], g.x[1]);
  const double theta = rho == 0.0 ? 0.0 : wrap_angle(std::atan2(g.x[1], g.x[0]));
  return MotionPoint{rho, theta, wrap_angle(g.alpha)};
}

}  // namespace pentapack
