#pragma once

#include <array>

namespace pentapack {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

/// Reduces an angle to [0, 2pi).
double wrap_angle(double angle);

/// Counter-clockwise rotation by `alpha`.
Mat2 rotation_matrix(double alpha);

Vec2 rotate(double alpha, const Vec2& v);

/// Element of M(2) in polar form: translation rho*(cos theta, sin theta),
/// rotation A(alpha). theta is canonicalized to 0 when rho == 0.
struct MotionPoint {
  double rho = 0.0;
  double theta = 0.0;
  double alpha = 0.0;
};

/// Element (x, A(alpha)) of M(2). The rotation is kept as an angle in [0, 2pi).
struct Motion {
  Vec2 x{0.0, 0.0};
  double alpha = 0.0;

  Mat2 rotation() const { return rotation_matrix(alpha); }
};

Motion identity_motion();

/// (x, A)(y, B) = (x + Ay, AB).
Motion compose(const Motion& g, const Motion& h);

/// (x, A)^{-1} = (-A^{-1}x, A^{-1}).
Motion invert(const Motion& g);

/// Throws InvalidArgument for negative rho.
Motion from_polar(const MotionPoint& p);

MotionPoint to_polar(const Motion& g);

}  // namespace pentapack
