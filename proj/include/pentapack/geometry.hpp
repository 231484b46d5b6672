#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pentapack/motion.hpp"

namespace pentapack {

/// Strictly convex polygon, vertices in counter-clockwise order.
class ConvexPolygon {
 public:
  ConvexPolygon() = default;
  /// Validates strict convexity and orientation; throws InvalidArgument.
  explicit ConvexPolygon(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  double area() const;

  /// Minimum signed distance from x to the edge lines; positive inside.
  double interior_depth(const Vec2& x) const;

 private:
  std::vector<Vec2> vertices_;
};

/// Convex hull (counter-clockwise, collinear points dropped).
ConvexPolygon convex_hull(std::vector<Vec2> points);

/// Regular pentagon with vertices scale * (1/2)(cos(2 pi k/5), sin(2 pi k/5)).
ConvexPolygon pentagon(double scale = 1.0);

/// scale * (K - A(alpha) K) for the regular pentagon K.
ConvexPolygon minkowski_difference(double alpha, double scale = 1.0);

/// True iff x is strictly inside p (edge tests with tolerance 1e-12).
bool contains_interior(const ConvexPolygon& p, const Vec2& x);

/// True iff the interiors of scale*K and x + A(alpha) scale*K are disjoint.
bool copies_disjoint(const Vec2& x, double alpha, double scale = 1.0);

struct SamplePoint {
  enum class Tag : std::uint8_t { constraint, verification };
  double rho = 0.0;
  double theta = 0.0;
  double alpha = 0.0;
  Tag tag = Tag::constraint;

  MotionPoint motion_point() const { return {rho, theta, alpha}; }
  Vec2 position() const;
};

/// Uniformly spaced values in [lo, hi], endpoints included.
std::vector<double> uniform_values(double lo, double hi, int count);

/// Constraint sample for the sampled nonpositivity rows: alpha_count angles
/// in [-2pi/10, 0], a grid_n x grid_n grid on [-1, 1]^2, points with rho <= 1
/// outside the open Minkowski difference, restricted to the outer side of
/// two adjacent facets (the pentagon's rotational symmetry covers the rest).
std::vector<SamplePoint> constraint_sample(int alpha_count, int grid_n);

/// Parameters of the verification grid: alpha_count angles in
/// [-2pi/10, 2pi/10] and a grid_n x grid_n grid on [-1, 1]^2.
struct VerificationGrid {
  int alpha_count = 0;
  int grid_n = 0;
  double scale = 1.0;
  /// Points whose distance to the region is at most `guard` are kept as well,
  /// so every point of the region has a grid point within one cell.
  double guard = 0.0;

  double x_spacing() const { return 2.0 / (grid_n - 1); }
  double alpha_spacing() const;
};

/// Deterministic stream over the verification sample. The set is never
/// materialized.
class VerificationSampleStream {
 public:
  explicit VerificationSampleStream(VerificationGrid grid);

  /// Writes the next point and returns true, or returns false at the end.
  bool next(SamplePoint& out);
  /// Fills up to `max_points` points into `chunk`; returns false when empty.
  bool next_chunk(std::vector<SamplePoint>& chunk, std::size_t max_points);
  void reset();

 private:
  void load_slice();

  VerificationGrid grid_;
  std::vector<double> alphas_;
  std::vector<double> coords_;
  int slice_ = 0;
  int row_ = 0;
  int col_ = 0;
  ConvexPolygon region_;
};

VerificationSampleStream verification_sample(int alpha_count, int grid_n, double scale);

/// Total number of points a stream would produce.
std::uint64_t count_points(VerificationGrid grid);

}  // namespace pentapack
