#include "pentapack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pentapack/error.hpp"

namespace pentapack {
namespace {

constexpr double kEdgeTol = 1e-12;

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Signed distance of x from the line through a -> b, positive on the left.
double edge_distance(const Vec2& a, const Vec2& b, const Vec2& x) {
  const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
  return cross(a, b, x) / len;
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw InvalidArgument("ConvexPolygon: needs at least three vertices");
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = vertices_[i];
    const Vec2& b = vertices_[(i + 1) % n];
    const Vec2& c = vertices_[(i + 2) % n];
    if (!(cross(a, b, c) > kEdgeTol)) {
      throw InvalidArgument("ConvexPolygon: vertices are not strictly convex and counter-clockwise");
    }
  }
}

double ConvexPolygon::area() const {
  double twice = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = vertices_[i];
    const Vec2& b = vertices_[(i + 1) % n];
    twice += a[0] * b[1] - a[1] * b[0];
  }
  return 0.5 * twice;
}

double ConvexPolygon::interior_depth(const Vec2& x) const {
  double depth = std::numeric_limits<double>::infinity();
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    depth = std::min(depth, edge_distance(vertices_[i], vertices_[(i + 1) % n], x));
  }
  return depth;
}

ConvexPolygon convex_hull(std::vector<Vec2> points) {
  // Gift wrapping. Rounding can place a midpoint of a hull edge a few ulps
  // beyond the true vertex in any fixed coordinate order, so the march
  // starts from the extreme point in a generic direction and always takes
  // the farthest of several collinear candidates.
  constexpr double kLineTol = 1e-12;
  std::vector<Vec2> pts;
  for (const auto& p : points) {
    const bool seen = std::any_of(pts.begin(), pts.end(), [&](const Vec2& q) {
      return std::hypot(p[0] - q[0], p[1] - q[1]) <= kLineTol;
    });
    if (!seen) pts.push_back(p);
  }
  if (pts.size() < 3) throw InvalidArgument("convex_hull: degenerate point set");
  const Vec2 dir{std::cos(0.3141592), std::sin(0.3141592)};
  std::size_t start = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i][0] * dir[0] + pts[i][1] * dir[1] < pts[start][0] * dir[0] + pts[start][1] * dir[1]) start = i;
  }
  std::vector<Vec2> hull;
  std::size_t cur = start;
  do {
    hull.push_back(pts[cur]);
    if (hull.size() > pts.size()) throw NumericalFailure("convex_hull: march did not close");
    std::size_t next = cur == 0 ? 1 : 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == cur || i == next) continue;
      const double len = std::hypot(pts[next][0] - pts[cur][0], pts[next][1] - pts[cur][1]);
      const double side = cross(pts[cur], pts[next], pts[i]) / len;
      const double far_i = std::hypot(pts[i][0] - pts[cur][0], pts[i][1] - pts[cur][1]);
      if (side < -kLineTol || (side <= kLineTol && far_i > len)) next = i;
    }
    cur = next;
  } while (cur != start);
  if (hull.size() < 3) throw InvalidArgument("convex_hull: degenerate point set");
  return ConvexPolygon(std::move(hull));
}

ConvexPolygon pentagon(double scale) {
  if (!(scale > 0.0)) throw InvalidArgument("pentagon: scale must be positive");
  std::vector<Vec2> v;
  v.reserve(5);
  for (int k = 0; k < 5; ++k) {
    const double t = kTwoPi * k / 5.0;
    v.push_back({0.5 * scale * std::cos(t), 0.5 * scale * std::sin(t)});
  }
  return ConvexPolygon(std::move(v));
}

ConvexPolygon minkowski_difference(double alpha, double scale) {
  const ConvexPolygon k = pentagon(scale);
  std::vector<Vec2> diffs;
  diffs.reserve(25);
  for (const auto& y : k.vertices()) {
    for (const auto& z : k.vertices()) {
      const Vec2 az = rotate(alpha, z);
      diffs.push_back({y[0] - az[0], y[1] - az[1]});
    }
  }
  return convex_hull(std::move(diffs));
}

bool contains_interior(const ConvexPolygon& p, const Vec2& x) { return p.interior_depth(x) > kEdgeTol; }

bool copies_disjoint(const Vec2& x, double alpha, double scale) {
  return !contains_interior(minkowski_difference(alpha, scale), x);
}

Vec2 SamplePoint::position() const { return {rho * std::cos(theta), rho * std::sin(theta)}; }

std::vector<double> uniform_values(double lo, double hi, int count) {
  if (count < 2) throw InvalidArgument("uniform_values: need at least two values");
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
  v.back() = hi;
  return v;
}

namespace {

SamplePoint make_point(const Vec2& x, double alpha, SamplePoint::Tag tag) {
  const MotionPoint p = to_polar(Motion{x, alpha});
  // keep alpha in its signed form; the sample lives in [-2pi/10, 2pi/10]
  return SamplePoint{p.rho, p.theta, alpha, tag};
}

// Index of the first of the two adjacent facets whose outward normals are
// closest to the +x direction (ties toward positive normal angle).
std::size_t first_reduced_facet(const ConvexPolygon& poly) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  std::vector<double> angle(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % n];
    // outward normal of a counter-clockwise edge is (dy, -dx)
    angle[i] = std::atan2(-(b[0] - a[0]), b[1] - a[1]);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = std::abs(angle[i]);
    const double e = std::abs(angle[best]);
    if (d < e - 1e-12 || (std::abs(d - e) <= 1e-12 && angle[i] > angle[best])) best = i;
  }
  const std::size_t prev = (best + n - 1) % n;
  const std::size_t next = (best + 1) % n;
  const double dp = std::abs(angle[prev]);
  const double dn = std::abs(angle[next]);
  // the second facet is the closer neighbour
  if (dp < dn - 1e-12 || (std::abs(dp - dn) <= 1e-12 && angle[prev] > angle[next])) return prev;
  return best;
}

}  // namespace

std::vector<SamplePoint> constraint_sample(int alpha_count, int grid_n) {
  if (alpha_count < 2 || grid_n < 2) throw InvalidArgument("constraint_sample: counts must be at least 2");
  const auto alphas = uniform_values(-kTwoPi / 10.0, 0.0, alpha_count);
  const auto coords = uniform_values(-1.0, 1.0, grid_n);
  std::vector<SamplePoint> out;
  for (double alpha : alphas) {
    const ConvexPolygon md = minkowski_difference(alpha, 1.0);
    const auto& v = md.vertices();
    const std::size_t n = v.size();
    const std::size_t f0 = first_reduced_facet(md);
    const std::size_t f1 = (f0 + 1) % n;
    for (double x1 : coords) {
      for (double x2 : coords) {
        const Vec2 x{x1, x2};
        if (std::hypot(x1, x2) > 1.0) continue;
        if (contains_interior(md, x)) continue;
        const bool outer0 = edge_distance(v[f0], v[(f0 + 1) % n], x) <= 0.0;
        const bool outer1 = edge_distance(v[f1], v[(f1 + 1) % n], x) <= 0.0;
        if (!outer0 && !outer1) continue;
        out.push_back(make_point(x, alpha, SamplePoint::Tag::constraint));
      }
    }
  }
  return out;
}

double VerificationGrid::alpha_spacing() const { return (2.0 * kTwoPi / 10.0) / (alpha_count - 1); }

VerificationSampleStream::VerificationSampleStream(VerificationGrid grid) : grid_(grid) {
  if (grid_.alpha_count < 2 || grid_.grid_n < 2) {
    throw InvalidArgument("verification_sample: counts must be at least 2");
  }
  if (!(grid_.scale > 0.0) || grid_.guard < 0.0) throw InvalidArgument("verification_sample: bad scale or guard");
  alphas_ = uniform_values(-kTwoPi / 10.0, kTwoPi / 10.0, grid_.alpha_count);
  coords_ = uniform_values(-1.0, 1.0, grid_.grid_n);
  reset();
}

void VerificationSampleStream::reset() {
  slice_ = 0;
  row_ = 0;
  col_ = 0;
  load_slice();
}

void VerificationSampleStream::load_slice() {
  if (slice_ < grid_.alpha_count) region_ = minkowski_difference(alphas_[slice_], grid_.scale);
}

bool VerificationSampleStream::next(SamplePoint& out) {
  const int n = grid_.grid_n;
  while (slice_ < grid_.alpha_count) {
    while (row_ < n) {
      while (col_ < n) {
        const Vec2 x{coords_[row_], coords_[col_]};
        ++col_;
        if (std::hypot(x[0], x[1]) > 1.0 + grid_.guard) continue;
        const bool keep = grid_.guard > 0.0 ? region_.interior_depth(x) <= grid_.guard
                                            : !contains_interior(region_, x);
        if (!keep) continue;
        out = make_point(x, alphas_[slice_], SamplePoint::Tag::verification);
        return true;
      }
      col_ = 0;
      ++row_;
    }
    row_ = 0;
    ++slice_;
    load_slice();
  }
  return false;
}

bool VerificationSampleStream::next_chunk(std::vector<SamplePoint>& chunk, std::size_t max_points) {
  chunk.clear();
  SamplePoint p;
  while (chunk.size() < max_points && next(p)) chunk.push_back(p);
  return !chunk.empty();
}

VerificationSampleStream verification_sample(int alpha_count, int grid_n, double scale) {
  return VerificationSampleStream(VerificationGrid{alpha_count, grid_n, scale, 0.0});
}

std::uint64_t count_points(VerificationGrid grid) {
  VerificationSampleStream s(grid);
  std::uint64_t n = 0;
  SamplePoint p;
  while (s.next(p)) ++n;
  return n;
}

}  // namespace pentapack
