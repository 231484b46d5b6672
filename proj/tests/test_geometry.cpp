#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "pentapack/error.hpp"
#include "pentapack/geometry.hpp"

using namespace pentapack;

namespace {

// Brute-force hull vertices of the 25 differences: a difference is a hull
// vertex iff some direction makes it the unique maximizer. Sampled over a
// fine set of directions.
std::vector<Vec2> brute_force_vertices(double alpha) {
  std::vector<Vec2> diffs;
  for (const auto& y : oracle::pentagon_vertices(1.0, 0.0))
    for (const auto& z : oracle::pentagon_vertices(1.0, alpha)) diffs.push_back({y[0] - z[0], y[1] - z[1]});
  std::vector<Vec2> out;
  for (int i = 0; i < 20000; ++i) {
    const double t = kTwoPi * (i + 0.5) / 20000;
    std::size_t best = 0;
    for (std::size_t j = 1; j < diffs.size(); ++j)
      if (diffs[j][0] * std::cos(t) + diffs[j][1] * std::sin(t) > diffs[best][0] * std::cos(t) + diffs[best][1] * std::sin(t))
        best = j;
    bool seen = false;
    for (const auto& v : out) seen = seen || std::hypot(v[0] - diffs[best][0], v[1] - diffs[best][1]) < 1e-9;
    if (!seen) out.push_back(diffs[best]);
  }
  return out;
}

bool same_vertex_set(const std::vector<Vec2>& a, const std::vector<Vec2>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& u : a) {
    bool found = false;
    for (const auto& v : b) found = found || std::hypot(u[0] - v[0], u[1] - v[1]) <= tol;
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("pentagon") {
    const ConvexPolygon k = pentagon(1.0);
    REQUIRE(k.size() == 5);
    CHECK(k.vertices()[0][0] == 0.5);
    CHECK(k.vertices()[0][1] == 0.0);
    CHECK(k.area() == doctest::Approx(0.625 * std::sin(2 * kPi / 5)).epsilon(1e-15));
    CHECK(k.area() == doctest::Approx(0.594410).epsilon(1e-6));
    const ConvexPolygon big = pentagon(1.02);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(big.vertices()[i][0] == doctest::Approx(1.02 * k.vertices()[i][0]).epsilon(1e-15));
      CHECK(big.vertices()[i][1] == doctest::Approx(1.02 * k.vertices()[i][1]).epsilon(1e-15));
    }
    CHECK_THROWS_AS(pentagon(0.0), InvalidArgument);
    CHECK_THROWS_AS(pentagon(-1.0), InvalidArgument);
  }

  TEST_CASE("convex polygon validation") {
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}}), InvalidArgument);
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {0, 1}, {1, 0}}), InvalidArgument);  // clockwise
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}, {2, 0}, {1, 1}}), InvalidArgument);
    const ConvexPolygon hull = convex_hull({{0, 0}, {1, 0}, {2, 0}, {1, 1}, {1, 0.2}, {0, 0}});
    CHECK(hull.size() == 3);
    CHECK(hull.area() == doctest::Approx(1.0));
  }

  TEST_CASE("minkowski difference") {
    const ConvexPolygon md0 = minkowski_difference(0.0, 1.0);
    REQUIRE(md0.size() == 10);
    for (const auto& v : md0.vertices()) {
      bool has_opposite = false;
      for (const auto& w : md0.vertices()) has_opposite = has_opposite || std::hypot(v[0] + w[0], v[1] + w[1]) < 1e-12;
      CHECK(has_opposite);
    }
    for (double alpha : {0.0, 0.3, 1.0, -kPi / 5, kPi / 5, 2.0}) {
      const ConvexPolygon md = minkowski_difference(alpha, 1.0);
      CHECK(same_vertex_set(md.vertices(), brute_force_vertices(alpha), 1e-12));
      CHECK(same_vertex_set(md.vertices(), minkowski_difference(alpha + 2 * kPi / 5, 1.0).vertices(), 1e-12));
      CHECK(contains_interior(md, {0.0, 0.0}));
      // Minkowski difference of two convex bodies: area >= 4 area(K) with
      // equality exactly for the centrally symmetric case, i.e. a half turn
      CHECK(md.area() >= 2.0 * 2.0 * pentagon(1.0).area() - 1e-12);
    }
    const ConvexPolygon half_turn = minkowski_difference(kPi / 5, 1.0);
    CHECK(half_turn.size() == 5);
    CHECK(half_turn.area() == doctest::Approx(4.0 * pentagon(1.0).area()).epsilon(1e-12));
    const ConvexPolygon scaled = minkowski_difference(0.4, 1.02);
    CHECK(scaled.area() == doctest::Approx(1.02 * 1.02 * minkowski_difference(0.4, 1.0).area()).epsilon(1e-12));
  }

  TEST_CASE("vertex norms") {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i)
      for (const auto& v : minkowski_difference(oracle::uniform(0, kTwoPi), 1.0).vertices())
        worst = std::max(worst, std::hypot(v[0], v[1]));
    CHECK(worst <= 1.0 + 1e-12);
  }

  TEST_CASE("containment against ray casting") {
    const ConvexPolygon k = pentagon(1.0);
    CHECK(contains_interior(k, {0.0, 0.0}));
    CHECK_FALSE(contains_interior(k, {0.5, 0.0}));
    int mismatches = 0;
    for (int i = 0; i < 10000; ++i) {
      const Vec2 x{oracle::uniform(-0.6, 0.6), oracle::uniform(-0.6, 0.6)};
      if (oracle::boundary_distance(k.vertices(), x) < 1e-10) continue;
      mismatches += contains_interior(k, x) != oracle::ray_cast_inside(k.vertices(), x);
    }
    CHECK(mismatches == 0);
  }

  TEST_CASE("copies_disjoint against separating axes") {
    for (double alpha : {0.0, 0.5, 3.0}) {
      CHECK_FALSE(copies_disjoint({0.0, 0.0}, alpha, 1.0));
      CHECK(copies_disjoint({2.0, 0.0}, alpha, 1.0));
    }
    int mismatches = 0;
    for (int i = 0; i < 10000; ++i) {
      const Vec2 x{oracle::uniform(-1.1, 1.1), oracle::uniform(-1.1, 1.1)};
      const double alpha = oracle::uniform(0, kTwoPi);
      const bool sat = oracle::interiors_disjoint(oracle::pentagon_vertices(1.0, 0.0), oracle::pentagon_vertices(1.0, alpha, x));
      mismatches += sat != copies_disjoint(x, alpha, 1.0);
    }
    CHECK(mismatches == 0);
  }

  TEST_CASE("constraint sample") {
    const auto sample = constraint_sample(5, 50);
    CHECK(sample.size() >= 450);
    CHECK(sample.size() <= 650);
    std::set<double> alphas;
    for (const auto& p : sample) {
      CHECK(p.rho <= 1.0);
      CHECK(copies_disjoint(p.position(), p.alpha, 1.0));
      CHECK(p.alpha >= -kTwoPi / 10 - 1e-15);
      CHECK(p.alpha <= 1e-15);
      alphas.insert(p.alpha);
    }
    CHECK(alphas.size() == 5);
    CHECK(constraint_sample(5, 50).size() == sample.size());

    // doubling the grid halves the spacing of kept points at alpha = 0
    auto min_gap = [](int grid_n) {
      const auto s = constraint_sample(2, grid_n);
      double gap = INFINITY;
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
          if (s[i].alpha == 0.0 && s[j].alpha == 0.0) {
            const Vec2 a = s[i].position(), b = s[j].position();
            gap = std::min(gap, std::hypot(a[0] - b[0], a[1] - b[1]));
          }
      return gap;
    };
    CHECK(min_gap(41) == doctest::Approx(2.0 / 40).epsilon(1e-9));
    CHECK(min_gap(81) == doctest::Approx(2.0 / 80).epsilon(1e-9));
    CHECK_THROWS_AS(constraint_sample(1, 50), InvalidArgument);
  }

  TEST_CASE("verification stream") {
    auto s1 = verification_sample(16, 96, 1.02);
    auto s2 = verification_sample(16, 96, 1.02);
    SamplePoint a, b;
    std::uint64_t n = 0;
    bool identical = true;
    while (s1.next(a)) {
      REQUIRE(s2.next(b));
      identical = identical && a.rho == b.rho && a.theta == b.theta && a.alpha == b.alpha;
      CHECK(copies_disjoint(a.position(), a.alpha, 1.02));
      CHECK(a.rho <= 1.0);
      CHECK(std::abs(a.alpha) <= kTwoPi / 10 + 1e-15);
      ++n;
    }
    CHECK_FALSE(s2.next(b));
    CHECK(identical);
    CHECK(n == count_points({16, 96, 1.02, 0.0}));
    s1.reset();
    std::vector<SamplePoint> chunk;
    std::uint64_t m = 0;
    while (s1.next_chunk(chunk, 1000)) m += chunk.size();
    CHECK(m == n);

    const std::uint64_t desk = count_points({64, 512, 1.0, 0.0});
    CHECK(desk >= 100000);
    CHECK(desk <= 10000000);
  }
}
