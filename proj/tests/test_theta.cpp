#include <Eigen/Eigenvalues>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "pentapack/error.hpp"
#include "pentapack/finite_theta.hpp"

using namespace pentapack;

namespace {

FiniteGraph random_graph(int n, double p) {
  FiniteGraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (oracle::uniform(0, 1) < p) g.add_edge(u, v);
  return g;
}

// Independence number by enumerating all vertex subsets.
int subset_alpha(const FiniteGraph& g) {
  const int n = g.size();
  int best = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    bool independent = true;
    for (int u = 0; u < n && independent; ++u)
      for (int v = u + 1; v < n && independent; ++v)
        if ((mask >> u & 1u) && (mask >> v & 1u) && g.adjacent(u, v)) independent = false;
    if (independent) best = std::max(best, __builtin_popcount(mask));
  }
  return best;
}

}  // namespace

TEST_SUITE("theta") {
  TEST_CASE("graph construction") {
    FiniteGraph g(4);
    g.add_edge(0, 1);
    g.add_edge(1, 0);
    CHECK(g.edge_count() == 1);
    CHECK(g.adjacent(1, 0));
    CHECK_THROWS_AS(g.add_edge(2, 2), InvalidArgument);
    CHECK_THROWS_AS(g.add_edge(0, 4), InvalidArgument);
    CHECK(petersen_graph().edge_count() == 15);
    CHECK(named_graph("bipartite:2,3").edge_count() == 6);
    CHECK(named_graph("cycle:7").edge_count() == 7);
    CHECK_THROWS_AS(named_graph("wheel:5"), InvalidArgument);
  }

  TEST_CASE("parsers") {
    std::istringstream adj("# triangle plus a pendant\n4\n0 1 2\n1 2\n2 3\n");
    const FiniteGraph g = parse_adjacency_list(adj);
    CHECK(g.size() == 4);
    CHECK(g.edge_count() == 4);
    std::istringstream dimacs("c comment\np edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n");
    const FiniteGraph c5 = parse_dimacs(dimacs);
    CHECK(c5.edge_count() == 5);
    CHECK(brute_force_alpha(c5) == 2);
    std::istringstream bad("3\n0 7\n");
    CHECK_THROWS_AS(parse_adjacency_list(bad), MalformedFile);
    std::istringstream bad2("p edge 3 1\ne 1\n");
    CHECK_THROWS_AS(parse_dimacs(bad2), MalformedFile);
  }

  TEST_CASE("brute force alpha") {
    CHECK(brute_force_alpha(cycle_graph(5)) == 2);
    CHECK(brute_force_alpha(complete_graph(6)) == 1);
    CHECK(brute_force_alpha(empty_graph(7)) == 7);
    CHECK(brute_force_alpha(petersen_graph()) == 4);
    CHECK(subset_alpha(petersen_graph()) == 4);
    for (int i = 0; i < 30; ++i) {
      const FiniteGraph g = random_graph(oracle::uniform_int(1, 12), oracle::uniform(0.1, 0.8));
      CHECK(brute_force_alpha(g) == subset_alpha(g));
    }
    CHECK_THROWS_AS(brute_force_alpha(empty_graph(31)), InvalidArgument);
  }

  TEST_CASE("small families") {
    CHECK(std::abs(theta_prime_bound(complete_graph(5)) - 1.0) <= 1e-6);
    CHECK(std::abs(theta_prime_bound(empty_graph(4)) - 4.0) <= 1e-6);
    const double c5 = theta_prime_bound(cycle_graph(5));
    // Lovasz: theta(C_n) = n cos(pi/n) / (1 + cos(pi/n)) for odd n
    const double lovasz = 5 * std::cos(kPi / 5) / (1 + std::cos(kPi / 5));
    CHECK(c5 >= 2.0);
    CHECK(c5 <= std::sqrt(5.0) + 1e-6);
    CHECK(std::abs(c5 - lovasz) <= 1e-6);
    CHECK(std::abs(theta_prime_bound(petersen_graph()) - 4.0) <= 1e-6);
    const FiniteGraph k = complete_bipartite(3, 4);
    CHECK(std::abs(theta_prime_bound(disjoint_union(k, k)) - 2 * theta_prime_bound(k)) <= 1e-5);
  }

  TEST_CASE("problem shape") {
    const SdpProblem p = theta_prime_problem(cycle_graph(5));
    CHECK(p.blocks.size() == 2);
    CHECK(p.blocks[0].dim == 5);
    CHECK(p.inequalities.size() == 5 + 5);
  }
}
