#pragma once

// Kernel bound on the independence number of a finite graph and an exact
// branch-and-bound oracle.

#include <iosfwd>
#include <string>
#include <vector>

#include "pentapack/sdp.hpp"

namespace pentapack {

/// Undirected graph without loops on vertices 0..n-1.
class FiniteGraph {
 public:
  FiniteGraph() = default;
  explicit FiniteGraph(int n);

  int size() const { return n_; }
  bool adjacent(int u, int v) const { return adj_[static_cast<std::size_t>(u) * n_ + v]; }
  /// Throws InvalidArgument for loops or out-of-range vertices.
  void add_edge(int u, int v);
  int edge_count() const;

 private:
  int n_ = 0;
  std::vector<bool> adj_;
};

FiniteGraph complete_graph(int m);
FiniteGraph empty_graph(int m);
FiniteGraph cycle_graph(int m);
FiniteGraph complete_bipartite(int a, int b);
FiniteGraph petersen_graph();
FiniteGraph disjoint_union(const FiniteGraph& g, const FiniteGraph& h);

/// "c5", "petersen", "complete:m", "cycle:m", "empty:m", "bipartite:a,b".
FiniteGraph named_graph(const std::string& name);

/// Adjacency list: first line n, then lines "v u1 u2 ..." (0-based); '#'
/// starts a comment. Throws MalformedFile.
FiniteGraph parse_adjacency_list(std::istream& is);
/// DIMACS edge format: "c" comments, "p edge n m", "e u v" (1-based).
FiniteGraph parse_dimacs(std::istream& is);

/// The SDP: minimize B subject to K - J psd, K(x, y) <= 0 for distinct
/// nonadjacent x, y and K(x, x) <= B. The variable block holds K - J; B
/// lives in a 1x1 diagonal block.
SdpProblem theta_prime_problem(const FiniteGraph& g);

/// Optimal B. Throws NumericalFailure unless the solver reports an optimal
/// or near-optimal status.
double theta_prime_bound(const FiniteGraph& g, double tol = 1e-9);

/// Exact independence number; throws InvalidArgument for n > 30.
int brute_force_alpha(const FiniteGraph& g);

}  // namespace pentapack
