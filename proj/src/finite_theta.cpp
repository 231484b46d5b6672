#include "pentapack/finite_theta.hpp"

#include <bit>
#include <cstdint>
#include <istream>
#include <sstream>

#include "pentapack/error.hpp"

namespace pentapack {

FiniteGraph::FiniteGraph(int n) : n_(n), adj_(static_cast<std::size_t>(n) * n, false) {
  if (n < 0) throw InvalidArgument("FiniteGraph: negative vertex count");
}

void FiniteGraph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw InvalidArgument("FiniteGraph: vertex out of range");
  if (u == v) throw InvalidArgument("FiniteGraph: loops are not allowed");
  adj_[static_cast<std::size_t>(u) * n_ + v] = true;
  adj_[static_cast<std::size_t>(v) * n_ + u] = true;
}

int FiniteGraph::edge_count() const {
  int e = 0;
  for (int u = 0; u < n_; ++u)
    for (int v = u + 1; v < n_; ++v) e += adjacent(u, v);
  return e;
}

FiniteGraph complete_graph(int m) {
  FiniteGraph g(m);
  for (int u = 0; u < m; ++u)
    for (int v = u + 1; v < m; ++v) g.add_edge(u, v);
  return g;
}

FiniteGraph empty_graph(int m) { return FiniteGraph(m); }

FiniteGraph cycle_graph(int m) {
  if (m < 3) throw InvalidArgument("cycle_graph: need at least three vertices");
  FiniteGraph g(m);
  for (int u = 0; u < m; ++u) g.add_edge(u, (u + 1) % m);
  return g;
}

FiniteGraph complete_bipartite(int a, int b) {
  FiniteGraph g(a + b);
  for (int u = 0; u < a; ++u)
    for (int v = a; v < a + b; ++v) g.add_edge(u, v);
  return g;
}

FiniteGraph petersen_graph() {
  FiniteGraph g(10);
  for (int i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);
    g.add_edge(i, i + 5);
    g.add_edge(5 + i, 5 + (i + 2) % 5);
  }
  return g;
}

FiniteGraph disjoint_union(const FiniteGraph& g, const FiniteGraph& h) {
  FiniteGraph out(g.size() + h.size());
  for (int u = 0; u < g.size(); ++u)
    for (int v = u + 1; v < g.size(); ++v)
      if (g.adjacent(u, v)) out.add_edge(u, v);
  for (int u = 0; u < h.size(); ++u)
    for (int v = u + 1; v < h.size(); ++v)
      if (h.adjacent(u, v)) out.add_edge(g.size() + u, g.size() + v);
  return out;
}

FiniteGraph named_graph(const std::string& name) {
  if (name == "c5") return cycle_graph(5);
  if (name == "petersen") return petersen_graph();
  const auto colon = name.find(':');
  if (colon == std::string::npos) throw InvalidArgument("unknown graph '" + name + "'");
  const std::string kind = name.substr(0, colon);
  const std::string arg = name.substr(colon + 1);
  try {
    if (kind == "complete") return complete_graph(std::stoi(arg));
    if (kind == "cycle") return cycle_graph(std::stoi(arg));
    if (kind == "empty") return empty_graph(std::stoi(arg));
    if (kind == "bipartite") {
      const auto comma = arg.find(',');
      if (comma == std::string::npos) throw InvalidArgument("bipartite needs a,b");
      return complete_bipartite(std::stoi(arg.substr(0, comma)), std::stoi(arg.substr(comma + 1)));
    }
  } catch (const std::logic_error&) {
    throw InvalidArgument("bad graph size in '" + name + "'");
  }
  throw InvalidArgument("unknown graph '" + name + "'");
}

FiniteGraph parse_adjacency_list(std::istream& is) {
  std::string line;
  int n = -1;
  FiniteGraph g;
  while (std::getline(is, line)) {
    line = line.substr(0, line.find('#'));
    std::istringstream ls(line);
    int first;
    if (!(ls >> first)) continue;
    if (n < 0) {
      if (first < 0) throw MalformedFile("adjacency list: bad vertex count");
      n = first;
      g = FiniteGraph(n);
      continue;
    }
    int v;
    while (ls >> v) {
      if (first < 0 || v < 0 || first >= n || v >= n || first == v) {
        throw MalformedFile("adjacency list: bad edge " + std::to_string(first) + " " + std::to_string(v));
      }
      g.add_edge(first, v);
    }
    if (!ls.eof()) throw MalformedFile("adjacency list: unreadable line '" + line + "'");
  }
  if (n < 0) throw MalformedFile("adjacency list: missing vertex count");
  return g;
}

FiniteGraph parse_dimacs(std::istream& is) {
  std::string line;
  FiniteGraph g;
  bool header = false;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    if (tag == "p") {
      std::string kind;
      int n, m;
      if (header || !(ls >> kind >> n >> m) || n < 0) throw MalformedFile("dimacs: bad problem line");
      g = FiniteGraph(n);
      header = true;
    } else if (tag == "e") {
      int u, v;
      if (!header || !(ls >> u >> v) || u < 1 || v < 1 || u > g.size() || v > g.size() || u == v) {
        throw MalformedFile("dimacs: bad edge line '" + line + "'");
      }
      g.add_edge(u - 1, v - 1);
    } else {
      throw MalformedFile("dimacs: unknown line '" + line + "'");
    }
  }
  if (!header) throw MalformedFile("dimacs: missing problem line");
  return g;
}

SdpProblem theta_prime_problem(const FiniteGraph& g) {
  const int n = g.size();
  if (n < 1) throw InvalidArgument("theta_prime_problem: empty graph");
  SdpProblem p;
  p.blocks = {BlockSpec{"K-J", n, BlockKind::psd}, BlockSpec{"B", 1, BlockKind::diagonal}};
  p.objective = {MatrixEntry{1, 0, 0, 1.0}};
  for (int x = 0; x < n; ++x) {
    // (K - J)(x, x) + 1 - B <= 0
    p.inequalities.push_back(LinearConstraint{{MatrixEntry{0, x, x, 1.0}, MatrixEntry{1, 0, 0, -1.0}}, -1.0,
                                              "diagonal " + std::to_string(x)});
  }
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      if (g.adjacent(x, y)) continue;
      // (K - J)(x, y) + 1 <= 0; the entry counts twice in the trace product
      p.inequalities.push_back(LinearConstraint{{MatrixEntry{0, x, y, 0.5}}, -1.0,
                                                "nonadjacent " + std::to_string(x) + " " + std::to_string(y)});
    }
  }
  return p;
}

double theta_prime_bound(const FiniteGraph& g, double tol) {
  SolverOptions opts;
  opts.gap_tol = tol;
  opts.feas_tol = tol;
  const SdpSolution s = solve(theta_prime_problem(g), opts);
  if (s.status != SolverStatus::optimal && s.status != SolverStatus::near_optimal) {
    throw NumericalFailure("theta_prime_bound: solver status " + to_string(s.status));
  }
  return s.primal_objective;
}

namespace {

int alpha_of(std::uint32_t candidates, const std::vector<std::uint32_t>& nbr, int current, int best) {
  if (candidates == 0) return std::max(best, current);
  if (current + std::popcount(candidates) <= best) return best;
  const int v = std::countr_zero(candidates);
  const std::uint32_t bit = 1u << v;
  best = alpha_of(candidates & ~bit & ~nbr[v], nbr, current + 1, best);
  // v may only be skipped if some neighbour could take its place
  if (candidates & nbr[v]) best = alpha_of(candidates & ~bit, nbr, current, best);
  return best;
}

}  // namespace

int brute_force_alpha(const FiniteGraph& g) {
  const int n = g.size();
  if (n > 30) throw InvalidArgument("brute_force_alpha: more than 30 vertices");
  std::vector<std::uint32_t> nbr(n, 0);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (g.adjacent(u, v)) nbr[u] |= 1u << v;
  const std::uint32_t all = n == 32 ? ~0u : ((1u << n) - 1u);
  return alpha_of(all, nbr, 0, 0);
}

}  // namespace pentapack
