#pragma once

#include <set>
#include <string>
#include <utility>

#include "formation/types.hpp"

namespace formation {

/// Directed communication graph over agent indices (0-based). An edge
/// (j, i) means agent i reads agent j's state, i.e. |F_ij| > tau. File
/// formats (DOT, JSON) print 1-based labels.
struct CommGraph {
  Index n = 0;
  double tau = 0.0;
  std::set<std::pair<Index, Index>> edges;  // (from, to)

  bool has_edge(Index from, Index to) const {
    return edges.count({from, to}) > 0;
  }
};

/// Graph of a square gain matrix: edge (j,i) iff |F_ij| > tau_rel * max(1, ||F||_max).
CommGraph extract_graph(const CMatrix& F, double tau_rel = 1e-9);

/// True iff some node reaches every other along edge direction.
bool has_spanning_tree(const CommGraph& g);

/// Nodes that reach all others.
std::set<Index> roots(const CommGraph& g);

/// True iff after removing any node u, every remaining node is reachable
/// from {r1, r2} minus u.
bool is_2_rooted(const CommGraph& g, Index r1, Index r2);

/// Graphviz DOT rendering; node labels are 1-based agent indices and the
/// extraction threshold is recorded as a graph attribute.
std::string to_dot(const CommGraph& g);

}  // namespace formation
