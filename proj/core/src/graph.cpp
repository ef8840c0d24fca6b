#include "formation/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace formation {

namespace {

/// Nodes reachable from `sources` (which must not contain `removed`),
/// skipping `removed` entirely; removed < 0 disables skipping.
std::vector<bool> reachable(const CommGraph& g, const std::vector<Index>& sources, Index removed) {
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(g.n));
  for (const auto& [from, to] : g.edges) {
    if (from == removed || to == removed) continue;
    out[static_cast<std::size_t>(from)].push_back(to);
  }
  std::vector<bool> seen(static_cast<std::size_t>(g.n), false);
  std::vector<Index> stack;
  for (Index s : sources) {
    if (s == removed) continue;
    if (!seen[static_cast<std::size_t>(s)]) {
      seen[static_cast<std::size_t>(s)] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    const Index v = stack.back();
    stack.pop_back();
    for (Index w : out[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

CommGraph extract_graph(const CMatrix& F, double tau_rel) {
  if (F.rows() != F.cols()) {
    throw std::invalid_argument("extract_graph: F must be square");
  }
  if (tau_rel < 0.0) {
    throw std::invalid_argument("extract_graph: tau_rel must be nonnegative");
  }
  CommGraph g;
  g.n = F.rows();
  g.tau = tau_rel * std::max(1.0, max_abs(F));
  for (Index i = 0; i < F.rows(); ++i) {
    for (Index j = 0; j < F.cols(); ++j) {
      if (i != j && std::abs(F(i, j)) > g.tau) {
        g.edges.insert({j, i});
      }
    }
  }
  return g;
}

bool has_spanning_tree(const CommGraph& g) {
  return !roots(g).empty();
}

std::set<Index> roots(const CommGraph& g) {
  std::set<Index> out;
  for (Index v = 0; v < g.n; ++v) {
    const auto seen = reachable(g, {v}, -1);
    if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
      out.insert(v);
    }
  }
  return out;
}

bool is_2_rooted(const CommGraph& g, Index r1, Index r2) {
  if (r1 == r2 || r1 < 0 || r2 < 0 || r1 >= g.n || r2 >= g.n) return false;
  for (Index removed = 0; removed < g.n; ++removed) {
    const auto seen = reachable(g, {r1, r2}, removed);
    for (Index v = 0; v < g.n; ++v) {
      if (v != removed && !seen[static_cast<std::size_t>(v)]) return false;
    }
  }
  return true;
}

std::string to_dot(const CommGraph& g) {
  std::string s = "digraph comm {\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "  graph [tau=\"%.17g\"];\n", g.tau);
  s += buf;
  for (Index v = 0; v < g.n; ++v) {
    std::snprintf(buf, sizeof(buf), "  %lld;\n", static_cast<long long>(v + 1));
    s += buf;
  }
  for (const auto& [from, to] : g.edges) {
    std::snprintf(buf, sizeof(buf), "  %lld -> %lld;\n", static_cast<long long>(from + 1),
                  static_cast<long long>(to + 1));
    s += buf;
  }
  s += "}\n";
  return s;
}

}  // namespace formation
