#pragma once

#include <cstdint>
#include <vector>

#include "formation/assign.hpp"

namespace formation {

/// Disjoint ordered agent groups covering [0, n); the first index of each
/// group is its leader.
struct Partition {
  std::vector<std::vector<Index>> groups;

  Index group_count() const { return static_cast<Index>(groups.size()); }
  Index total() const;
  std::vector<Index> leaders() const;
};

/// Roughly sqrt(n) groups with sizes differing by at most one, agents
/// assigned in index order.
Partition balanced_partition(Index n);

enum class GroupTopology { Star, Line };

/// Combined gain F = F_low + F_high: per-group single-root syntheses plus a
/// leader-level synthesis scattered onto leader positions.
struct HierResult {
  CMatrix F;
  CMatrix F_low;
  CMatrix F_high;
  std::vector<SynthesisResult> group_results;
  SynthesisResult leader_result;
  Partition partition;
};

/// Two-level synthesis for DiagonalBoth systems: each group gets a
/// single-root topology (star or line) with local configuration g_k, the
/// leaders form a star with configuration g_0, and the combined closed loop
/// has a simple zero eigenvalue with eigenvector f.
HierResult hierarchical_synthesize(const MultiAgentSystem& sys, const CVector& f,
                                   const Partition& partition, GroupTopology group_topology);

struct BenchRow {
  Index n = 0;
  double centralized_ms = 0.0;
  double hierarchical_ms = 0.0;
  double ratio = 0.0;  // centralized / hierarchical
  std::uint64_t centralized_checksum = 0;
  std::uint64_t hierarchical_checksum = 0;
};

struct BenchTable {
  std::vector<BenchRow> rows;
};

/// Wall-clock medians of centralized vs hierarchical synthesis on random
/// stabilizable DiagonalBoth systems (deterministic for a fixed seed;
/// timings vary, gains do not).
BenchTable bench_compare(const std::vector<Index>& sizes, int trials, std::uint64_t seed);

/// FNV-1a hash of a gain matrix's raw doubles (used by bench determinism
/// checks).
std::uint64_t gain_checksum(const CMatrix& F);

}  // namespace formation
