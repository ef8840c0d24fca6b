#include "formation/hierarchy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <random>

#include "formation/topology.hpp"

namespace formation {

Index Partition::total() const {
  Index t = 0;
  for (const auto& g : groups) t += static_cast<Index>(g.size());
  return t;
}

std::vector<Index> Partition::leaders() const {
  std::vector<Index> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back(g.front());
  return out;
}

Partition balanced_partition(Index n) {
  if (n < 1) throw std::invalid_argument("balanced_partition: n must be positive");
  const Index l = std::max<Index>(1, static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n)))));
  const Index base = n / l;
  const Index remainder = n % l;  // first `remainder` groups get one extra agent
  Partition part;
  part.groups.reserve(static_cast<std::size_t>(l));
  Index next = 0;
  for (Index k = 0; k < l; ++k) {
    const Index size = base + (k < remainder ? 1 : 0);
    std::vector<Index> group(static_cast<std::size_t>(size));
    for (Index i = 0; i < size; ++i) group[static_cast<std::size_t>(i)] = next++;
    part.groups.push_back(std::move(group));
  }
  return part;
}

namespace {

void check_partition(const Partition& part, Index n) {
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (const auto& g : part.groups) {
    if (g.empty()) throw std::invalid_argument("hierarchical_synthesize: empty group");
    for (Index idx : g) {
      if (idx < 0 || idx >= n || seen[static_cast<std::size_t>(idx)]) {
        throw std::invalid_argument("hierarchical_synthesize: partition is not a disjoint cover");
      }
      seen[static_cast<std::size_t>(idx)] = true;
    }
  }
  if (part.total() != n) {
    throw std::invalid_argument("hierarchical_synthesize: partition does not cover all agents");
  }
}

/// Stable eigenvalues {-1, ..., -(count)} shifted by `shift` to keep the
/// global closed-loop multiset free of accidental collisions across groups.
/// The structural zero is never shifted.
CVector shifted_ladder(Index count, double shift) {
  CVector lam(count);
  for (Index i = 0; i < count; ++i) {
    lam(i) = Complex(-(static_cast<double>(i) + 1.0) - shift, 0.0);
  }
  return lam;
}

MultiAgentSystem subsystem(const MultiAgentSystem& sys, const std::vector<Index>& idx) {
  RVector a(static_cast<Index>(idx.size()));
  RVector b(static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    a(static_cast<Index>(i)) = sys.A(idx[i], idx[i]);
    b(static_cast<Index>(i)) = sys.B(idx[i], idx[i]);
  }
  return make_diagonal_system(a, b);
}

}  // namespace

HierResult hierarchical_synthesize(const MultiAgentSystem& sys, const CVector& f,
                                   const Partition& partition, GroupTopology group_topology) {
  if (sys.shape != SystemShape::DiagonalBoth) {
    throw std::invalid_argument("hierarchical_synthesize: system must be DiagonalBoth");
  }
  const Index n = sys.n();
  if (f.size() != n) throw std::invalid_argument("hierarchical_synthesize: f length mismatch");
  check_partition(partition, n);
  const Index l = partition.group_count();

  HierResult out;
  out.partition = partition;
  out.F_low = CMatrix::Zero(n, n);
  out.F_high = CMatrix::Zero(n, n);
  out.group_results.reserve(static_cast<std::size_t>(l));

  for (Index k = 0; k < l; ++k) {
    const auto& idx = partition.groups[static_cast<std::size_t>(k)];
    const Index nk = static_cast<Index>(idx.size());
    CVector gk(nk);
    for (Index i = 0; i < nk; ++i) gk(i) = f(idx[static_cast<std::size_t>(i)]);
    if (gk.norm() == 0.0) {
      throw ZeroGroupConfigurationError("hierarchical_synthesize: group " + std::to_string(k + 1) +
                                        " has zero local configuration");
    }
    const MultiAgentSystem sub = subsystem(sys, idx);
    try {
      const double shift = static_cast<double>(k + 1) * 1e-3;
      EigenSpec spec = group_topology == GroupTopology::Star
                           ? star_spec(sub, gk, shifted_ladder(nk - 1, shift))
                           : line_spec(sub, gk);
      SynthesisResult res = synthesize(sub, spec, SpecKind::scalable());
      for (Index r = 0; r < nk; ++r) {
        for (Index c = 0; c < nk; ++c) {
          out.F_low(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]) =
              res.F(r, c);
        }
      }
      // The group gain zeroes its leader's drift (a + b F_k(1,1) = 0), and
      // the leader-level gain zeroes it again; keep that cancellation at the
      // leader level only, so the permuted closed loop's top-left block is
      // exactly A_0 + B_0 F_0.
      const Index lead = idx.front();
      out.F_low(lead, lead) += sys.A(lead, lead) / sys.B(lead, lead);
      out.group_results.push_back(std::move(res));
    } catch (const Error& e) {
      throw GroupSynthesisError(k, "group " + std::to_string(k + 1) + ": " + e.what());
    }
  }

  // Leader level: star over the group leaders, stable part offset by -0.5
  // to stay clear of the group ladders.
  const auto leaders = partition.leaders();
  CVector g0(l);
  for (Index k = 0; k < l; ++k) g0(k) = f(leaders[static_cast<std::size_t>(k)]);
  if (g0.norm() == 0.0) {
    throw ZeroGroupConfigurationError("hierarchical_synthesize: leader configuration g_0 is zero");
  }
  const MultiAgentSystem leader_sys = subsystem(sys, leaders);
  try {
    EigenSpec spec = star_spec(leader_sys, g0, shifted_ladder(l - 1, 0.5));
    out.leader_result = synthesize(leader_sys, spec, SpecKind::scalable());
  } catch (const Error& e) {
    throw GroupSynthesisError(-1, std::string("leader level: ") + e.what());
  }
  for (Index r = 0; r < l; ++r) {
    for (Index c = 0; c < l; ++c) {
      out.F_high(leaders[static_cast<std::size_t>(r)], leaders[static_cast<std::size_t>(c)]) =
          out.leader_result.F(r, c);
    }
  }

  out.F = out.F_low + out.F_high;
  return out;
}

std::uint64_t gain_checksum(const CMatrix& F) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  auto mix = [&h](double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof(bits));
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffull;
      h *= 1099511628211ull;
    }
  };
  for (Index j = 0; j < F.cols(); ++j) {
    for (Index i = 0; i < F.rows(); ++i) {
      mix(F(i, j).real());
      mix(F(i, j).imag());
    }
  }
  return h;
}

BenchTable bench_compare(const std::vector<Index>& sizes, int trials, std::uint64_t seed) {
  if (!std::is_sorted(sizes.begin(), sizes.end())) {
    throw std::invalid_argument("bench_compare: sizes must be ascending");
  }
  if (trials < 1) throw std::invalid_argument("bench_compare: trials must be positive");

  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  };

  BenchTable table;
  for (Index n : sizes) {
    RVector a(n), b(n);
    CVector f(n);
    for (Index i = 0; i < n; ++i) {
      a(i) = uniform(-2.0, 2.0);
      const double mag = uniform(0.5, 2.0);
      b(i) = uniform(0.0, 1.0) < 0.5 ? -mag : mag;
      f(i) = std::polar(1.0, uniform(0.0, 2.0 * 3.141592653589793));
    }
    const MultiAgentSystem sys = make_diagonal_system(a, b);

    // Slightly perturbed ladder keeps the centralized eigenvalues distinct.
    CVector lambdas(n - 1);
    for (Index i = 0; i < n - 1; ++i) {
      lambdas(i) = Complex(-1.0 - static_cast<double>(i) * 1e-3, 0.0);
    }
    const EigenSpec central_spec = star_spec(sys, f, lambdas);
    const Partition part = balanced_partition(n);

    std::vector<double> central_times, hier_times;
    std::uint64_t central_sum = 0, hier_sum = 0;
    for (int t = 0; t < trials; ++t) {
      const auto t0 = std::chrono::steady_clock::now();
      SynthesisResult central = assign_distinct(sys, central_spec);
      const auto t1 = std::chrono::steady_clock::now();
      HierResult hier = hierarchical_synthesize(sys, f, part, GroupTopology::Star);
      const auto t2 = std::chrono::steady_clock::now();
      central_times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
      hier_times.push_back(std::chrono::duration<double, std::milli>(t2 - t1).count());
      central_sum = gain_checksum(central.F);
      hier_sum = gain_checksum(hier.F);
    }
    std::sort(central_times.begin(), central_times.end());
    std::sort(hier_times.begin(), hier_times.end());
    BenchRow row;
    row.n = n;
    row.centralized_ms = central_times[central_times.size() / 2];
    row.hierarchical_ms = hier_times[hier_times.size() / 2];
    row.ratio = row.hierarchical_ms > 0.0 ? row.centralized_ms / row.hierarchical_ms : 0.0;
    row.centralized_checksum = central_sum;
    row.hierarchical_checksum = hier_sum;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace formation
