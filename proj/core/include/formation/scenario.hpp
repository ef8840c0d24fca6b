#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "formation/hierarchy.hpp"
#include "formation/model.hpp"
#include "formation/sim.hpp"
#include "formation/topology.hpp"

namespace formation {

/// Spec-generator directive from a scenario file ("star", "cyclic", "line",
/// "rigid", "circular"). Indices and sizes are already 0-based/validated.
struct GeneratorDirective {
  std::string kind;
  CVector lambdas;  // star: n-1 entries; rigid/circular: n-2
  std::optional<std::vector<Index>> completion;  // circular only
};

/// Parsed scenario file. Complex numbers in the file are [re, im] pairs;
/// agent and constraint indices in the file are 1-based.
struct Scenario {
  MultiAgentSystem system;
  std::optional<EigenSpec> explicit_spec;
  std::optional<GeneratorDirective> generator;
  SpecKind kind = SpecKind::scalable();
  CVector formation;
  std::vector<std::pair<Index, Index>> constraints;
  std::optional<CVector> x0;
  std::optional<std::uint64_t> seed;
  SimConfig sim;
  std::optional<Partition> partition;  // hierarchical runs
  GroupTopology group_topology = GroupTopology::Star;
};

/// Parses a scenario JSON file. Throws ScenarioError with line/column for
/// malformed JSON and with a field path for semantic problems.
Scenario load_scenario(const std::string& path);

/// Resolves the requested eigenstructure (explicit spec or generator).
EigenSpec scenario_spec(const Scenario& scenario);

/// The initial state: explicit x0, or a deterministic draw from the seed
/// (components uniform in [-2, 2]^2). Throws ScenarioError when neither is
/// present.
CVector scenario_x0(const Scenario& scenario);

// -- artifact writers ---------------------------------------------------------

void write_cmatrix_json(const std::string& path, const CMatrix& m);
CMatrix read_cmatrix_json(const std::string& path);

void write_eig_report_json(const std::string& path, const numeric::EigReport& report);

void write_report_json(const std::string& path, const ConvergenceReport& report,
                       const std::vector<std::pair<std::string, double>>& extras = {});

/// CSV columns: t, x1_re, x1_im, ..., xn_re, xn_im, err (17 significant digits).
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Plain 800x800 complex-plane plot: per-agent path polylines, 'x' markers
/// at initial positions, circles at final positions. The axis transform is
/// recorded as a comment.
void write_trajectory_svg(const std::string& path, const Trajectory& traj);

/// CSV columns: n, centralized_ms, hierarchical_ms, ratio.
void write_bench_csv(const std::string& path, const BenchTable& table);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace formation
