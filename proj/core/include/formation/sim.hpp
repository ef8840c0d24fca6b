#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "formation/assign.hpp"
#include "formation/motion.hpp"

namespace formation {

struct SimConfig {
  double dt = 1e-3;
  double t_max = 30.0;
  int record_every = 10;         // steps per recorded sample
  double convergence_tol = 1e-8;
  int convergence_window = 10;   // consecutive below-tol samples required
};

/// Recorded run. formation_error is the distance from x(t) to the relevant
/// invariant subspace (orthogonal-projection residual). A run converged when
/// `convergence_window` consecutive samples stay below tol; time_to_converge
/// is the first sample of that stretch.
struct Trajectory {
  std::vector<double> times;
  std::vector<CVector> states;
  std::vector<double> formation_error;
  std::optional<CVector> limit_estimate;
  bool converged = false;
  std::optional<double> time_to_converge;
  bool leader_collision = false;  // rigid runs: |x_1 - x_2| fell below 1e-9
};

struct ConvergenceReport {
  bool converged = false;
  Complex c{0.0, 0.0};
  std::optional<Complex> c_prime;
  std::optional<double> theta;
  double final_error = 0.0;
  std::optional<double> time_to_converge;
};

/// Classical fixed-step RK4 on x' = M x. limit_basis columns span the
/// invariant subspace used for the formation error (span{f} for scalable
/// runs, span{1, f} for rigid and circular). Throws DivergedError when the
/// state magnitude passes 1e12.
Trajectory simulate_linear(const CMatrix& closed_loop, const CVector& x0, const SimConfig& cfg,
                           const CMatrix& limit_basis);

/// RK4 on the rigid dynamics (linear part plus leader-pair size control).
/// Requires x0_1 != x0_2.
Trajectory simulate_rigid(const RigidController& ctrl, const CVector& x0, const SimConfig& cfg);

/// Limit forecast for scalable runs: x(t) -> (w^T x0) v where w is the row
/// of V^-1 matching the (simple) zero eigenvalue and v its eigenvector.
CVector predict_limit(const EigenSpec& spec, const SynthesisResult& result, const CVector& x0);

/// Least-squares coefficient of the final state on f plus run bookkeeping.
ConvergenceReport summarize_formation(const Trajectory& traj, const CVector& f);

/// Constrained fit of x to the rigid limit set {c 1 + d f e^(j theta)}.
struct RigidFit {
  Complex c{0.0, 0.0};
  double theta = 0.0;
  double residual = 0.0;
  double fitted_size = 0.0;  // |c'| of the unconstrained fit
};
RigidFit fit_rigid_limit(const CVector& x, const CVector& f, double d);

/// Per-sample projection of x(t) - c 1 onto f for circular runs after the
/// transient cutoff t0.
struct CircularDiagnostics {
  Complex c_mean{0.0, 0.0};
  double c_max_deviation = 0.0;
  double mean_modulus = 0.0;           // mean |c'(t)|
  double modulus_drift_per_time = 0.0; // max |d|c'|/dt| between samples
  double phase_rate = 0.0;             // slope of unwrapped arg c'(t)
};
CircularDiagnostics analyze_circular(const Trajectory& traj, const CVector& f, double t0);

/// Default transient cutoff: 5 / |Re lambda_slowest_stable|.
double default_transient_cutoff(const CVector& eigenvalues);

}  // namespace formation
