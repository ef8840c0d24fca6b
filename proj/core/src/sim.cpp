#include "formation/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/QR>

namespace formation {

namespace {

constexpr double kDivergeLimit = 1e12;

/// Orthonormal column basis via Householder QR.
CMatrix orthonormalize(const CMatrix& basis) {
  Eigen::HouseholderQR<CMatrix> qr(basis);
  CMatrix q = qr.householderQ() * CMatrix::Identity(basis.rows(), basis.cols());
  return q;
}

struct Recorder {
  const SimConfig& cfg;
  const CMatrix& q;  // orthonormal limit basis
  Trajectory& traj;
  int below = 0;

  void operator()(double t, const CVector& x) {
    const CVector proj = q * (q.adjoint() * x);
    const double err = (x - proj).norm();
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.formation_error.push_back(err);
    if (err < cfg.convergence_tol) {
      ++below;
      if (below >= cfg.convergence_window && !traj.converged) {
        traj.converged = true;
        traj.time_to_converge =
            traj.times[traj.times.size() - static_cast<std::size_t>(cfg.convergence_window)];
      }
    } else {
      below = 0;
    }
  }
};

void check_config(const SimConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("sim: dt must be positive");
  if (!(cfg.t_max >= cfg.dt)) throw std::invalid_argument("sim: t_max must be at least dt");
  if (cfg.record_every < 1) throw std::invalid_argument("sim: record_every must be positive");
  if (!(cfg.convergence_tol > 0.0)) throw std::invalid_argument("sim: tol must be positive");
  if (cfg.convergence_window < 1) throw std::invalid_argument("sim: window must be positive");
}

template <typename Rhs>
Trajectory run_rk4(const Rhs& rhs, const CVector& x0, const SimConfig& cfg,
                   const CMatrix& limit_basis,
                   const std::function<void(double, const CVector&)>& watch) {
  check_config(cfg);
  const CMatrix q = orthonormalize(limit_basis);

  Trajectory traj;
  Recorder record{cfg, q, traj};

  const auto steps = static_cast<long long>(std::llround(cfg.t_max / cfg.dt));
  CVector x = x0;
  record(0.0, x);
  for (long long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    const CVector k1 = rhs(x, t);
    const CVector k2 = rhs(CVector(x + 0.5 * cfg.dt * k1), t + 0.5 * cfg.dt);
    const CVector k3 = rhs(CVector(x + 0.5 * cfg.dt * k2), t + 0.5 * cfg.dt);
    const CVector k4 = rhs(CVector(x + cfg.dt * k3), t + cfg.dt);
    x += (cfg.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double tn = static_cast<double>(k + 1) * cfg.dt;
    const double norm = max_abs(x);
    if (!(norm < kDivergeLimit)) {
      std::ostringstream os;
      os << "simulation diverged at t = " << tn << " (|x| = " << norm << ")";
      throw DivergedError(tn, norm, os.str());
    }
    if (watch) watch(tn, x);
    if ((k + 1) % cfg.record_every == 0 || k + 1 == steps) {
      record(tn, x);
    }
  }
  // A run only counts as converged if it also ends below tolerance.
  if (traj.converged && traj.formation_error.back() >= cfg.convergence_tol) {
    traj.converged = false;
    traj.time_to_converge.reset();
  }
  if (traj.converged) traj.limit_estimate = traj.states.back();
  return traj;
}

}  // namespace

Trajectory simulate_linear(const CMatrix& closed_loop, const CVector& x0, const SimConfig& cfg,
                           const CMatrix& limit_basis) {
  if (closed_loop.rows() != closed_loop.cols() || closed_loop.rows() != x0.size()) {
    throw std::invalid_argument("simulate_linear: dimension mismatch");
  }
  if (limit_basis.rows() != x0.size() || limit_basis.cols() < 1) {
    throw std::invalid_argument("simulate_linear: bad limit basis");
  }
  auto rhs = [&closed_loop](const CVector& x, double) -> CVector { return closed_loop * x; };
  return run_rk4(rhs, x0, cfg, limit_basis, nullptr);
}

Trajectory simulate_rigid(const RigidController& ctrl, const CVector& x0, const SimConfig& cfg) {
  const Index n = ctrl.closed_loop.rows();
  if (x0.size() != n) throw std::invalid_argument("simulate_rigid: dimension mismatch");
  const auto [p, q] = ctrl.leader_pair;
  if (x0(p) == x0(q)) {
    throw std::invalid_argument("simulate_rigid: leaders must start apart (x_1(0) != x_2(0))");
  }

  CMatrix basis(n, 2);
  basis.col(0) = ones(n);
  basis.col(1) = ctrl.f;

  bool collided = false;
  auto watch = [&](double, const CVector& x) {
    if (std::abs(x(p) - x(q)) < 1e-9) collided = true;
  };
  auto rhs = [&ctrl](const CVector& x, double t) -> CVector { return rigid_rhs(ctrl, x, t); };
  Trajectory traj = run_rk4(rhs, x0, cfg, basis, watch);
  traj.leader_collision = collided;
  return traj;
}

CVector predict_limit(const EigenSpec& spec, const SynthesisResult& result, const CVector& x0) {
  const Index n = spec.dimension();
  if (x0.size() != n) throw std::invalid_argument("predict_limit: x0 length mismatch");

  double scale = 1.0;
  for (const auto& blk : spec.blocks) scale = std::max(scale, 1.0 + std::abs(blk.eigenvalue));
  Index zero_col = -1;
  Index col = 0;
  Index zero_count = 0;
  for (const auto& blk : spec.blocks) {
    if (std::abs(blk.eigenvalue) <= kEigenvalueDistinctTol * scale) {
      zero_count += blk.length();
      zero_col = col;
      if (blk.length() != 1) {
        throw NotSimpleZeroError("predict_limit: zero eigenvalue carries a generalized chain");
      }
    }
    col += blk.length();
  }
  if (zero_count != 1) {
    throw NotSimpleZeroError("predict_limit: spec needs exactly one simple zero eigenvalue");
  }

  const CMatrix V = spec.stacked_vectors();
  const CVector v = V.col(zero_col);
  // Sanity: the synthesized closed loop must actually fix v.
  const double fix = (result.closed_loop * v).norm();
  if (fix > 1e-6 * std::max(1.0, max_abs(result.closed_loop)) * v.norm()) {
    throw NotSimpleZeroError("predict_limit: closed loop does not annihilate the zero eigenvector");
  }
  // w^T = e_k^T V^-1  <=>  V^T w = e_k.
  CVector e = CVector::Zero(n);
  e(zero_col) = 1.0;
  const CVector w = numeric::solve(CMatrix(V.transpose()), e);
  const Complex coeff = (w.transpose() * x0)(0);
  return coeff * v;
}

ConvergenceReport summarize_formation(const Trajectory& traj, const CVector& f) {
  ConvergenceReport rep;
  rep.converged = traj.converged;
  rep.final_error = traj.formation_error.empty() ? 0.0 : traj.formation_error.back();
  rep.time_to_converge = traj.time_to_converge;
  if (!traj.states.empty() && f.norm() > 0.0) {
    const CVector& x = traj.states.back();
    rep.c = (f.adjoint() * x)(0) / (f.adjoint() * f)(0).real();
  }
  return rep;
}

RigidFit fit_rigid_limit(const CVector& x, const CVector& f, double d) {
  const Index n = x.size();
  const Complex xm = x.sum() / static_cast<double>(n);
  const Complex fm = f.sum() / static_cast<double>(n);
  const CVector xt = x - xm * ones(n);
  const CVector ft = f - fm * ones(n);
  const Complex inner = (ft.adjoint() * xt)(0);

  RigidFit fit;
  const double ft2 = ft.squaredNorm();
  fit.fitted_size = ft2 > 0.0 ? std::abs(inner) / ft2 : 0.0;
  fit.theta = std::arg(inner);
  const Complex cprime = std::polar(d, fit.theta);
  fit.c = xm - cprime * fm;
  fit.residual = (x - fit.c * ones(n) - cprime * f).norm();
  return fit;
}

CircularDiagnostics analyze_circular(const Trajectory& traj, const CVector& f, double t0) {
  CircularDiagnostics diag;
  const Index n = f.size();
  const CVector one = ones(n);
  // 2x2 normal equations for the [1, f] basis.
  const Complex g11 = (one.adjoint() * one)(0);
  const Complex g12 = (one.adjoint() * f)(0);
  const Complex g22 = (f.adjoint() * f)(0);
  const Complex det = g11 * g22 - g12 * std::conj(g12);
  if (std::abs(det) == 0.0) {
    throw std::invalid_argument("analyze_circular: 1 and f are dependent");
  }

  std::vector<double> ts;
  std::vector<Complex> cs, cps;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    if (traj.times[k] < t0) continue;
    const CVector& x = traj.states[k];
    const Complex b1 = (one.adjoint() * x)(0);
    const Complex b2 = (f.adjoint() * x)(0);
    const Complex c = (g22 * b1 - g12 * b2) / det;
    const Complex cp = (g11 * b2 - std::conj(g12) * b1) / det;
    ts.push_back(traj.times[k]);
    cs.push_back(c);
    cps.push_back(cp);
  }
  if (ts.size() < 3) {
    throw std::invalid_argument("analyze_circular: not enough samples after the transient cutoff");
  }

  Complex csum = 0.0;
  for (const Complex& c : cs) csum += c;
  diag.c_mean = csum / static_cast<double>(cs.size());
  for (const Complex& c : cs) {
    diag.c_max_deviation = std::max(diag.c_max_deviation, std::abs(c - diag.c_mean));
  }

  double msum = 0.0;
  for (const Complex& cp : cps) msum += std::abs(cp);
  diag.mean_modulus = msum / static_cast<double>(cps.size());
  for (std::size_t k = 1; k < cps.size(); ++k) {
    const double dt = ts[k] - ts[k - 1];
    if (dt <= 0.0) continue;
    diag.modulus_drift_per_time =
        std::max(diag.modulus_drift_per_time, std::abs(std::abs(cps[k]) - std::abs(cps[k - 1])) / dt);
  }

  // Unwrapped-phase linear fit for the rotation rate.
  std::vector<double> phase(cps.size());
  phase[0] = std::arg(cps[0]);
  for (std::size_t k = 1; k < cps.size(); ++k) {
    double p = std::arg(cps[k]);
    double prev = phase[k - 1];
    while (p - prev > M_PI) p -= 2.0 * M_PI;
    while (p - prev < -M_PI) p += 2.0 * M_PI;
    phase[k] = p;
  }
  double tmean = 0.0, pmean = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    tmean += ts[k];
    pmean += phase[k];
  }
  tmean /= static_cast<double>(ts.size());
  pmean /= static_cast<double>(ts.size());
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    num += (ts[k] - tmean) * (phase[k] - pmean);
    den += (ts[k] - tmean) * (ts[k] - tmean);
  }
  diag.phase_rate = den > 0.0 ? num / den : 0.0;
  return diag;
}

double default_transient_cutoff(const CVector& eigenvalues) {
  double slowest = 0.0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    const double re = eigenvalues(i).real();
    if (re < -1e-9) {
      slowest = slowest == 0.0 ? -re : std::min(slowest, -re);
    }
  }
  return slowest > 0.0 ? 5.0 / slowest : 0.0;
}

}  // namespace formation
