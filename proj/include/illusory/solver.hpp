#pragma once

// Outer fixed-point iteration: start from the null hypothesis z0 = 1 - chi_Q,
// then repeatedly linearize around z_n and solve for z_{n+1} until the RMS
// update drops below delta.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "illusory/canyon.hpp"
#include "illusory/elliptic.hpp"
#include "illusory/energy.hpp"
#include "illusory/error.hpp"
#include "illusory/grid.hpp"

namespace illusory {

template <typename Scalar = double>
struct SolverConfig {
  ModelParams<Scalar> model;
  CgParams cg{};
  double delta = 1e-6;
  long max_outer = 5000;
  int presmooth_steps = 0;
  long snapshot_every = 0;
};

struct StepStats {
  long cg_iters = 0;
  double cg_residual = 0.0;
  double pre_clamp_min = 0.0;
  double pre_clamp_max = 0.0;
  // Largest distance any cell was moved by the clamp to [0, 1].
  double clamp_magnitude = 0.0;
};

/// One row per outer step n -> n+1.
struct IterationRecord {
  long iter = 0;              // n + 1
  double energy = 0.0;        // E[z_{n+1}]
  double rho = 0.0;           // E[z_n] - E[z_{n+1}]
  double rms_update = 0.0;    // rms(z_{n+1} - z_n)
  long cg_iters = 0;
  double cg_residual = 0.0;
  double decrease_bound = 0.0;  // lower bound on rho from the monotonicity estimate
  double pre_clamp_min = 0.0;
  double pre_clamp_max = 0.0;
};

enum class RunStatus { kConverged, kMaxOuterReached };

inline const char* to_string(RunStatus s) {
  return s == RunStatus::kConverged ? "converged" : "max_outer_reached";
}

struct IterationReport {
  double initial_energy = 0.0;  // E[z_0]
  std::vector<IterationRecord> steps;
  RunStatus status = RunStatus::kMaxOuterReached;

  double final_energy() const { return steps.empty() ? initial_energy : steps.back().energy; }
  double final_rms_update() const { return steps.empty() ? 0.0 : steps.back().rms_update; }

  /// Partial sums of sqrt(rho_n), clipped at zero; reported as a diagnostic of
  /// the tail behaviour only.
  std::vector<double> sqrt_rho_partial_sums() const {
    std::vector<double> out;
    out.reserve(steps.size());
    double acc = 0.0;
    for (const auto& s : steps) {
      acc += std::sqrt(std::max(0.0, s.rho));
      out.push_back(acc);
    }
    return out;
  }
};

template <typename Scalar = double>
struct RunResult {
  PhaseField<Scalar> field;
  IterationReport report;
};

template <typename Scalar = double>
using SnapshotSink = std::function<void(long, const PhaseField<Scalar>&)>;

/// z0 = 1 outside Q, 0 on Q, and 0 on the outer ring.
template <typename Scalar = double>
PhaseField<Scalar> null_hypothesis(const ConfigurationMask& mask) {
  PhaseField<Scalar> z(mask.geometry(), Scalar(1) - mask.template indicator<Scalar>().values());
  zero_boundary(z);
  return z;
}

/// `steps` explicit heat steps of size h^2/4 with homogeneous Dirichlet data.
template <typename Scalar>
PhaseField<Scalar> presmooth(const PhaseField<Scalar>& z0, int steps) {
  if (steps < 0) throw Error(ErrorCode::kInvalidArgument, "presmooth steps must be >= 0");
  PhaseField<Scalar> u = z0;
  if (steps == 0) return u;
  zero_boundary(u);
  const int w = u.width();
  const int ht = u.height();
  PhaseField<Scalar> next(u.geometry());
  for (int s = 0; s < steps; ++s) {
    next.values().block(1, 1, ht - 2, w - 2) =
        Scalar(0.25) * (u.values().block(1, 0, ht - 2, w - 2) + u.values().block(1, 2, ht - 2, w - 2) +
                        u.values().block(0, 1, ht - 2, w - 2) + u.values().block(2, 1, ht - 2, w - 2));
    std::swap(u, next);
  }
  return u;
}

/// Right-hand side of the monotonicity estimate:
/// sum (G / 2 eps) (z_{n+1} - z_n)^2 (2 z_n + 4 m (1 - m)) h^2, m the midpoint.
template <typename Scalar>
Scalar energy_decrease_bound(const PhaseField<Scalar>& zn, const PhaseField<Scalar>& znext,
                             const ModelParams<Scalar>& p) {
  require_same_geometry(zn.geometry(), znext.geometry());
  const Scalar h = static_cast<Scalar>(zn.h());
  const GridField<Scalar>& g = p.canyon().field();
  Scalar sum(0);
  const auto n = static_cast<Eigen::Index>(zn.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    const Scalar a = zn.data()[k];
    const Scalar b = znext.data()[k];
    const Scalar m = Scalar(0.5) * (a + b);
    sum += g.data()[k] * (b - a) * (b - a) * (Scalar(2) * a + Scalar(4) * m * (Scalar(1) - m));
  }
  return sum * h * h / (Scalar(2) * p.epsilon());
}

/// RMS over interior cells of the nonlinear Euler-Lagrange residual
/// -div(eps^2 G grad z) + (G (1 + 2 z^2) + lambda chi) z - 3 G z^2.
template <typename Scalar>
Scalar euler_lagrange_residual(const PhaseField<Scalar>& z, const ModelParams<Scalar>& p) {
  const LinearizedData<Scalar> at_z = linearize(z, p);
  const GridField<Scalar> az = apply_operator(z, at_z, p);
  const int w = z.width();
  const int ht = z.height();
  const GridArray<Scalar> r =
      (az.values() - at_z.f_n.values()).block(1, 1, ht - 2, w - 2).square();
  Scalar total(0);
  for (Eigen::Index k = 0; k < r.size(); ++k) total += r.data()[k];
  return std::sqrt(total / static_cast<Scalar>(r.size()));
}

/// z_{n+1} from z_n: one linear solve followed by a clamp to [0, 1].
template <typename Scalar>
std::pair<PhaseField<Scalar>, StepStats> step(const PhaseField<Scalar>& zn,
                                              const SolverConfig<Scalar>& cfg) {
  const ModelParams<Scalar>& p = cfg.model;
  if (!has_zero_boundary(zn)) {
    throw Error(ErrorCode::kInvalidArgument, "iterate must vanish on the boundary");
  }
  const LinearizedData<Scalar> data = linearize(zn, p);
  CgResult<Scalar> solved = cg_solve(data, p, cfg.cg, zn);

  StepStats stats;
  stats.cg_iters = solved.iterations;
  stats.cg_residual = solved.relative_residual;
  PhaseField<Scalar>& z = solved.solution;
  stats.pre_clamp_min = static_cast<double>(z.values().minCoeff());
  stats.pre_clamp_max = static_cast<double>(z.values().maxCoeff());
  stats.clamp_magnitude = std::max({0.0, -stats.pre_clamp_min, stats.pre_clamp_max - 1.0});
  const double limit = 10.0 * cfg.cg.rel_tol;
  if (stats.clamp_magnitude > limit) {
    throw Error(ErrorCode::kRangeViolation,
                "inner solution left [0, 1] by " + std::to_string(stats.clamp_magnitude) +
                    " (limit " + std::to_string(limit) + ")");
  }
  z.values() = z.values().max(Scalar(0)).min(Scalar(1));
  return {std::move(z), stats};
}

/// Iterates from an explicit starting field. The starting field has its outer
/// ring forced to zero before the first step.
template <typename Scalar>
RunResult<Scalar> run_from(PhaseField<Scalar> z, const SolverConfig<Scalar>& cfg,
                           const SnapshotSink<Scalar>& sink = {}) {
  const ModelParams<Scalar>& p = cfg.model;
  require_same_geometry(z.geometry(), p.geometry());
  if (!(cfg.delta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "delta must be > 0");
  if (cfg.max_outer <= 0) throw Error(ErrorCode::kInvalidArgument, "max_outer must be > 0");
  zero_boundary(z);

  IterationReport report;
  report.initial_energy = static_cast<double>(total_energy(z, p));
  double energy = report.initial_energy;
  for (long n = 0; n < cfg.max_outer; ++n) {
    auto [next, stats] = step(z, cfg);
    IterationRecord rec;
    rec.iter = n + 1;
    rec.energy = static_cast<double>(total_energy(next, p));
    rec.rho = energy - rec.energy;
    rec.rms_update = static_cast<double>(rms_diff(next, z));
    rec.cg_iters = stats.cg_iters;
    rec.cg_residual = stats.cg_residual;
    rec.decrease_bound = static_cast<double>(energy_decrease_bound(z, next, p));
    rec.pre_clamp_min = stats.pre_clamp_min;
    rec.pre_clamp_max = stats.pre_clamp_max;
    report.steps.push_back(rec);
    energy = rec.energy;
    z = std::move(next);
    if (sink && cfg.snapshot_every > 0 && rec.iter % cfg.snapshot_every == 0) sink(rec.iter, z);
    if (rec.rms_update <= cfg.delta) {
      report.status = RunStatus::kConverged;
      break;
    }
  }
  return {std::move(z), std::move(report)};
}

/// Full pipeline from the null hypothesis (optionally presmoothed).
template <typename Scalar>
RunResult<Scalar> run(const SolverConfig<Scalar>& cfg, const SnapshotSink<Scalar>& sink = {}) {
  PhaseField<Scalar> z0 = null_hypothesis<Scalar>(cfg.model.mask());
  return run_from(presmooth(z0, cfg.presmooth_steps), cfg, sink);
}

}  // namespace illusory
