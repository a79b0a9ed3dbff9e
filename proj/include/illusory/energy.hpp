#pragma once

// Discrete phase-transition energy and its convex surrogate.
//
// Gradients live on cell faces (forward differences between neighbouring
// cells) and face weights are the arithmetic mean of the two adjacent G
// values. Cell terms use the midpoint rule. The elliptic operator in
// elliptic.hpp is the exact first variation of these sums, so the surrogate's
// minimiser is the solution of the linear system, not an approximation of it.

#include <cmath>
#include <string>
#include <utility>

#include "illusory/canyon.hpp"
#include "illusory/error.hpp"
#include "illusory/grid.hpp"

namespace illusory {

template <typename Scalar = double>
using PhaseField = GridField<Scalar>;

template <typename Scalar = double>
class ModelParams {
 public:
  ModelParams(CanyonField<Scalar> canyon, const ConfigurationMask& mask, Scalar epsilon,
              Scalar lambda)
      : canyon_(std::move(canyon)),
        mask_(mask),
        chi_(mask.template indicator<Scalar>()),
        epsilon_(epsilon),
        lambda_(lambda) {
    require_same_geometry(canyon_.geometry(), mask.geometry());
    const Scalar h = static_cast<Scalar>(mask.geometry().h());
    if (!(epsilon >= h * (Scalar(1) - Scalar(1e-12)) && epsilon <= Scalar(0.25))) {
      throw Error(ErrorCode::kInvalidArgument,
                  "epsilon must lie in [h, 0.25], got " + std::to_string(epsilon));
    }
    if (!(lambda > Scalar(0))) throw Error(ErrorCode::kInvalidArgument, "lambda must be > 0");
  }

  const GridGeometry& geometry() const { return mask_.geometry(); }
  const CanyonField<Scalar>& canyon() const { return canyon_; }
  const ConfigurationMask& mask() const { return mask_; }
  const GridField<Scalar>& chi() const { return chi_; }
  Scalar epsilon() const { return epsilon_; }
  Scalar lambda() const { return lambda_; }

 private:
  CanyonField<Scalar> canyon_;
  ConfigurationMask mask_;
  GridField<Scalar> chi_;
  Scalar epsilon_;
  Scalar lambda_;
};

/// (1 - z)^2 z^2
template <typename Scalar>
constexpr Scalar double_well(Scalar z) {
  const Scalar a = z * (Scalar(1) - z);
  return a * a;
}

/// 3 z^2 / (1 + 2 z^2): the well centre of the surrogate at the current iterate.
template <typename Scalar>
constexpr Scalar surrogate_target(Scalar zn) {
  return Scalar(3) * zn * zn / (Scalar(1) + Scalar(2) * zn * zn);
}

namespace detail {

template <typename Scalar>
void require_zero_boundary(const GridField<Scalar>& z, const char* what) {
  if (!has_zero_boundary(z)) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must vanish on the boundary");
  }
}

/// Sum over all interior faces of G_face * (a_R - a_L) * (b_R - b_L), where
/// G_face is the mean of the two cells. Fixed visit order: horizontal faces
/// row by row, then vertical faces row by row.
template <typename Scalar>
Scalar face_form(const GridField<Scalar>& a, const GridField<Scalar>& b,
                 const GridField<Scalar>& g) {
  const int w = a.width();
  const int ht = a.height();
  Scalar sum(0);
  for (int y = 0; y < ht; ++y) {
    for (int x = 0; x + 1 < w; ++x) {
      const Scalar gf = Scalar(0.5) * (g(x, y) + g(x + 1, y));
      sum += gf * (a(x + 1, y) - a(x, y)) * (b(x + 1, y) - b(x, y));
    }
  }
  for (int y = 0; y + 1 < ht; ++y) {
    for (int x = 0; x < w; ++x) {
      const Scalar gf = Scalar(0.5) * (g(x, y) + g(x, y + 1));
      sum += gf * (a(x, y + 1) - a(x, y)) * (b(x, y + 1) - b(x, y));
    }
  }
  return sum;
}

}  // namespace detail

/// Sum over faces of (delta z / h)^2 h^2, i.e. the discrete Dirichlet integral
/// with unit weight.
template <typename Scalar>
Scalar dirichlet_sum(const PhaseField<Scalar>& z) {
  const GridField<Scalar> one(z.geometry(), Scalar(1));
  return detail::face_form(z, z, one);
}

/// E_eps[z] = sum_faces (eps/2) G_f (dz/h)^2 h^2
///          + sum_cells [Phi(z) G + lambda chi z^2] / (2 eps) h^2
template <typename Scalar>
Scalar total_energy(const PhaseField<Scalar>& z, const ModelParams<Scalar>& p) {
  require_same_geometry(z.geometry(), p.geometry());
  detail::require_zero_boundary(z, "phase field");
  const Scalar eps = p.epsilon();
  const Scalar h = static_cast<Scalar>(z.h());
  const GridField<Scalar>& g = p.canyon().field();
  const GridField<Scalar>& chi = p.chi();

  const Scalar gradient = Scalar(0.5) * eps * detail::face_form(z, z, g);
  Scalar cells(0);
  const auto n = static_cast<Eigen::Index>(z.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    const Scalar zk = z.data()[k];
    cells += double_well(zk) * g.data()[k] + p.lambda() * chi.data()[k] * zk * zk;
  }
  return gradient + cells * h * h / (Scalar(2) * eps);
}

/// The convex surrogate E_eps[z | z_n].
template <typename Scalar>
Scalar surrogate_energy(const PhaseField<Scalar>& z, const PhaseField<Scalar>& zn,
                        const ModelParams<Scalar>& p) {
  require_same_geometry(z.geometry(), p.geometry());
  require_same_geometry(zn.geometry(), p.geometry());
  detail::require_zero_boundary(z, "phase field");
  const Scalar eps = p.epsilon();
  const Scalar h = static_cast<Scalar>(z.h());
  const GridField<Scalar>& g = p.canyon().field();
  const GridField<Scalar>& chi = p.chi();

  const Scalar gradient = Scalar(0.5) * eps * detail::face_form(z, z, g);
  Scalar cells(0);
  const auto n = static_cast<Eigen::Index>(z.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    const Scalar zk = z.data()[k];
    const Scalar znk = zn.data()[k];
    const Scalar d = zk - surrogate_target(znk);
    cells += (Scalar(1) + Scalar(2) * znk * znk) * d * d * g.data()[k] +
             p.lambda() * chi.data()[k] * zk * zk;
  }
  return gradient + cells * h * h / (Scalar(2) * eps);
}

/// The quadratic part E*[u | z_n] of the surrogate expansion
/// E[z + u | z_n] = E[z | z_n] + E*[u | z_n] + J[z, u | z_n].
template <typename Scalar>
Scalar surrogate_quadratic_form(const PhaseField<Scalar>& u, const PhaseField<Scalar>& zn,
                                const ModelParams<Scalar>& p) {
  require_same_geometry(u.geometry(), p.geometry());
  require_same_geometry(zn.geometry(), p.geometry());
  const Scalar eps = p.epsilon();
  const Scalar h = static_cast<Scalar>(u.h());
  const GridField<Scalar>& g = p.canyon().field();
  const GridField<Scalar>& chi = p.chi();

  const Scalar gradient = Scalar(0.5) * eps * detail::face_form(u, u, g);
  Scalar cells(0);
  const auto n = static_cast<Eigen::Index>(u.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    const Scalar uk = u.data()[k];
    const Scalar znk = zn.data()[k];
    cells += ((Scalar(1) + Scalar(2) * znk * znk) * g.data()[k] + p.lambda() * chi.data()[k]) *
             uk * uk;
  }
  return gradient + cells * h * h / (Scalar(2) * eps);
}

/// Directional derivative J_eps[z, u | z_n] of the surrogate at z along u.
template <typename Scalar>
Scalar first_variation(const PhaseField<Scalar>& z, const PhaseField<Scalar>& u,
                       const PhaseField<Scalar>& zn, const ModelParams<Scalar>& p) {
  require_same_geometry(z.geometry(), p.geometry());
  require_same_geometry(u.geometry(), p.geometry());
  require_same_geometry(zn.geometry(), p.geometry());
  detail::require_zero_boundary(u, "test direction");
  const Scalar eps = p.epsilon();
  const Scalar h = static_cast<Scalar>(z.h());
  const GridField<Scalar>& g = p.canyon().field();
  const GridField<Scalar>& chi = p.chi();

  const Scalar gradient = eps * detail::face_form(z, u, g);
  Scalar cells(0);
  const auto n = static_cast<Eigen::Index>(z.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    const Scalar zk = z.data()[k];
    const Scalar znk = zn.data()[k];
    cells += (g.data()[k] * (Scalar(1) + Scalar(2) * znk * znk) * (zk - surrogate_target(znk)) +
              p.lambda() * chi.data()[k] * zk) *
             u.data()[k];
  }
  return gradient + cells * h * h / eps;
}

/// Energy of the 1-D logistic transition layer z(t) = S(t / eps) on
/// [-half_length, half_length], integrated with the trapezoid rule on
/// `n_points` nodes. Tends to 1/6 as eps -> 0.
template <typename Scalar = double>
Scalar profile_measure_1d(Scalar epsilon, Scalar half_length, int n_points) {
  if (!(epsilon > Scalar(0))) throw Error(ErrorCode::kInvalidArgument, "epsilon must be > 0");
  if (!(half_length >= Scalar(8) * epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "half_length must be at least 8 epsilon");
  }
  if (n_points < 1024) throw Error(ErrorCode::kInvalidArgument, "n_points must be >= 1024");

  const Scalar dt = Scalar(2) * half_length / static_cast<Scalar>(n_points - 1);
  Scalar sum(0);
  for (int i = 0; i < n_points; ++i) {
    const Scalar t = -half_length + dt * static_cast<Scalar>(i);
    const Scalar z = Scalar(1) / (Scalar(1) + std::exp(-t / epsilon));
    const Scalar dz = z * (Scalar(1) - z) / epsilon;
    const Scalar density = Scalar(0.5) * epsilon * dz * dz + double_well(z) / (Scalar(2) * epsilon);
    sum += (i == 0 || i == n_points - 1) ? Scalar(0.5) * density : density;
  }
  return sum * dt;
}

}  // namespace illusory
