#pragma once

// The linear inner problem solved once per outer iteration:
//
//   -div(eps^2 G grad z) + g_n z = f_n   in the interior,   z = 0 on the ring,
//   g_n = G (1 + 2 z_n^2) + lambda chi_Q,   f_n = 3 G z_n^2.
//
// The discrete operator is the 5-point stencil with arithmetic-mean face
// weights, scaled so that h^2 <A z - f_n, u> = eps * J_eps[z, u | z_n].
// Unknowns are the interior cells; the outer ring holds the Dirichlet zeros.

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "illusory/energy.hpp"
#include "illusory/error.hpp"
#include "illusory/grid.hpp"

namespace illusory {

template <typename Scalar = double>
struct LinearizedData {
  GridField<Scalar> g_n;
  GridField<Scalar> f_n;
  GridField<Scalar> gamma_n;
};

struct CgParams {
  double rel_tol = 1e-10;
  // 0 selects 10 * (width * height) at solve time.
  long max_iters = 0;
};

template <typename Scalar>
LinearizedData<Scalar> linearize(const PhaseField<Scalar>& zn, const ModelParams<Scalar>& p) {
  require_same_geometry(zn.geometry(), p.geometry());
  const auto& G = p.canyon().field().values();
  const auto& chi = p.chi().values();
  const auto z2 = zn.values().square();
  LinearizedData<Scalar> d{
      GridField<Scalar>(zn.geometry(), G * (Scalar(1) + Scalar(2) * z2) + p.lambda() * chi),
      GridField<Scalar>(zn.geometry(), Scalar(3) * G * z2),
      GridField<Scalar>(zn.geometry(), Scalar(3) * z2 / (Scalar(1) + Scalar(2) * z2)),
  };
  return d;
}

/// Matrix-free form of the inner operator. Face coefficients
/// eps^2 G_face / h^2 are stored per face: `east` is (H, W-1), `south` is
/// (H-1, W).
template <typename Scalar = double>
class StencilOperator {
 public:
  using Array = GridArray<Scalar>;

  StencilOperator(const LinearizedData<Scalar>& data, const ModelParams<Scalar>& p)
      : geometry_(p.geometry()) {
    require_same_geometry(data.g_n.geometry(), geometry_);
    const int w = geometry_.width();
    const int ht = geometry_.height();
    const Scalar h = static_cast<Scalar>(geometry_.h());
    const Scalar k = p.epsilon() * p.epsilon() / (h * h);
    const Array& G = p.canyon().field().values();
    east_ = Scalar(0.5) * k * (G.leftCols(w - 1) + G.rightCols(w - 1));
    south_ = Scalar(0.5) * k * (G.topRows(ht - 1) + G.bottomRows(ht - 1));
    diag_ = Array::Zero(ht, w);
    diag_.block(1, 1, ht - 2, w - 2) =
        data.g_n.values().block(1, 1, ht - 2, w - 2) + west_block(east_) + east_block(east_) +
        north_block(south_) + south_block(south_);
  }

  const GridGeometry& geometry() const { return geometry_; }

  /// Diagonal of A on interior cells, zero on the ring.
  const Array& diagonal() const { return diag_; }

  /// out = A z. Entries of z on the ring are read as the Dirichlet data and
  /// must be zero; the ring of `out` is set to zero.
  void apply(const Array& z, Array& out) const {
    const int w = geometry_.width();
    const int ht = geometry_.height();
    out.resize(ht, w);
    out.row(0).setZero();
    out.row(ht - 1).setZero();
    out.col(0).setZero();
    out.col(w - 1).setZero();
    out.block(1, 1, ht - 2, w - 2) = diag_.block(1, 1, ht - 2, w - 2) * z.block(1, 1, ht - 2, w - 2) -
                                     west_block(east_) * z.block(1, 0, ht - 2, w - 2) -
                                     east_block(east_) * z.block(1, 2, ht - 2, w - 2) -
                                     north_block(south_) * z.block(0, 1, ht - 2, w - 2) -
                                     south_block(south_) * z.block(2, 1, ht - 2, w - 2);
  }

 private:
  auto west_block(const Array& e) const {
    return e.block(1, 0, geometry_.height() - 2, geometry_.width() - 2);
  }
  auto east_block(const Array& e) const {
    return e.block(1, 1, geometry_.height() - 2, geometry_.width() - 2);
  }
  auto north_block(const Array& s) const {
    return s.block(0, 1, geometry_.height() - 2, geometry_.width() - 2);
  }
  auto south_block(const Array& s) const {
    return s.block(1, 1, geometry_.height() - 2, geometry_.width() - 2);
  }

  GridGeometry geometry_;
  Array east_;
  Array south_;
  Array diag_;
};

template <typename Scalar>
GridField<Scalar> apply_operator(const GridField<Scalar>& z, const LinearizedData<Scalar>& data,
                                 const ModelParams<Scalar>& p) {
  require_same_geometry(z.geometry(), p.geometry());
  const StencilOperator<Scalar> op(data, p);
  GridField<Scalar> out(z.geometry());
  op.apply(z.values(), out.values());
  return out;
}

template <typename Scalar = double>
struct CgResult {
  GridField<Scalar> solution;
  long iterations = 0;
  double relative_residual = 0.0;
};

/// Thrown when CG exhausts its iteration budget; carries the best iterate.
template <typename Scalar = double>
class CgNotConverged : public Error {
 public:
  CgNotConverged(GridField<Scalar> best, long iterations, double residual)
      : Error(ErrorCode::kSolverNotConverged,
              "conjugate gradient stopped after " + std::to_string(iterations) +
                  " iterations at relative residual " + std::to_string(residual)),
        best_(std::move(best)),
        iterations_(iterations),
        residual_(residual) {}

  const GridField<Scalar>& best_iterate() const { return best_; }
  long iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  GridField<Scalar> best_;
  long iterations_;
  double residual_;
};

/// Jacobi-preconditioned conjugate gradient on the interior unknowns.
template <typename Scalar>
CgResult<Scalar> cg_solve(const LinearizedData<Scalar>& data, const ModelParams<Scalar>& p,
                          const CgParams& cg, const GridField<Scalar>& warm_start) {
  using Array = GridArray<Scalar>;
  require_same_geometry(warm_start.geometry(), p.geometry());
  require_same_geometry(data.f_n.geometry(), p.geometry());
  if (!(cg.rel_tol > 0.0 && cg.rel_tol <= 1e-6)) {
    throw Error(ErrorCode::kInvalidArgument, "cg rel_tol must lie in (0, 1e-6]");
  }
  if (!has_zero_boundary(warm_start)) {
    throw Error(ErrorCode::kInvalidArgument, "warm start must vanish on the boundary");
  }
  const GridGeometry& geom = p.geometry();
  const long max_iters =
      cg.max_iters > 0 ? cg.max_iters : 10L * static_cast<long>(geom.size());

  // f_n restricted to the interior; the ring carries the Dirichlet zeros.
  Array b = data.f_n.values();
  b.row(0).setZero();
  b.row(b.rows() - 1).setZero();
  b.col(0).setZero();
  b.col(b.cols() - 1).setZero();
  const Scalar b_norm = std::sqrt((b * b).sum());
  if (b_norm == Scalar(0)) return {GridField<Scalar>(geom), 0, 0.0};

  const StencilOperator<Scalar> op(data, p);
  Array inv_diag = Array::Zero(geom.height(), geom.width());
  inv_diag.block(1, 1, geom.height() - 2, geom.width() - 2) =
      op.diagonal().block(1, 1, geom.height() - 2, geom.width() - 2).inverse();

  Array x = warm_start.values();
  Array ax;
  Array r;
  auto true_residual = [&]() {
    op.apply(x, ax);
    r = b - ax;
    return static_cast<double>(std::sqrt((r * r).sum()) / b_norm);
  };

  const double tol = cg.rel_tol;
  double rel = true_residual();
  long iters = 0;
  Array z;
  Array dir;
  Array a_dir;
  while (rel > tol && iters < max_iters) {
    // (Re)start from the true residual; restarts only happen if the
    // recurrence drifts below tolerance while the true residual does not.
    z = inv_diag * r;
    dir = z;
    Scalar rz = (r * z).sum();
    while (iters < max_iters) {
      op.apply(dir, a_dir);
      const Scalar step = rz / (dir * a_dir).sum();
      x += step * dir;
      r -= step * a_dir;
      ++iters;
      if (std::sqrt((r * r).sum()) / b_norm <= tol) break;
      z = inv_diag * r;
      const Scalar rz_next = (r * z).sum();
      dir = z + (rz_next / rz) * dir;
      rz = rz_next;
    }
    rel = true_residual();
  }

  GridField<Scalar> solution(geom, x);
  if (rel > tol) throw CgNotConverged<Scalar>(std::move(solution), iters, rel);
  return {std::move(solution), iters, rel};
}

/// Interior system matrix, unknowns numbered row-major over interior cells.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> assemble_dense(
    const LinearizedData<Scalar>& data, const ModelParams<Scalar>& p) {
  const GridGeometry& geom = p.geometry();
  const int iw = geom.width() - 2;
  const int ih = geom.height() - 2;
  const int n = iw * ih;
  const Scalar h = static_cast<Scalar>(geom.h());
  const Scalar k = p.epsilon() * p.epsilon() / (h * h);
  const GridField<Scalar>& G = p.canyon().field();

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  const int dx[4] = {-1, 1, 0, 0};
  const int dy[4] = {0, 0, -1, 1};
  for (int y = 1; y <= ih; ++y) {
    for (int x = 1; x <= iw; ++x) {
      const int row = (y - 1) * iw + (x - 1);
      a(row, row) += data.g_n(x, y);
      for (int d = 0; d < 4; ++d) {
        const int nx = x + dx[d];
        const int ny = y + dy[d];
        const Scalar c = k * (G(x, y) + G(nx, ny)) / Scalar(2);
        a(row, row) += c;
        if (!geom.is_boundary(nx, ny)) a(row, (ny - 1) * iw + (nx - 1)) -= c;
      }
    }
  }
  return a;
}

/// Dense direct solve of the interior system (LU with partial pivoting).
/// Intended as a test oracle on small grids.
template <typename Scalar>
GridField<Scalar> dense_solve_oracle(const LinearizedData<Scalar>& data,
                                     const ModelParams<Scalar>& p) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const GridGeometry& geom = p.geometry();
  require_same_geometry(data.g_n.geometry(), geom);
  const int iw = geom.width() - 2;
  const int ih = geom.height() - 2;
  const int n = iw * ih;
  if (n > 4096) {
    throw Error(ErrorCode::kInvalidArgument,
                "dense oracle limited to 4096 unknowns, got " + std::to_string(n));
  }

  const Matrix a = assemble_dense(data, p);
  Vector rhs(n);
  for (int y = 0; y < ih; ++y) {
    for (int x = 0; x < iw; ++x) rhs(y * iw + x) = data.f_n(x + 1, y + 1);
  }
  const Vector sol = a.partialPivLu().solve(rhs);

  GridField<Scalar> out(geom);
  for (int y = 0; y < ih; ++y) {
    for (int x = 0; x < iw; ++x) out(x + 1, y + 1) = sol(y * iw + x);
  }
  return out;
}

}  // namespace illusory
