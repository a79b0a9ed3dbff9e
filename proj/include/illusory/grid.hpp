#pragma once

// Uniform 2-D grids and the scalar fields that live on them.
//
// Cells are addressed as (x, y) with x the column and y the row; storage is
// row-major so that a row of the image is contiguous. The longest side of the
// domain has unit length, i.e. h = 1 / max(width, height).

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "illusory/error.hpp"

namespace illusory {

class GridGeometry {
 public:
  GridGeometry(int width, int height) : width_(width), height_(height) {
    if (width < 3 || height < 3) {
      throw Error(ErrorCode::kInvalidArgument,
                  "grid must be at least 3x3, got " + std::to_string(width) + "x" +
                      std::to_string(height));
    }
    h_ = 1.0 / static_cast<double>(std::max(width, height));
  }

  int width() const { return width_; }
  int height() const { return height_; }
  double h() const { return h_; }
  std::size_t size() const { return static_cast<std::size_t>(width_) * height_; }

  bool is_boundary(int x, int y) const {
    return x == 0 || y == 0 || x == width_ - 1 || y == height_ - 1;
  }

  friend bool operator==(const GridGeometry& a, const GridGeometry& b) {
    return a.width_ == b.width_ && a.height_ == b.height_;
  }

 private:
  int width_;
  int height_;
  double h_;
};

inline void require_same_geometry(const GridGeometry& a, const GridGeometry& b) {
  if (!(a == b)) {
    throw Error(ErrorCode::kGeometryMismatch,
                std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                    std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
}

template <typename Scalar>
using GridArray = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// A real value per grid cell. `values()` exposes the underlying Eigen array
/// (rows = height, cols = width) so arithmetic composes as expressions.
template <typename Scalar = double>
class GridField {
 public:
  using Array = GridArray<Scalar>;

  explicit GridField(const GridGeometry& geometry, Scalar fill = Scalar(0))
      : geometry_(geometry), values_(Array::Constant(geometry.height(), geometry.width(), fill)) {}

  template <typename Derived>
  GridField(const GridGeometry& geometry, const Eigen::ArrayBase<Derived>& values)
      : geometry_(geometry), values_(values) {
    if (values_.rows() != geometry.height() || values_.cols() != geometry.width()) {
      throw Error(ErrorCode::kGeometryMismatch, "value array does not match grid");
    }
  }

  const GridGeometry& geometry() const { return geometry_; }
  int width() const { return geometry_.width(); }
  int height() const { return geometry_.height(); }
  double h() const { return geometry_.h(); }
  std::size_t size() const { return geometry_.size(); }

  Scalar& operator()(int x, int y) { return values_(y, x); }
  Scalar operator()(int x, int y) const { return values_(y, x); }

  Array& values() { return values_; }
  const Array& values() const { return values_; }

  Scalar* data() { return values_.data(); }
  const Scalar* data() const { return values_.data(); }

  bool all_finite() const { return values_.isFinite().all(); }

  friend bool operator==(const GridField& a, const GridField& b) {
    return a.geometry_ == b.geometry_ && (a.values_ == b.values_).all();
  }

 private:
  GridGeometry geometry_;
  Array values_;
};

using Field = GridField<double>;

/// Fixed-order (row-major) sum; results do not depend on Eigen's vectorized
/// reduction tree.
template <typename Scalar>
Scalar ordered_sum(const GridArray<Scalar>& a) {
  Scalar total(0);
  const Scalar* p = a.data();
  for (Eigen::Index k = 0; k < a.size(); ++k) total += p[k];
  return total;
}

/// Cell-centred |grad f|: central differences in the interior, one-sided
/// differences on the outer ring.
template <typename Scalar>
GridField<Scalar> gradient_magnitude(const GridField<Scalar>& f) {
  const int w = f.width();
  const int ht = f.height();
  const Scalar h = static_cast<Scalar>(f.h());
  GridField<Scalar> out(f.geometry());
  for (int y = 0; y < ht; ++y) {
    for (int x = 0; x < w; ++x) {
      Scalar dx;
      if (x == 0) {
        dx = (f(1, y) - f(0, y)) / h;
      } else if (x == w - 1) {
        dx = (f(w - 1, y) - f(w - 2, y)) / h;
      } else {
        dx = (f(x + 1, y) - f(x - 1, y)) / (Scalar(2) * h);
      }
      Scalar dy;
      if (y == 0) {
        dy = (f(x, 1) - f(x, 0)) / h;
      } else if (y == ht - 1) {
        dy = (f(x, ht - 1) - f(x, ht - 2)) / h;
      } else {
        dy = (f(x, y + 1) - f(x, y - 1)) / (Scalar(2) * h);
      }
      out(x, y) = std::sqrt(dx * dx + dy * dy);
    }
  }
  return out;
}

/// Root-mean-square difference over all cells.
template <typename Scalar>
Scalar rms_diff(const GridField<Scalar>& a, const GridField<Scalar>& b) {
  require_same_geometry(a.geometry(), b.geometry());
  const GridArray<Scalar> d2 = (a.values() - b.values()).square();
  return std::sqrt(ordered_sum<Scalar>(d2) / static_cast<Scalar>(a.size()));
}

/// Midpoint-rule integral over the domain: h^2 times the sum of cell values.
template <typename Scalar>
Scalar quadrature_sum(const GridField<Scalar>& f) {
  const Scalar h = static_cast<Scalar>(f.h());
  return h * h * ordered_sum<Scalar>(f.values());
}

template <typename Scalar>
bool has_zero_boundary(const GridField<Scalar>& z) {
  const int w = z.width();
  const int ht = z.height();
  for (int x = 0; x < w; ++x) {
    if (z(x, 0) != Scalar(0) || z(x, ht - 1) != Scalar(0)) return false;
  }
  for (int y = 0; y < ht; ++y) {
    if (z(0, y) != Scalar(0) || z(w - 1, y) != Scalar(0)) return false;
  }
  return true;
}

template <typename Scalar>
void zero_boundary(GridField<Scalar>& z) {
  auto& v = z.values();
  v.row(0).setZero();
  v.row(v.rows() - 1).setZero();
  v.col(0).setZero();
  v.col(v.cols() - 1).setZero();
}

}  // namespace illusory
