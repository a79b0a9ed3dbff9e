#pragma once

// The canyon weight G = alpha + beta * g(edge strength of the mollified
// inducer indicator). G is close to alpha along the inducer boundary and close
// to alpha + beta away from it.

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "illusory/error.hpp"
#include "illusory/grid.hpp"

namespace illusory {

/// Binary indicator of the inducer configuration Q.
class ConfigurationMask {
 public:
  using Array = GridArray<std::uint8_t>;

  explicit ConfigurationMask(const GridGeometry& geometry, bool fill = false)
      : geometry_(geometry),
        inside_(Array::Constant(geometry.height(), geometry.width(), fill ? 1 : 0)) {}

  const GridGeometry& geometry() const { return geometry_; }
  int width() const { return geometry_.width(); }
  int height() const { return geometry_.height(); }

  bool operator()(int x, int y) const { return inside_(y, x) != 0; }
  void set(int x, int y, bool value) { inside_(y, x) = value ? 1 : 0; }

  std::size_t count() const {
    std::size_t n = 0;
    for (Eigen::Index k = 0; k < inside_.size(); ++k) n += inside_.data()[k] != 0;
    return n;
  }

  bool touches_boundary() const {
    for (int y = 0; y < height(); ++y) {
      for (int x = 0; x < width(); ++x) {
        if ((*this)(x, y) && geometry_.is_boundary(x, y)) return true;
      }
    }
    return false;
  }

  /// chi_Q as a 0/1 field.
  template <typename Scalar = double>
  GridField<Scalar> indicator() const {
    return GridField<Scalar>(geometry_, inside_.template cast<Scalar>());
  }

 private:
  GridGeometry geometry_;
  Array inside_;
};

/// Throws unless Q is nonempty and compactly inside the domain.
inline void validate_configuration(const ConfigurationMask& mask) {
  if (mask.count() == 0) throw Error(ErrorCode::kEmptyConfiguration, "");
  if (mask.touches_boundary()) throw Error(ErrorCode::kConfigurationTouchesBoundary, "");
}

enum class EdgeKind { kExpSquare, kRational };

template <typename Scalar = double>
struct CanyonParams {
  Scalar alpha = Scalar(0.1);
  Scalar beta = Scalar(1.0);
  Scalar sigma = Scalar(0);  // 0 selects the default 2h at build time
  EdgeKind g_kind = EdgeKind::kExpSquare;
  Scalar gain = Scalar(3);
  // Divide |grad chi_sigma| by its maximum before applying the gain. When
  // false, g sees gain * |grad chi_sigma| in raw (1/length) units.
  bool normalize_gradient = true;
};

template <typename Scalar = double>
class CanyonField {
 public:
  CanyonField(GridField<Scalar> values, Scalar alpha, Scalar beta)
      : values_(std::move(values)), alpha_(alpha), beta_(beta) {}

  const GridGeometry& geometry() const { return values_.geometry(); }
  const GridField<Scalar>& field() const { return values_; }
  Scalar operator()(int x, int y) const { return values_(x, y); }
  Scalar alpha() const { return alpha_; }
  Scalar beta() const { return beta_; }

  /// A copy with every value multiplied by `c`; floor and drop scale with it.
  CanyonField scaled(Scalar c) const {
    return CanyonField(GridField<Scalar>(geometry(), values_.values() * c), alpha_ * c, beta_ * c);
  }

 private:
  GridField<Scalar> values_;
  Scalar alpha_;
  Scalar beta_;
};

/// Explicit heat smoothing of chi_Q up to diffusion time sigma^2 / 2 with
/// reflecting (zero-flux) walls. Step size is at most h^2 / 4.
template <typename Scalar = double>
GridField<Scalar> mollify(const ConfigurationMask& mask, Scalar sigma) {
  if (!(sigma >= Scalar(0))) throw Error(ErrorCode::kInvalidArgument, "sigma must be >= 0");
  GridField<Scalar> u = mask.template indicator<Scalar>();
  if (sigma == Scalar(0)) return u;

  const Scalar h = static_cast<Scalar>(mask.geometry().h());
  const Scalar total_time = sigma * sigma / Scalar(2);
  const int steps = static_cast<int>(std::ceil(total_time / (h * h / Scalar(4))));
  const Scalar r = total_time / static_cast<Scalar>(steps) / (h * h);

  const int w = mask.width();
  const int ht = mask.height();
  GridField<Scalar> next(mask.geometry());
  for (int s = 0; s < steps; ++s) {
    for (int y = 0; y < ht; ++y) {
      const int yn = y > 0 ? y - 1 : y;
      const int ys = y < ht - 1 ? y + 1 : y;
      for (int x = 0; x < w; ++x) {
        const int xw = x > 0 ? x - 1 : x;
        const int xe = x < w - 1 ? x + 1 : x;
        const Scalar c = u(x, y);
        next(x, y) = c + r * (u(xw, y) + u(xe, y) + u(x, yn) + u(x, ys) - Scalar(4) * c);
      }
    }
    std::swap(u, next);
  }
  return u;
}

/// Decreasing edge-stopping function with g(0) = 1 and g(inf) = 0.
template <typename Scalar>
Scalar edge_response(Scalar p, EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kExpSquare: return std::exp(-p * p);
    case EdgeKind::kRational: return Scalar(1) / (Scalar(1) + p * p);
  }
  return Scalar(1);
}

template <typename Scalar>
CanyonField<Scalar> build_canyon(const ConfigurationMask& mask, CanyonParams<Scalar> params) {
  const Scalar h = static_cast<Scalar>(mask.geometry().h());
  if (params.sigma == Scalar(0)) params.sigma = Scalar(2) * h;
  if (!(params.alpha > Scalar(0))) throw Error(ErrorCode::kInvalidArgument, "alpha must be > 0");
  if (!(params.beta >= Scalar(0))) throw Error(ErrorCode::kInvalidArgument, "beta must be >= 0");
  if (!(params.gain > Scalar(0))) throw Error(ErrorCode::kInvalidArgument, "gain must be > 0");
  // Allow round-off when sigma was computed as a multiple of h.
  if (params.sigma < h * (Scalar(1) - Scalar(1e-12))) {
    throw Error(ErrorCode::kInvalidArgument, "sigma must be at least one grid spacing");
  }

  const GridField<Scalar> smooth = mollify<Scalar>(mask, params.sigma);
  const GridField<Scalar> edge = gradient_magnitude(smooth);
  const Scalar m = edge.values().maxCoeff();
  if (!(m > Scalar(0))) throw Error(ErrorCode::kNoConfigurationBoundary, "");

  const Scalar scale = params.normalize_gradient ? params.gain / m : params.gain;
  GridField<Scalar> g(mask.geometry());
  const Eigen::Index n = static_cast<Eigen::Index>(edge.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    g.data()[k] = params.alpha + params.beta * edge_response(scale * edge.data()[k], params.g_kind);
  }
  return CanyonField<Scalar>(std::move(g), params.alpha, params.beta);
}

}  // namespace illusory
