#pragma once

// Illusory shape extraction {z > threshold} and component statistics.

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "illusory/error.hpp"
#include "illusory/grid.hpp"

namespace illusory {

class ShapeMask {
 public:
  using Array = GridArray<std::uint8_t>;

  ShapeMask(const GridGeometry& geometry, double threshold)
      : geometry_(geometry),
        inside_(Array::Zero(geometry.height(), geometry.width())),
        threshold_(threshold) {}

  const GridGeometry& geometry() const { return geometry_; }
  int width() const { return geometry_.width(); }
  int height() const { return geometry_.height(); }
  double threshold() const { return threshold_; }

  bool operator()(int x, int y) const { return inside_(y, x) != 0; }
  void set(int x, int y, bool value) { inside_(y, x) = value ? 1 : 0; }

  std::size_t count() const {
    std::size_t n = 0;
    for (Eigen::Index k = 0; k < inside_.size(); ++k) n += inside_.data()[k] != 0;
    return n;
  }
  bool empty() const { return count() == 0; }

 private:
  GridGeometry geometry_;
  Array inside_;
  double threshold_;
};

struct ComponentSet {
  int count = 0;
  GridArray<int> labels;  // 0 = background, else 1..count
  std::vector<std::size_t> areas;
  std::vector<std::pair<double, double>> centroids;  // (x, y) in cell units
};

/// Cells with z strictly above `threshold`.
template <typename Scalar>
ShapeMask extract_shape(const GridField<Scalar>& z, double threshold = 0.5) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in (0, 1)");
  }
  ShapeMask mask(z.geometry(), threshold);
  for (int y = 0; y < z.height(); ++y) {
    for (int x = 0; x < z.width(); ++x) mask.set(x, y, static_cast<double>(z(x, y)) > threshold);
  }
  return mask;
}

/// 4-connected labelling; labels are assigned in raster order of each
/// component's first cell.
inline ComponentSet connected_components(const ShapeMask& mask) {
  const int w = mask.width();
  const int ht = mask.height();
  ComponentSet out;
  out.labels = GridArray<int>::Zero(ht, w);
  std::vector<std::pair<int, int>> stack;
  constexpr std::array<std::pair<int, int>, 4> kNeighbours{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};

  for (int y = 0; y < ht; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask(x, y) || out.labels(y, x) != 0) continue;
      const int label = ++out.count;
      std::size_t area = 0;
      double sx = 0.0;
      double sy = 0.0;
      out.labels(y, x) = label;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        ++area;
        sx += cx;
        sy += cy;
        for (const auto& [dx, dy] : kNeighbours) {
          const int nx = cx + dx;
          const int ny = cy + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= ht) continue;
          if (!mask(nx, ny) || out.labels(ny, nx) != 0) continue;
          out.labels(ny, nx) = label;
          stack.emplace_back(nx, ny);
        }
      }
      out.areas.push_back(area);
      out.centroids.emplace_back(sx / static_cast<double>(area), sy / static_cast<double>(area));
    }
  }
  return out;
}

/// Intersection over union; 1 when both masks are empty.
inline double iou(const ShapeMask& a, const ShapeMask& b) {
  require_same_geometry(a.geometry(), b.geometry());
  std::size_t both = 0;
  std::size_t either = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      both += a(x, y) && b(x, y);
      either += a(x, y) || b(x, y);
    }
  }
  if (either == 0) return 1.0;
  return static_cast<double>(both) / static_cast<double>(either);
}

}  // namespace illusory
