#include "illusory/fixtures.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "illusory/error.hpp"

namespace illusory::fixtures {
namespace {

using Point = std::pair<double, double>;
using Region = std::function<bool(double, double)>;

struct Disk {
  Point centre;
  double radius;
};

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
}

Region triangle_region(const std::array<Point, 3>& v) {
  return [v](double x, double y) {
    const Point p{x, y};
    const double d0 = cross(v[0], v[1], p);
    const double d1 = cross(v[1], v[2], p);
    const double d2 = cross(v[2], v[0], p);
    const bool has_neg = d0 < 0 || d1 < 0 || d2 < 0;
    const bool has_pos = d0 > 0 || d1 > 0 || d2 > 0;
    return !(has_neg && has_pos);
  };
}

Region ellipse_region(Point c, double a, double b) {
  return [c, a, b](double x, double y) {
    const double u = (x - c.first) / a;
    const double v = (y - c.second) / b;
    return u * u + v * v <= 1.0;
  };
}

std::array<Point, 3> upward_triangle(Point centre, double circumradius) {
  std::array<Point, 3> v;
  for (int k = 0; k < 3; ++k) {
    const double angle = -std::numbers::pi / 2 + 2 * std::numbers::pi * k / 3;
    v[k] = {centre.first + circumradius * std::cos(angle),
            centre.second + circumradius * std::sin(angle)};
  }
  return v;
}

// Disks minus figure become Q; the figure becomes the ideal shape.
void paint(Fixture& f, const std::vector<Disk>& disks, const Region& figure) {
  for (int y = 0; y < f.inducers.height(); ++y) {
    for (int x = 0; x < f.inducers.width(); ++x) {
      const double px = x + 0.5;
      const double py = y + 0.5;
      const bool in_figure = figure(px, py);
      bool in_disk = false;
      for (const auto& d : disks) {
        const double dx = px - d.centre.first;
        const double dy = py - d.centre.second;
        in_disk = in_disk || dx * dx + dy * dy <= d.radius * d.radius;
      }
      if (in_figure) f.ideal.set(x, y, true);
      if (in_disk && !in_figure) f.inducers.set(x, y, true);
    }
  }
  for (const auto& d : disks) f.anchors.push_back(d.centre);
}

Fixture blank(const std::string& name, int width, int height) {
  const GridGeometry geom(width, height);
  return Fixture{name, ConfigurationMask(geom), ShapeMask(geom, 0.5), {}, 1};
}

}  // namespace

Fixture kanizsa_triangle(int size) {
  Fixture f = blank("kanizsa", size, size);
  const double s = size;
  // Centroid slightly below the middle so the figure is vertically centred.
  const auto v = upward_triangle({0.5 * s, 0.55 * s}, 0.3 * s);
  std::vector<Disk> disks;
  for (const auto& p : v) disks.push_back({p, 0.1 * s});
  paint(f, disks, triangle_region(v));
  return f;
}

Fixture kanizsa_disk(int size) {
  Fixture f = blank("disk", size, size);
  const double s = size;
  const Point c{0.5 * s, 0.5 * s};
  const double radius = 0.25 * s;
  std::vector<Disk> disks;
  for (int k = 0; k < 6; ++k) {
    const double angle = 2 * std::numbers::pi * k / 6;
    disks.push_back({{c.first + radius * std::cos(angle), c.second + radius * std::sin(angle)},
                     0.08 * s});
  }
  paint(f, disks, ellipse_region(c, radius, radius));
  return f;
}

Fixture ellipse_triangle(int size) {
  Fixture f = blank("ellipse_triangle", 2 * size, size);
  f.expected_components = 2;
  const double s = size;

  // A right-pointing triangle and an ellipse meet at one shared pac-man whose
  // two notches hold the triangle's apex and the ellipse's left end. The
  // shared disk reaches past both figures' vertical extent, so the initial
  // phase region has to pinch off around it.
  const Point hub{s, 0.5 * s};
  const double length = 0.5625 * s;
  const double half_height = 0.2125 * s;
  const std::array<Point, 3> v{hub, Point{hub.first - length, hub.second - half_height},
                               Point{hub.first - length, hub.second + half_height}};
  const Region tri = triangle_region(v);

  const double a = 0.4375 * s;
  const double b = 0.2125 * s;
  const Point ec{hub.first + a, hub.second};
  const Region ell = ellipse_region(ec, a, b);

  const double r = 0.0875 * s;
  const std::vector<Disk> disks{{hub, 0.225 * s},
                                {v[1], r},
                                {v[2], r},
                                {{ec.first, ec.second - b}, r},
                                {{ec.first, ec.second + b}, r},
                                {{ec.first + a, ec.second}, r}};
  paint(f, disks, [&](double x, double y) { return tri(x, y) || ell(x, y); });
  return f;
}

Fixture by_name(const std::string& name, int size) {
  if (name == "kanizsa") return kanizsa_triangle(size);
  if (name == "disk") return kanizsa_disk(size);
  if (name == "ellipse_triangle") return ellipse_triangle(size);
  throw Error(ErrorCode::kInvalidArgument, "unknown fixture '" + name + "'");
}

}  // namespace illusory::fixtures
