#pragma once

// Procedurally drawn inducer configurations (Kanizsa-type figures).
//
// Each inducer is a disk centred on a vertex or boundary point of the
// intended illusory figure, with the figure's interior cut out of it. Points
// are in pixel units with cell (x, y) centred at (x + 0.5, y + 0.5).

#include <string>
#include <utility>
#include <vector>

#include "illusory/canyon.hpp"
#include "illusory/shape.hpp"

namespace illusory::fixtures {

struct Fixture {
  std::string name;
  ConfigurationMask inducers;
  ShapeMask ideal;  // cells of the intended illusory figure(s)
  std::vector<std::pair<double, double>> anchors;  // disk centres
  int expected_components = 1;
};

/// Three pac-men at the vertices of an upward equilateral triangle.
Fixture kanizsa_triangle(int size = 128);

/// Six pac-men evenly spaced on a circle.
Fixture kanizsa_disk(int size = 128);

/// An illusory triangle and an illusory ellipse side by side on a
/// (2 size) x size canvas, joined only through one shared inducer.
Fixture ellipse_triangle(int size = 128);

/// Looks up one of the names above ("kanizsa", "disk", "ellipse_triangle").
Fixture by_name(const std::string& name, int size);

}  // namespace illusory::fixtures
