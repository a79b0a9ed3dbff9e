#pragma once

#include <algorithm>
#include <random>

#include "illusory/canyon.hpp"
#include "illusory/energy.hpp"
#include "illusory/grid.hpp"

namespace testing {

using illusory::GridField;
using illusory::GridGeometry;

inline GridField<double> random_field(const GridGeometry& g, std::mt19937_64& rng, double lo = 0.0,
                                      double hi = 1.0, bool zero_ring = true) {
  std::uniform_real_distribution<double> u(lo, hi);
  GridField<double> f(g);
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) f(x, y) = u(rng);
  }
  if (zero_ring) illusory::zero_boundary(f);
  return f;
}

// Random interior configuration; never touches the outer ring.
inline illusory::ConfigurationMask random_mask(const GridGeometry& g, std::mt19937_64& rng,
                                               double fill = 0.3) {
  std::bernoulli_distribution b(fill);
  illusory::ConfigurationMask m(g);
  for (int y = 1; y + 1 < g.height(); ++y) {
    for (int x = 1; x + 1 < g.width(); ++x) m.set(x, y, b(rng));
  }
  return m;
}

// Model with G uniform in [0.1, 1.1] and a random Q, bypassing the canyon
// construction so coefficient fields are fully arbitrary.
inline illusory::ModelParams<double> random_model(const GridGeometry& g, std::mt19937_64& rng,
                                                  double eps_cells = 3.0, double lambda = 1.0) {
  GridField<double> G = random_field(g, rng, 0.1, 1.1, false);
  illusory::CanyonField<double> canyon(G, 0.1, 1.0);
  const double eps = std::min(eps_cells * g.h(), 0.25);
  return illusory::ModelParams<double>(canyon, random_mask(g, rng), eps, lambda);
}

inline illusory::ModelParams<double> uniform_model(const GridGeometry& g, double G, double eps,
                                                   double lambda = 1.0) {
  illusory::CanyonField<double> canyon(GridField<double>(g, G), G, 0.0);
  return illusory::ModelParams<double>(canyon, illusory::ConfigurationMask(g), eps, lambda);
}

inline GridField<double> transpose(const GridField<double>& f) {
  GridField<double> t(GridGeometry(f.height(), f.width()));
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) t(y, x) = f(x, y);
  }
  return t;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max({1e-300, std::abs(a), std::abs(b)});
  return std::abs(a - b) / scale;
}

}  // namespace testing
