#include <doctest.h>

#include <cmath>
#include <random>

#include "illusory/canyon.hpp"
#include "illusory/error.hpp"
#include "support.hpp"

using namespace illusory;

namespace {

ConfigurationMask square_mask(const GridGeometry& g, int x0, int y0, int side) {
  ConfigurationMask m(g);
  for (int y = y0; y < y0 + side; ++y) {
    for (int x = x0; x < x0 + side; ++x) m.set(x, y, true);
  }
  return m;
}

// Distance (in cells) from (x, y) to the nearest cell of opposite membership.
double distance_to_edge(const ConfigurationMask& m, int x, int y) {
  double best = 1e300;
  for (int v = 0; v < m.height(); ++v) {
    for (int u = 0; u < m.width(); ++u) {
      if (m(u, v) != m(x, y)) best = std::min(best, std::hypot(u - x, v - y));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("mollify with zero sigma returns the indicator") {
  std::mt19937_64 rng(1);
  const GridGeometry g(12, 10);
  const auto m = testing::random_mask(g, rng);
  CHECK(mollify(m, 0.0) == m.indicator<double>());
}

TEST_CASE("mollify keeps constants fixed") {
  const GridGeometry g(16, 12);
  for (bool fill : {false, true}) {
    const ConfigurationMask m(g, fill);
    const auto u = mollify(m, 3.0 * g.h());
    CHECK((u.values() - (fill ? 1.0 : 0.0)).abs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("mollified step edge is one half at the interface") {
  const GridGeometry g(32, 8);
  ConfigurationMask m(g);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 16; ++x) m.set(x, y, true);
  }
  const auto u = mollify(m, 2.0 * g.h());
  for (int y = 0; y < 8; ++y) {
    CHECK(0.5 * (u(15, y) + u(16, y)) == doctest::Approx(0.5).epsilon(0.02));
    CHECK(u(15, y) > 0.5);
    CHECK(u(16, y) < 0.5);
  }
  CHECK(u.values().minCoeff() >= 0.0);
  CHECK(u.values().maxCoeff() <= 1.0);
}

TEST_CASE("mollify stays within [0, 1] on random masks") {
  std::mt19937_64 rng(2);
  const GridGeometry g(20, 20);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = mollify(testing::random_mask(g, rng, 0.5), 2.5 * g.h());
    CHECK(u.values().minCoeff() >= 0.0);
    CHECK(u.values().maxCoeff() <= 1.0);
  }
  CHECK_THROWS_AS(mollify(ConfigurationMask(g), -1.0), Error);
}

TEST_CASE("edge response values") {
  for (auto kind : {EdgeKind::kExpSquare, EdgeKind::kRational}) CHECK(edge_response(0.0, kind) == 1.0);
  CHECK(edge_response(1e6, EdgeKind::kRational) < 1e-6);
  CHECK(edge_response(1e6, EdgeKind::kExpSquare) == 0.0);
  CHECK(edge_response(1.0, EdgeKind::kExpSquare) == doctest::Approx(0.367879).epsilon(1e-6));
  CHECK(edge_response(1.0, EdgeKind::kRational) == 0.5);
}

TEST_CASE("canyon range, drop and plateau") {
  const GridGeometry g(64, 64);
  const auto m = square_mask(g, 20, 24, 16);
  CanyonParams<double> p;
  const auto G = build_canyon(m, p);
  const double sigma = 2.0 * g.h();
  const double a = p.alpha;
  const double b = p.beta;
  CHECK(G.field().values().minCoeff() >= a);
  CHECK(G.field().values().maxCoeff() <= a + b);

  double near_min = 1e300;
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      const double d = distance_to_edge(m, x, y) * g.h();
      if (d <= sigma) near_min = std::min(near_min, G(x, y));
      if (d > 5 * sigma) {
        CHECK(G(x, y) >= a + 0.99 * b);
        CHECK(G(x, y) >= a + 0.95 * b);
      }
    }
  }
  CHECK(near_min <= a + 0.1 * b);
}

TEST_CASE("strongest edge hits g(gain)") {
  const GridGeometry g(40, 40);
  const auto m = square_mask(g, 12, 14, 10);
  const auto edge = gradient_magnitude(mollify(m, 2.0 * g.h()));
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  edge.values().maxCoeff(&row, &col);
  const auto G = build_canyon(m, CanyonParams<double>{});
  CHECK(G(static_cast<int>(col), static_cast<int>(row)) == doctest::Approx(0.1 + std::exp(-9.0)).epsilon(1e-12));
  CHECK(G.field().values().minCoeff() == doctest::Approx(0.1 + 0.000123).epsilon(1e-3));
}

TEST_CASE("raising the gain never raises G") {
  std::mt19937_64 rng(3);
  const GridGeometry g(24, 24);
  const auto m = testing::random_mask(g, rng, 0.2);
  for (auto kind : {EdgeKind::kExpSquare, EdgeKind::kRational}) {
    CanyonParams<double> p;
    p.g_kind = kind;
    auto prev = build_canyon(m, p);
    for (double gain : {3.5, 5.0, 8.0, 20.0}) {
      p.gain = gain;
      const auto next = build_canyon(m, p);
      CHECK((next.field().values() <= prev.field().values()).all());
      prev = next;
    }
  }
}

TEST_CASE("canyon is translation equivariant away from the walls") {
  const GridGeometry g(64, 64);
  const auto a = build_canyon(square_mask(g, 24, 24, 10), CanyonParams<double>{});
  const int dx = 3;
  const int dy = -2;
  const auto b = build_canyon(square_mask(g, 24 + dx, 24 + dy, 10), CanyonParams<double>{});
  const int margin = 10;  // 5 sigma with sigma = 2h
  double worst = 0.0;
  for (int y = margin; y < 64 - margin; ++y) {
    for (int x = margin; x < 64 - margin; ++x) {
      worst = std::max(worst, std::abs(a(x, y) - b(x + dx, y + dy)));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("zero drop gives a flat canyon") {
  const GridGeometry g(20, 20);
  CanyonParams<double> p;
  p.beta = 0.0;
  const auto G = build_canyon(square_mask(g, 5, 5, 6), p);
  CHECK((G.field().values() == p.alpha).all());
}

TEST_CASE("canyon rejects masks without edges and bad parameters") {
  const GridGeometry g(12, 12);
  for (bool fill : {false, true}) {
    try {
      build_canyon(ConfigurationMask(g, fill), CanyonParams<double>{});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kNoConfigurationBoundary);
    }
  }
  const auto m = square_mask(g, 4, 4, 3);
  CanyonParams<double> p;
  p.alpha = 0.0;
  CHECK_THROWS_AS(build_canyon(m, p), Error);
  p = {};
  p.sigma = 0.5 * g.h();
  CHECK_THROWS_AS(build_canyon(m, p), Error);
  p = {};
  p.gain = -1.0;
  CHECK_THROWS_AS(build_canyon(m, p), Error);
}

TEST_CASE("raw gradient mode skips normalisation") {
  const GridGeometry g(32, 32);
  const auto m = square_mask(g, 10, 10, 8);
  CanyonParams<double> p;
  p.normalize_gradient = false;
  p.gain = 1.0;
  const auto G = build_canyon(m, p);
  const auto edge = gradient_magnitude(mollify(m, 2.0 * g.h()));
  for (int k = 0; k < static_cast<int>(edge.size()); k += 37) {
    CHECK(G.field().data()[k] ==
          doctest::Approx(0.1 + std::exp(-edge.data()[k] * edge.data()[k])).epsilon(1e-14));
  }
}

TEST_CASE("configuration validation") {
  const GridGeometry g(6, 6);
  ConfigurationMask m(g);
  try {
    validate_configuration(m);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyConfiguration);
  }
  m.set(0, 3, true);
  try {
    validate_configuration(m);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfigurationTouchesBoundary);
  }
  m.set(0, 3, false);
  m.set(2, 3, true);
  CHECK_NOTHROW(validate_configuration(m));
}
