// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "meibo/bspline.hpp"

using meibo::TooFewPoints;
using meibo::imgproc::BSplineCurve;
using meibo::imgproc::fit_bspline;
using meibo::imgproc::Point2d;

TEST_CASE("knot vector shape and hull containment") {
  std::vector<Point2d> pts;
  for (int i = 0; i < 50; ++i)
    pts.push_back({static_cast<double>(i), std::sin(i * 0.2) * 10.0});
  const BSplineCurve c = fit_bspline(pts, 2);
  CHECK(c.knots().size() == c.control_points().size() + c.degree() + 1);
  for (std::size_t i = 1; i < c.knots().size(); ++i)
    CHECK(c.knots()[i] >= c.knots()[i - 1]);

  // The curve stays inside the bounding box of its control points.
  double cx0 = 1e9, cx1 = -1e9, cy0 = 1e9, cy1 = -1e9;
  for (const auto& p : c.control_points()) {
    cx0 = std::min(cx0, p.x);
    cx1 = std::max(cx1, p.x);
    cy0 = std::min(cy0, p.y);
    cy1 = std::max(cy1, p.y);
  }
  for (int i = 0; i <= 200; ++i) {
    const Point2d p = c.evaluate(i / 200.0);
    CHECK(p.x >= cx0 - 1e-9);
    CHECK(p.x <= cx1 + 1e-9);
    CHECK(p.y >= cy0 - 1e-9);
    CHECK(p.y <= cy1 + 1e-9);
  }
}

TEST_CASE("collinear points reproduce the line") {
  std::vector<Point2d> pts;
  for (int i = 0; i < 40; ++i)
    pts.push_back({2.0 + 1.5 * i, 7.0 + 0.75 * i});  // y = 0.5x + 6
  const BSplineCurve c = fit_bspline(pts, 2);
  for (int i = 0; i <= 100; ++i) {
    const Point2d p = c.evaluate(i / 100.0);
    CHECK(std::abs(p.y - (0.5 * p.x + 6.0)) < 0.5);
  }
}

TEST_CASE("three points, three controls: exact quadratic interpolation") {
  // With control count equal to the point count the least-squares system is
  // square; solving it directly gives zero residual at the data parameters.
  const std::vector<Point2d> pts = {{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}};
  const BSplineCurve c = fit_bspline(pts, 2);
  REQUIRE(c.control_points().size() == 3);

  // Centripetal parameters of these symmetric points are 0, 1/2, 1.
  const double params[3] = {0.0, 0.5, 1.0};
  for (int i = 0; i < 3; ++i) {
    const Point2d p = c.evaluate(params[i]);
    CHECK(p.x == doctest::Approx(pts[i].x).epsilon(1e-9));
    CHECK(p.y == doctest::Approx(pts[i].y).epsilon(1e-9));
  }
}

TEST_CASE("noisy parabola: residual below the noise amplitude") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  std::vector<Point2d> pts, clean;
  for (int i = 0; i < 200; ++i) {
    const double x = i * 0.5;
    const double y = 0.01 * (x - 50.0) * (x - 50.0);
    clean.push_back({x, y});
    pts.push_back({x, y + noise(rng)});
  }
  const BSplineCurve c = fit_bspline(pts, 2);

  // Least-squares oracle: compare against the clean curve at dense samples.
  double max_residual = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const Point2d p = c.evaluate(i / 400.0);
    // nearest clean point by x (clean points are x-sorted, spacing 0.5)
    const std::size_t j = std::min<std::size_t>(
        clean.size() - 1,
        static_cast<std::size_t>(std::max(0.0, std::round(p.x / 0.5))));
    max_residual = std::max(max_residual, std::abs(p.y - clean[j].y));
  }
  CHECK(max_residual < 1.0);
}

TEST_CASE("too few points") {
  CHECK_THROWS_AS(fit_bspline({{0, 0}, {1, 1}}, 2), TooFewPoints);
}
