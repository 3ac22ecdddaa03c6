// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "meibo/errors.hpp"

namespace meibo::imgproc {

struct Point2d {
  double x = 0.0;
  double y = 0.0;
};

/// Clamped B-spline curve over t in [0, 1].
class BSplineCurve {
 public:
  BSplineCurve() = default;
  BSplineCurve(int degree, std::vector<Point2d> control_points,
               std::vector<double> knots);

  int degree() const { return degree_; }
  const std::vector<Point2d>& control_points() const { return control_; }
  const std::vector<double>& knots() const { return knots_; }

  Point2d evaluate(double t) const;

 private:
  int degree_ = 0;
  std::vector<Point2d> control_;
  std::vector<double> knots_;
};

/// Least-squares fit with centripetal parameterization (parameter increments
/// proportional to the square root of chord length) and a clamped uniform
/// knot vector. Control-point count is clamp(n/10, degree+1 but at least 4
/// when n allows, n). Throws TooFewPoints if n < degree + 1.
BSplineCurve fit_bspline(const std::vector<Point2d>& points, int degree);

}  // namespace meibo::imgproc
