// SPDX-License-Identifier: Apache-2.0

#include "meibo/bspline.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace meibo::imgproc {

BSplineCurve::BSplineCurve(int degree, std::vector<Point2d> control_points,
                           std::vector<double> knots)
    : degree_(degree), control_(std::move(control_points)), knots_(std::move(knots)) {
  if (knots_.size() != control_.size() + degree_ + 1)
    throw Error("BSplineCurve: knot count must equal control count + degree + 1");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (knots_[i] < knots_[i - 1])
      throw Error("BSplineCurve: knot vector must be non-decreasing");
}

Point2d BSplineCurve::evaluate(double t) const {
  const int p = degree_;
  const int m = static_cast<int>(control_.size());
  t = std::clamp(t, knots_[p], knots_[m]);

  // Knot span index k with knots[k] <= t < knots[k+1]; the last span is
  // closed at its right end.
  int k = p;
  while (k < m - 1 && t >= knots_[k + 1]) ++k;

  // De Boor's algorithm.
  std::vector<Point2d> d(p + 1);
  for (int j = 0; j <= p; ++j) d[j] = control_[k - p + j];
  for (int r = 1; r <= p; ++r) {
    for (int j = p; j >= r; --j) {
      const int i = k - p + j;
      const double denom = knots_[i + p - r + 1] - knots_[i];
      const double alpha = denom == 0.0 ? 0.0 : (t - knots_[i]) / denom;
      d[j].x = (1.0 - alpha) * d[j - 1].x + alpha * d[j].x;
      d[j].y = (1.0 - alpha) * d[j - 1].y + alpha * d[j].y;
    }
  }
  return d[p];
}

namespace {

// Cox-de Boor basis functions of one parameter value: N_{span-p..span}.
void basis_functions(int span, double t, int p, const std::vector<double>& knots,
                     std::vector<double>& out) {
  out.assign(p + 1, 0.0);
  std::vector<double> left(p + 1), right(p + 1);
  out[0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = t - knots[span + 1 - j];
    right[j] = knots[span + j] - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double denom = right[r + 1] + left[j - r];
      const double tmp = denom == 0.0 ? 0.0 : out[r] / denom;
      out[r] = saved + right[r + 1] * tmp;
      saved = left[j - r] * tmp;
    }
    out[j] = saved;
  }
}

}  // namespace

BSplineCurve fit_bspline(const std::vector<Point2d>& points, int degree) {
  const int n = static_cast<int>(points.size());
  if (n < degree + 1)
    throw TooFewPoints("fit_bspline: need at least degree + 1 points");

  // Centripetal parameterization.
  std::vector<double> u(n, 0.0);
  for (int i = 1; i < n; ++i) {
    const double dx = points[i].x - points[i - 1].x;
    const double dy = points[i].y - points[i - 1].y;
    u[i] = u[i - 1] + std::sqrt(std::sqrt(dx * dx + dy * dy));
  }
  if (u[n - 1] > 0.0) {
    for (int i = 0; i < n; ++i) u[i] /= u[n - 1];
  } else {
    for (int i = 0; i < n; ++i) u[i] = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
  }

  const int m = std::min(n, std::max(4, n / 10));

  // Clamped knot vector with uniform interior knots.
  std::vector<double> knots(m + degree + 1, 0.0);
  for (int i = 0; i <= degree; ++i) knots[m + i] = 1.0;
  for (int i = 1; i < m - degree; ++i)
    knots[degree + i] = static_cast<double>(i) / (m - degree);

  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, m);
  std::vector<double> row;
  for (int i = 0; i < n; ++i) {
    int span = degree;
    while (span < m - 1 && u[i] >= knots[span + 1]) ++span;
    basis_functions(span, u[i], degree, knots, row);
    for (int j = 0; j <= degree; ++j) basis(i, span - degree + j) = row[j];
  }

  Eigen::MatrixXd rhs(n, 2);
  for (int i = 0; i < n; ++i) {
    rhs(i, 0) = points[i].x;
    rhs(i, 1) = points[i].y;
  }
  const Eigen::MatrixXd sol = basis.colPivHouseholderQr().solve(rhs);

  std::vector<Point2d> ctrl(m);
  for (int j = 0; j < m; ++j) ctrl[j] = {sol(j, 0), sol(j, 1)};
  return BSplineCurve(degree, std::move(ctrl), std::move(knots));
}

}  // namespace meibo::imgproc
