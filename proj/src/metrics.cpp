// SPDX-License-Identifier: Apache-2.0

#include "meibo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "meibo/components.hpp"
#include "meibo/imgproc.hpp"

namespace meibo::metrics {

namespace {

constexpr double kDiag = std::numbers::sqrt2;

struct SkeletonGraph {
  std::vector<std::pair<int, int>> pixels;
  std::vector<int> index;  // row-major pixel -> node index or -1
  int width = 0, height = 0;

  int node_at(int x, int y) const {
    if (x < 0 || y < 0 || x >= width || y >= height) return -1;
    return index[static_cast<std::size_t>(y) * width + x];
  }
};

SkeletonGraph build_graph(const BinaryMask& skel) {
  SkeletonGraph g;
  g.width = skel.width();
  g.height = skel.height();
  g.index.assign(static_cast<std::size_t>(g.width) * g.height, -1);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (!skel.at(x, y)) continue;
      g.index[static_cast<std::size_t>(y) * g.width + x] =
          static_cast<int>(g.pixels.size());
      g.pixels.emplace_back(x, y);
    }
  }
  return g;
}

// Farthest node from `start` by cumulative Euclidean step length over a BFS
// spanning tree (neighbors visited in a fixed order for determinism).
std::pair<int, std::vector<int>> farthest_node(const SkeletonGraph& g, int start) {
  static const int dx[8] = {0, 1, 0, -1, 1, 1, -1, -1};
  static const int dy[8] = {-1, 0, 1, 0, -1, 1, 1, -1};
  std::vector<double> dist(g.pixels.size(), -1.0);
  std::vector<int> parent(g.pixels.size(), -1);
  std::vector<int> queue{start};
  dist[start] = 0.0;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int u = queue[qi];
    const auto [ux, uy] = g.pixels[u];
    for (int d = 0; d < 8; ++d) {
      const int v = g.node_at(ux + dx[d], uy + dy[d]);
      if (v < 0 || dist[v] >= 0.0) continue;
      dist[v] = dist[u] + (d < 4 ? 1.0 : kDiag);
      parent[v] = u;
      queue.push_back(v);
    }
  }
  int best = start;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (dist[i] > dist[best]) best = static_cast<int>(i);
  return {best, parent};
}

std::vector<Point2d> moving_average(const std::vector<Point2d>& pts, int window) {
  const int n = static_cast<int>(pts.size());
  const int half = window / 2;
  std::vector<Point2d> out(n);
  for (int i = 0; i < n; ++i) {
    const int a = std::max(0, i - half);
    const int b = std::min(n - 1, i + half);
    double sx = 0.0, sy = 0.0;
    for (int j = a; j <= b; ++j) {
      sx += pts[j].x;
      sy += pts[j].y;
    }
    out[i] = {sx / (b - a + 1), sy / (b - a + 1)};
  }
  return out;
}

double polyline_length(const std::vector<Point2d>& pts) {
  double s = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    s += std::hypot(pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y);
  return s;
}

// Positions at arc lengths 0, spacing, 2*spacing, ... along the polyline.
std::vector<Point2d> resample(const std::vector<Point2d>& pts, double spacing) {
  std::vector<Point2d> out;
  if (pts.empty()) return out;
  out.push_back(pts.front());
  double target = spacing;
  double travelled = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double seg = std::hypot(pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y);
    while (seg > 0.0 && travelled + seg >= target) {
      const double t = (target - travelled) / seg;
      out.push_back({pts[i - 1].x + t * (pts[i].x - pts[i - 1].x),
                     pts[i - 1].y + t * (pts[i].y - pts[i - 1].y)});
      target += spacing;
    }
    travelled += seg;
  }
  return out;
}

// Unit tangents by centered finite differences (one-sided at the ends).
std::vector<Point2d> tangents(const std::vector<Point2d>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<Point2d> out(n);
  for (int i = 0; i < n; ++i) {
    const Point2d& a = pts[std::max(0, i - 1)];
    const Point2d& b = pts[std::min(n - 1, i + 1)];
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len = std::hypot(dx, dy);
    out[i] = len > 0.0 ? Point2d{dx / len, dy / len} : Point2d{1.0, 0.0};
  }
  return out;
}

inline double wrap_angle(double a) {
  while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

}  // namespace

Centerline extract_centerline(const BinaryMask& gland, const MetricParams& params) {
  const BinaryMask skel = imgproc::skeletonize(gland);
  const SkeletonGraph g = build_graph(skel);
  if (g.pixels.size() < 2)
    throw DegenerateGland("extract_centerline: skeleton has fewer than 2 pixels");

  // Tree-diameter style double sweep for the longest path.
  const auto [end_a, parents_a] = farthest_node(g, 0);
  const auto [end_b, parents_b] = farthest_node(g, end_a);
  std::vector<Point2d> path;
  for (int v = end_b; v >= 0; v = parents_b[v])
    path.push_back({static_cast<double>(g.pixels[v].first),
                    static_cast<double>(g.pixels[v].second)});
  if (path.size() < 2)
    throw DegenerateGland("extract_centerline: longest path is a single pixel");

  // Endpoint M is the one with the smaller y.
  const Point2d& front = path.front();
  const Point2d& back = path.back();
  if (back.y < front.y || (back.y == front.y && back.x < front.x))
    std::reverse(path.begin(), path.end());

  Centerline c;
  c.points = moving_average(path, params.smoothing_window);
  c.arc_length_px = polyline_length(c.points);
  c.chord_length_px = std::hypot(c.points.back().x - c.points.front().x,
                                 c.points.back().y - c.points.front().y);
  return c;
}

double gland_length(const Centerline& c, double r_mm_per_px) {
  return r_mm_per_px * c.arc_length_px;
}

WidthProfile width_profile(const BinaryMask& gland, const Centerline& c,
                           const MetricParams& params) {
  const auto samples = resample(c.points, params.sample_spacing_px);
  const auto tans = tangents(samples);

  WidthProfile profile;
  profile.spacing_px = params.sample_spacing_px;
  const double step = 0.25;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double nx = -tans[i].y, ny = tans[i].x;
    const auto pixel_of = [&](double a) {
      return std::pair<long, long>{std::lround(samples[i].x + a * nx),
                                   std::lround(samples[i].y + a * ny)};
    };
    const auto [cx, cy] = pixel_of(0.0);
    if (!gland.test(static_cast<int>(cx), static_cast<int>(cy))) continue;

    bool exited_image = false;
    double reach[2] = {0.0, 0.0};
    for (int dir = 0; dir < 2; ++dir) {
      const double sign = dir == 0 ? 1.0 : -1.0;
      double a = step;
      while (true) {
        const auto [px, py] = pixel_of(sign * a);
        if (!gland.in_bounds(static_cast<int>(px), static_cast<int>(py))) {
          exited_image = true;
          break;
        }
        if (!gland.at(static_cast<int>(px), static_cast<int>(py))) break;
        reach[dir] = a;
        a += step;
      }
      if (exited_image) break;
    }
    if (exited_image) continue;
    // Chord between the outermost foreground hits; a single-pixel-thick
    // section counts as width 1.
    const double d = std::max(1.0, reach[0] + reach[1]);
    profile.widths_px.push_back(d);
    profile.positions_px.push_back(samples[i]);
  }
  if (profile.widths_px.empty())
    throw NoValidSamples("width_profile: every sample was dropped");
  return profile;
}

double gland_width(const WidthProfile& w, double r_mm_per_px) {
  double sum = 0.0;
  for (double d : w.widths_px) sum += d;
  return r_mm_per_px * sum / static_cast<double>(w.widths_px.size());
}

double deformation_index(const WidthProfile& w, double r_mm_per_px) {
  const std::size_t n = w.widths_px.size();
  double mean = 0.0;
  for (double d : w.widths_px) mean += d;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double d : w.widths_px) ss += (d - mean) * (d - mean);
  return r_mm_per_px * std::sqrt(ss / static_cast<double>(n));
}

double tortuosity_index(const Centerline& c, double r_mm_per_px,
                        const MetricParams& params) {
  if (c.chord_length_px <= 0.0)
    throw DegenerateChord("tortuosity_index: endpoints coincide");
  const auto samples = resample(c.points, params.sample_spacing_px);
  if (samples.size() < 3) {
    // Too short to estimate curvature; a straight stub has zero turning.
    return 0.0;
  }
  const auto tans = tangents(samples);
  double sum = 0.0;
  int n = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double a1 = std::atan2(tans[i].y, tans[i].x);
    const double a0 = std::atan2(tans[i - 1].y, tans[i - 1].x);
    const double da = wrap_angle(a1 - a0);
    sum += std::abs(da) / (r_mm_per_px * params.sample_spacing_px);
    ++n;
  }
  const double ratio = c.arc_length_px / c.chord_length_px;
  return ratio * sum / static_cast<double>(n);
}

double area_ratio(const BinaryMask& gland_signal, const roi::RoiResult& roi) {
  if (roi.area <= 0) throw EmptyRoi("area_ratio: empty ROI");
  if (!gland_signal.same_size(roi.roi_mask))
    throw DimensionMismatch("area_ratio: mask dimensions differ");
  std::int64_t overlap = 0;
  for (int y = 0; y < gland_signal.height(); ++y)
    for (int x = 0; x < gland_signal.width(); ++x)
      if (gland_signal.at(x, y) && roi.roi_mask.at(x, y)) ++overlap;
  return 100.0 * static_cast<double>(overlap) / static_cast<double>(roi.area);
}

SignalIndex signal_index(const GrayImage& img, const glands::GlandSet& gs,
                         const roi::RoiResult& roi) {
  if (gs.glands.empty())
    throw Error("signal_index: no labeled glands");

  std::int64_t gland_sum = 0, gland_n = 0;
  for (const auto& g : gs.glands) {
    for (int y = g.min_y; y <= g.max_y; ++y) {
      for (int x = g.min_x; x <= g.max_x; ++x) {
        if (!g.mask.at(x, y)) continue;
        gland_sum += img.at(x, y);
        ++gland_n;
      }
    }
  }

  std::int64_t bg_sum = 0, bg_n = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!roi.roi_mask.at(x, y) || gs.gland_signal.at(x, y)) continue;
      bg_sum += img.at(x, y);
      ++bg_n;
    }
  }
  if (gland_n == 0) throw Error("signal_index: no gland pixels");
  if (bg_n == 0 || bg_sum == 0)
    throw ZeroBackground("signal_index: non-gland ROI area is empty or black");

  const double grey_i = static_cast<double>(gland_sum) / static_cast<double>(gland_n);
  const double grey_0 = static_cast<double>(bg_sum) / static_cast<double>(bg_n);
  SignalIndex si;
  si.si = std::log10(grey_i / grey_0);
  si.si_scaled = 100.0 * si.si;
  return si;
}

namespace {

std::optional<Aggregate> aggregate(const std::vector<GlandMetrics>& glands,
                                   std::optional<double> GlandMetrics::*field) {
  Aggregate agg;
  double sum = 0.0;
  for (const auto& g : glands) {
    if (!(g.*field)) continue;
    sum += *(g.*field);
    ++agg.n;
  }
  if (agg.n == 0) return std::nullopt;
  agg.mean = sum / agg.n;
  double ss = 0.0;
  for (const auto& g : glands) {
    if (!(g.*field)) continue;
    ss += (*(g.*field) - agg.mean) * (*(g.*field) - agg.mean);
  }
  agg.sd = std::sqrt(ss / agg.n);
  return agg;
}

}  // namespace

AnalyzeOutput analyze(const GrayImage& img, const AnalyzeParams& params,
                      roi::RoiTrace* trace) {
  AnalyzeOutput out;
  out.report.r_mm_per_px = params.r_mm_per_px;

  out.roi = roi::segment_roi(img, params.roi, trace);
  out.report.roi_area_px = out.roi.area;

  const BinaryMask signal = glands::segment_gland_signal(img, out.roi, params.glands);
  out.glands = glands::extract_glands(signal, params.glands);
  out.report.ga_percent = area_ratio(signal, out.roi);

  for (const auto& g : out.glands.glands) {
    GlandMetrics gm;
    gm.label = g.label;
    gm.area_px = g.area;
    try {
      const Centerline c = extract_centerline(g.mask, params.metrics);
      gm.length_mm = gland_length(c, params.r_mm_per_px);
      try {
        const WidthProfile wp = width_profile(g.mask, c, params.metrics);
        gm.width_mm = gland_width(wp, params.r_mm_per_px);
        gm.deformation_mm = deformation_index(wp, params.r_mm_per_px);
      } catch (const NoValidSamples&) {
        gm.flags.push_back("no_valid_width_samples");
      }
      try {
        gm.tortuosity = tortuosity_index(c, params.r_mm_per_px, params.metrics);
      } catch (const DegenerateChord&) {
        gm.flags.push_back("degenerate_chord");
      }
    } catch (const DegenerateGland&) {
      gm.flags.push_back("degenerate_gland");
    }
    out.report.glands.push_back(std::move(gm));
  }

  if (!out.glands.glands.empty()) {
    try {
      const SignalIndex si = signal_index(img, out.glands, out.roi);
      out.report.si = si.si;
      out.report.si_scaled = si.si_scaled;
    } catch (const Error& e) {
      out.report.errors.push_back(e.what());
    }
  }

  out.report.length_mm = aggregate(out.report.glands, &GlandMetrics::length_mm);
  out.report.width_mm = aggregate(out.report.glands, &GlandMetrics::width_mm);
  out.report.deformation_mm = aggregate(out.report.glands, &GlandMetrics::deformation_mm);
  out.report.tortuosity = aggregate(out.report.glands, &GlandMetrics::tortuosity);
  return out;
}

}  // namespace meibo::metrics
