// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "meibo/bspline.hpp"
#include "meibo/glands.hpp"
#include "meibo/image.hpp"
#include "meibo/roi.hpp"

namespace meibo::metrics {

using imgproc::Point2d;

/// Ordered gland centerline from endpoint M (smaller y) to endpoint N.
struct Centerline {
  std::vector<Point2d> points;  ///< smoothed positions, ~1 px apart
  double arc_length_px = 0.0;   ///< l_MN
  double chord_length_px = 0.0; ///< l'_MN, straight-line |MN|
};

/// Local gland widths sampled every `spacing_px` of arc length.
struct WidthProfile {
  std::vector<double> widths_px;
  std::vector<Point2d> positions_px;  ///< centerline sample of each width
  double spacing_px = 3.0;
};

struct MetricParams {
  double sample_spacing_px = 3.0;
  int smoothing_window = 5;
};

/// Skeletonizes the gland and keeps the longest endpoint-to-endpoint path.
/// Throws DegenerateGland if the skeleton has fewer than 2 pixels.
Centerline extract_centerline(const BinaryMask& gland,
                              const MetricParams& params = {});

/// L = R * l_MN, in mm.
double gland_length(const Centerline& c, double r_mm_per_px);

/// Perpendicular chords to the gland contour at every 3 px of arc length.
/// Samples whose ray leaves the image are dropped; throws NoValidSamples if
/// none survive.
WidthProfile width_profile(const BinaryMask& gland, const Centerline& c,
                           const MetricParams& params = {});

/// D = R * mean(d_i), in mm.
double gland_width(const WidthProfile& w, double r_mm_per_px);

/// DI: population standard deviation of R * d_i, in mm.
double deformation_index(const WidthProfile& w, double r_mm_per_px);

/// TI = (l_MN / l'_MN) * mean |delta_alpha / (R * delta_s)|, with tangents
/// from centered differences on the 3-px resampled centerline. Throws
/// DegenerateChord when the endpoints coincide.
double tortuosity_index(const Centerline& c, double r_mm_per_px,
                        const MetricParams& params = {});

/// GA = |gland_signal intersect roi| / roi.area * 100. Throws EmptyRoi.
double area_ratio(const BinaryMask& gland_signal, const roi::RoiResult& roi);

struct SignalIndex {
  double si = 0.0;         ///< lg(mean gland grey / mean non-gland ROI grey)
  double si_scaled = 0.0;  ///< 100 * si
};

/// Mean raw intensity of the labeled glands against the non-gland ROI area.
/// Throws ZeroBackground when the background mean is zero, Error when the
/// gland set is empty.
SignalIndex signal_index(const GrayImage& img, const glands::GlandSet& gs,
                         const roi::RoiResult& roi);

struct GlandMetrics {
  int label = 0;
  std::int64_t area_px = 0;
  std::optional<double> length_mm;
  std::optional<double> width_mm;
  std::optional<double> deformation_mm;
  std::optional<double> tortuosity;
  std::vector<std::string> flags;
};

struct Aggregate {
  double mean = 0.0;
  double sd = 0.0;  ///< population SD
  int n = 0;
};

struct ImageReport {
  std::string image_name;
  double r_mm_per_px = 0.0;
  std::int64_t roi_area_px = 0;
  double ga_percent = 0.0;
  std::optional<double> si;
  std::optional<double> si_scaled;
  std::vector<GlandMetrics> glands;
  std::optional<Aggregate> length_mm;
  std::optional<Aggregate> width_mm;
  std::optional<Aggregate> deformation_mm;
  std::optional<Aggregate> tortuosity;
  std::vector<std::string> errors;
};

struct AnalyzeParams {
  double r_mm_per_px = 0.03;
  roi::RoiParams roi;
  glands::GlandParams glands;
  MetricParams metrics;
};

struct AnalyzeOutput {
  ImageReport report;
  roi::RoiResult roi;
  glands::GlandSet glands;
};

/// Full pipeline: ROI, gland segmentation, per-gland metrics, aggregates.
/// Propagates NoEyelidDetected; per-gland failures become flags.
AnalyzeOutput analyze(const GrayImage& img, const AnalyzeParams& params = {},
                      roi::RoiTrace* trace = nullptr);

}  // namespace meibo::metrics
