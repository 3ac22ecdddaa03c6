// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "meibo/evalseg.hpp"
#include "meibo/imgproc.hpp"
#include "meibo/phantom.hpp"
#include "meibo/roi.hpp"
#include "testutil.hpp"

using namespace meibo;

TEST_CASE("reflection mask: flat field gives nothing") {
  const GrayImage img(128, 128, 90);
  CHECK(roi::build_reflection_mask(img).empty());
}

TEST_CASE("reflection mask: covers painted lash streaks and includes the raw mask") {
  GrayImage img(256, 256, 100);
  std::mt19937 rng(6);
  std::uniform_int_distribution<int> xd(30, 225);
  std::vector<std::pair<int, int>> streak_px;
  for (int s = 0; s < 8; ++s) {
    const int x0 = xd(rng);
    for (int y = 40; y < 100; ++y) {
      img.at(x0, y) = 245;
      img.at(x0 + 1, y) = 245;
      streak_px.emplace_back(x0, y);
      streak_px.emplace_back(x0 + 1, y);
    }
  }
  const BinaryMask mask = roi::build_reflection_mask(img);
  std::size_t covered = 0;
  for (const auto& [x, y] : streak_px) covered += mask.at(x, y);
  CHECK(static_cast<double>(covered) >= 0.9 * static_cast<double>(streak_px.size()));

  // Dilation is extensive: the mask contains the thresholded Prewitt response.
  const BinaryMask raw =
      imgproc::threshold(imgproc::prewitt(img), imgproc::ThresholdMethod::otsu());
  for (int y = 0; y < 256; ++y)
    for (int x = 0; x < 256; ++x)
      if (raw.at(x, y)) CHECK(mask.at(x, y) == 1);
}

TEST_CASE("segment_roi: blank image raises NoEyelidDetected") {
  CHECK_THROWS_AS(roi::segment_roi(GrayImage(256, 128, 100)), NoEyelidDetected);
  CHECK_THROWS_AS(roi::segment_roi(GrayImage(32, 32, 0)), ImageTooSmall);
}

TEST_CASE("segment_roi: recovers the phantom eyelid") {
  const auto p = phantom::generate(phantom::default_spec(12, 31));
  const auto result = roi::segment_roi(p.image);

  const auto s = evalseg::score(p.truth.roi, result.roi_mask);
  CHECK(s.k >= 0.90);

  // Single 8-connected component.
  CHECK(imgproc::label_components(result.roi_mask, 8).count() == 1);
  CHECK(result.area == static_cast<std::int64_t>(result.roi_mask.count()));

  // Monotone column structure: at most one contiguous run per column.
  for (int x = 0; x < result.roi_mask.width(); ++x) {
    int transitions = 0;
    bool prev = false;
    for (int y = 0; y < result.roi_mask.height(); ++y) {
      const bool cur = result.roi_mask.at(x, y) != 0;
      if (cur != prev) ++transitions;
      prev = cur;
    }
    CHECK(transitions <= 2);
  }

  // Bounded convex deficiency.
  const BinaryMask hull = imgproc::convex_hull(result.roi_mask);
  CHECK(static_cast<double>(hull.count()) / static_cast<double>(result.roi_mask.count()) <= 1.1);
}

TEST_CASE("segment_roi: deterministic") {
  const auto p = phantom::generate(phantom::default_spec(10, 32));
  const auto a = roi::segment_roi(p.image);
  const auto b = roi::segment_roi(p.image);
  CHECK(a.roi_mask == b.roi_mask);
  CHECK(a.area == b.area);
}

TEST_CASE("segment_roi: trace intermediates share the input dimensions") {
  const auto p = phantom::generate(phantom::default_spec(8, 33));
  roi::RoiTrace trace;
  const auto result = roi::segment_roi(p.image, {}, &trace);
  CHECK(result.area > 0);
  for (const BinaryMask* m :
       {&trace.reflection_mask, &trace.binary_inverted, &trace.binary_masked,
        &trace.cleaned_blocks, &trace.hull, &trace.eyelid_block}) {
    CHECK(m->width() == p.image.width());
    CHECK(m->height() == p.image.height());
  }
  CHECK(trace.masked_input.width() == p.image.width());
  CHECK(trace.enhanced.width() == p.image.width());
}
