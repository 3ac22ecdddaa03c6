// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "meibo/report.hpp"
#include "testutil.hpp"

using namespace meibo;
using testutil::filled_rect;

namespace {

metrics::ImageReport sample_report() {
  metrics::ImageReport r;
  r.image_name = "sample";
  r.r_mm_per_px = 0.03;
  r.roi_area_px = 123456;
  r.ga_percent = 39.84123456;
  r.si = 0.30102999;
  r.si_scaled = 30.102999;
  metrics::GlandMetrics g1;
  g1.label = 1;
  g1.area_px = 4000;
  g1.length_mm = 6.551234567;
  g1.width_mm = 0.35;
  g1.deformation_mm = 0.07;
  g1.tortuosity = 0.13;
  metrics::GlandMetrics g2;
  g2.label = 2;
  g2.area_px = 1500;
  g2.flags = {"degenerate_gland"};
  r.glands = {g1, g2};
  metrics::Aggregate agg;
  agg.mean = 6.551234567;
  agg.sd = 0.0;
  agg.n = 1;
  r.length_mm = agg;
  return r;
}

}  // namespace

TEST_CASE("JSON report follows the schema with 4-decimal rounding") {
  const std::string text = report::to_json(sample_report());
  const auto j = nlohmann::json::parse(text);
  CHECK(j["schema"] == "meibo-report/1");
  CHECK(j["image"] == "sample");
  CHECK(j["R_mm_per_px"] == 0.03);
  CHECK(j["roi"]["area_px"] == 123456);
  CHECK(j["GA_percent"] == 39.8412);
  CHECK(j["SI"] == 0.301);
  CHECK(j["SI_scaled"] == 30.103);
  REQUIRE(j["glands"].size() == 2);
  CHECK(j["glands"][0]["label"] == 1);
  CHECK(j["glands"][0]["L_mm"] == 6.5512);
  CHECK(j["glands"][1]["L_mm"].is_null());
  CHECK(j["glands"][1]["flags"][0] == "degenerate_gland");
  CHECK(j["aggregates"]["L_mean"] == 6.5512);
  CHECK(j["aggregates"]["D_mean"].is_null());
  CHECK(j["errors"].empty());

  // Deterministic serialization.
  CHECK(report::to_json(sample_report()) == text);
}

TEST_CASE("CSV rows flatten the per-gland table") {
  const std::string rows = report::to_csv_rows(sample_report());
  CHECK(rows ==
        "sample,1,4000,6.5512,0.3500,0.0700,0.1300,\n"
        "sample,2,1500,,,,,degenerate_gland\n");
  CHECK(report::csv_header() == "image,label,area_px,L_mm,D_mm,DI_mm,TI,flags\n");
}

TEST_CASE("overlay paints the ROI ring red and gland contours from the palette") {
  const GrayImage img(40, 40, 120);
  roi::RoiResult roi;
  roi.roi_mask = filled_rect(40, 40, 5, 5, 34, 34);
  roi.area = 30 * 30;

  glands::GlandSet gs;
  glands::GlandInfo info;
  info.label = 1;
  info.mask = filled_rect(40, 40, 12, 10, 19, 29);
  info.min_x = 12;
  info.min_y = 10;
  info.max_x = 19;
  info.max_y = 29;
  gs.glands.push_back(std::move(info));
  gs.gland_signal = gs.glands[0].mask;

  const io::RgbImage rgb = report::render_overlay(img, roi, gs);
  REQUIRE(rgb.width == 40);
  // ROI boundary pixel (5,5) is on the mask's inner ring.
  const auto px = [&](int x, int y) {
    const std::size_t i = (static_cast<std::size_t>(y) * 40 + x) * 3;
    return std::array<std::uint8_t, 3>{rgb.data[i], rgb.data[i + 1], rgb.data[i + 2]};
  };
  CHECK(px(5, 5) == std::array<std::uint8_t, 3>{230, 30, 30});
  // Gland contour pixel (12,20) takes the first palette color.
  CHECK(px(12, 20) == std::array<std::uint8_t, 3>{250, 220, 40});
  // Far corner stays grayscale.
  CHECK(px(1, 1) == std::array<std::uint8_t, 3>{120, 120, 120});
}
