// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "meibo/metrics.hpp"
#include "meibo/phantom.hpp"

using namespace meibo;
using phantom::GlandModel;
using phantom::PhantomSpec;

namespace {

PhantomSpec straight_spec(int count, double width) {
  PhantomSpec spec;
  spec.seed = 5;
  for (int i = 0; i < count; ++i) {
    GlandModel g;
    g.base_x = 200.0 + 60.0 * i;
    g.top_y = 140.0;
    g.extent_y = 270.0;
    g.width = width;
    spec.glands.push_back(g);
  }
  return spec;
}

}  // namespace

TEST_CASE("default spec renders at the acquisition resolution, deterministically") {
  const auto spec = phantom::default_spec(12, 3);
  const auto a = phantom::generate(spec);
  const auto b = phantom::generate(spec);
  CHECK(a.image.width() == 1088);
  CHECK(a.image.height() == 512);
  CHECK(a.image == b.image);
  CHECK(a.truth.roi == b.truth.roi);
  CHECK(a.truth.gland_signal == b.truth.gland_signal);
  CHECK(a.truth.glands.size() == 12);
}

TEST_CASE("noise and lashes stay deterministic under a fixed seed") {
  auto spec = phantom::default_spec(10, 4);
  spec.noise_sigma = 8.0;
  spec.lash_count = 6;
  const auto a = phantom::generate(spec);
  const auto b = phantom::generate(spec);
  CHECK(a.image == b.image);
  CHECK(a.truth.gland_signal == b.truth.gland_signal);  // truth is noise-free
}

TEST_CASE("straight constant-width glands have zero TI and DI in truth") {
  const auto p = phantom::generate(straight_spec(12, 12.0));
  REQUIRE(p.truth.gland_metrics.size() == 12);
  for (const auto& t : p.truth.gland_metrics) {
    CHECK(t.tortuosity == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(t.deformation_mm == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(t.width_mm == doctest::Approx(12.0 * 0.03));
    CHECK(t.length_mm == doctest::Approx(270.0 * 0.03));
  }
}

TEST_CASE("truth masks are disjoint and inside the ROI") {
  const auto p = phantom::generate(phantom::default_spec(12, 7));
  BinaryMask seen(p.image.width(), p.image.height());
  for (const auto& g : p.truth.glands) {
    for (int y = 0; y < g.height(); ++y) {
      for (int x = 0; x < g.width(); ++x) {
        if (!g.at(x, y)) continue;
        CHECK(!seen.at(x, y));
        seen.at(x, y) = 1;
        CHECK(p.truth.roi.at(x, y) == 1);
      }
    }
  }
  CHECK(seen == p.truth.gland_signal);
}

TEST_CASE("noise-free SI truth equals the closed-form log ratio") {
  const auto p = phantom::generate(straight_spec(10, 12.0));
  CHECK(p.truth.si == doctest::Approx(std::log10(170.0 / 110.0)).epsilon(1e-12));
  CHECK(p.truth.si_scaled == doctest::Approx(100.0 * std::log10(170.0 / 110.0)));
}

TEST_CASE("analytic ribbon area matches the counted GA within half a point") {
  const auto spec = straight_spec(10, 12.0);
  const auto p = phantom::generate(spec);
  double gland_area = 0.0;
  for (const auto& g : spec.glands) {
    const double r = g.width / 2.0;
    gland_area += g.width * g.extent_y + std::numbers::pi * r * r;
  }
  const double roi_area = static_cast<double>(p.truth.roi.count());
  const double analytic_ga = 100.0 * gland_area / roi_area;
  CHECK(std::abs(analytic_ga - p.truth.ga_percent) < 0.5);
}

TEST_CASE("sinusoid quadrature length matches the pixel-traced centerline") {
  PhantomSpec spec;
  GlandModel g;
  g.base_x = 400.0;
  g.top_y = 120.0;
  g.extent_y = 280.0;
  g.width = 14.0;
  g.amplitude = 18.0;
  g.period = 160.0;
  spec.glands.push_back(g);
  const auto p = phantom::generate(spec);

  const auto centerline = metrics::extract_centerline(p.truth.glands[0]);
  const double quadrature_px = p.truth.gland_metrics[0].length_mm / 0.03;
  CHECK(std::abs(centerline.arc_length_px - quadrature_px) / quadrature_px < 0.02);
}

TEST_CASE("infeasible specs are rejected") {
  // Outside the eyelid margin.
  PhantomSpec outside;
  GlandModel g;
  g.base_x = 60.0;  // ellipse x-extent starts at 44; tube pokes out
  g.top_y = 200.0;
  g.extent_y = 150.0;
  g.width = 12.0;
  outside.glands.push_back(g);
  CHECK_THROWS_AS(phantom::generate(outside), SpecInfeasible);

  // Overlapping glands.
  PhantomSpec overlap = straight_spec(1, 12.0);
  overlap.glands.push_back(overlap.glands[0]);
  CHECK_THROWS_AS(phantom::generate(overlap), SpecInfeasible);

  // Inverted contrast.
  PhantomSpec inverted = straight_spec(1, 12.0);
  inverted.gland_intensity = 100;
  CHECK_THROWS_AS(phantom::generate(inverted), SpecInfeasible);
}

TEST_CASE("JSON spec parsing") {
  const auto spec = phantom::parse_spec_json(R"({
    "width": 512, "height": 256, "seed": 9,
    "eyelid": {"cx": 256, "cy": 128, "rx": 220, "ry": 100},
    "intensity": {"gland": 180, "eyelid": 100},
    "noise_sigma": 4.5,
    "glands": [
      {"base_x": 200, "top_y": 60, "extent_y": 120, "width": 10},
      {"base_x": 300, "top_y": 60, "extent_y": 120, "width": 12,
       "amplitude": 6, "period": 90, "width_model": "sinusoid", "width_amp": 2}
    ]
  })");
  CHECK(spec.width == 512);
  CHECK(spec.seed == 9);
  CHECK(spec.eyelid.rx == 220.0);
  CHECK(spec.gland_intensity == 180);
  CHECK(spec.noise_sigma == 4.5);
  REQUIRE(spec.glands.size() == 2);
  CHECK(spec.glands[1].width_model == GlandModel::WidthModel::Sinusoid);

  const auto corpus = phantom::parse_spec_corpus_json(R"({"corpus": [
    {"gland_count": 4, "seed": 1}, {"gland_count": 5, "seed": 2}
  ]})");
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].glands.size() == 4);
  CHECK(corpus[1].glands.size() == 5);
}
