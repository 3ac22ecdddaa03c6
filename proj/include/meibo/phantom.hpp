// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meibo/image.hpp"

namespace meibo::phantom {

/// Sinusoidal gland centerline x(y) = base_x + amplitude * sin(2*pi*(y -
/// top_y) / period + phase) over y in [top_y, top_y + extent_y], rendered as a
/// ribbon of the local width.
struct GlandModel {
  double base_x = 0.0;
  double top_y = 0.0;
  double extent_y = 200.0;
  double width = 12.0;  ///< mean full width, px
  double amplitude = 0.0;
  double period = 200.0;
  double phase = 0.0;

  enum class WidthModel { Constant, Sinusoid, Step };
  WidthModel width_model = WidthModel::Constant;
  double width_amp = 0.0;
  double width_period = 150.0;
  double width_phase = 0.0;
  double width2 = 0.0;          ///< Step model: width after the switch
  double step_fraction = 0.5;   ///< Step model: switch point along the extent
};

struct EyelidModel {
  double cx = 544.0;
  double cy = 276.0;
  double rx = 500.0;
  double ry = 215.0;
};

struct PhantomSpec {
  int width = 1088;
  int height = 512;
  std::uint32_t seed = 1;
  EyelidModel eyelid;
  std::uint8_t outside_intensity = 30;
  std::uint8_t eyelid_intensity = 110;
  std::uint8_t gland_intensity = 170;
  std::uint8_t lash_intensity = 235;
  double noise_sigma = 0.0;
  int lash_count = 0;
  double illumination_gradient = 0.0;  ///< intensity delta across the width
  std::vector<GlandModel> glands;
};

/// Closed-form / quadrature gland metrics from the generative model.
struct GlandTruth {
  double length_mm = 0.0;
  double width_mm = 0.0;
  double deformation_mm = 0.0;
  double tortuosity = 0.0;
};

struct PhantomTruth {
  BinaryMask roi;
  std::vector<BinaryMask> glands;
  BinaryMask gland_signal;
  std::vector<GlandTruth> gland_metrics;
  double ga_percent = 0.0;
  double si = 0.0;
  double si_scaled = 0.0;
};

struct Phantom {
  GrayImage image;
  PhantomTruth truth;
};

/// Renders the observed image (noise, lashes, gradient) and the noise-free
/// truth. The same seed always produces byte-identical output. Throws
/// SpecInfeasible when glands leave the eyelid margin, overlap, or invert the
/// gland/background contrast.
Phantom generate(const PhantomSpec& spec, double r_mm_per_px = 0.03);

/// A plausible eyelid with `gland_count` glands of seeded width/curvature
/// jitter, conforming to the eyelid ellipse.
PhantomSpec default_spec(int gland_count = 12, std::uint32_t seed = 1);

/// Parses the JSON spec format used by the CLI; missing fields keep their
/// defaults. A top-level {"corpus": [...]} holds several specs.
PhantomSpec parse_spec_json(const std::string& text);
std::vector<PhantomSpec> parse_spec_corpus_json(const std::string& text);

}  // namespace meibo::phantom
