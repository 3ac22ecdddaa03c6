// SPDX-License-Identifier: Apache-2.0

#include "meibo/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

namespace meibo::phantom {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

double centerline_x(const GlandModel& g, double y) {
  return g.base_x + g.amplitude * std::sin(kTau * (y - g.top_y) / g.period + g.phase);
}

double centerline_dxdy(const GlandModel& g, double y) {
  return g.amplitude * (kTau / g.period) *
         std::cos(kTau * (y - g.top_y) / g.period + g.phase);
}

double local_width(const GlandModel& g, double y) {
  switch (g.width_model) {
    case GlandModel::WidthModel::Constant:
      return g.width;
    case GlandModel::WidthModel::Sinusoid:
      return g.width +
             g.width_amp * std::sin(kTau * (y - g.top_y) / g.width_period + g.width_phase);
    case GlandModel::WidthModel::Step:
      return (y - g.top_y) < g.step_fraction * g.extent_y ? g.width : g.width2;
  }
  return g.width;
}

// Paint every pixel whose center lies within the local half-width of the
// centerline, by stamping disks along a fine parameter walk.
BinaryMask render_gland(const GlandModel& g, int width, int height) {
  BinaryMask mask(width, height);
  const double dy = 0.25;
  for (double y = g.top_y; y <= g.top_y + g.extent_y + 1e-9; y += dy) {
    const double cx = centerline_x(g, y);
    const double r = local_width(g, y) / 2.0;
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - r)));
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(cx + r)));
    const int py0 = std::max(0, static_cast<int>(std::floor(y - r)));
    const int py1 = std::min(height - 1, static_cast<int>(std::ceil(y + r)));
    for (int py = py0; py <= py1; ++py) {
      for (int px = x0; px <= x1; ++px) {
        const double dx = px - cx, dyp = py - y;
        if (dx * dx + dyp * dyp <= r * r) mask.at(px, py) = 1;
      }
    }
  }
  return mask;
}

GlandTruth gland_truth(const GlandModel& g, double r_mm_per_px) {
  const int n = 20000;
  const double dy = g.extent_y / n;

  double arc = 0.0, turn = 0.0;
  double w_sum = 0.0, w2_sum = 0.0;
  double prev_alpha = std::atan2(1.0, centerline_dxdy(g, g.top_y));
  for (int i = 0; i < n; ++i) {
    const double ym = g.top_y + (i + 0.5) * dy;
    const double slope = centerline_dxdy(g, ym);
    const double ds = std::sqrt(1.0 + slope * slope) * dy;
    arc += ds;
    const double w = local_width(g, ym);
    w_sum += w * ds;
    w2_sum += w * w * ds;
    const double alpha = std::atan2(1.0, centerline_dxdy(g, g.top_y + (i + 1) * dy));
    turn += std::abs(alpha - prev_alpha);
    prev_alpha = alpha;
  }
  const double chord = std::hypot(centerline_x(g, g.top_y + g.extent_y) -
                                      centerline_x(g, g.top_y),
                                  g.extent_y);
  const double mean_w = w_sum / arc;
  const double var_w = std::max(0.0, w2_sum / arc - mean_w * mean_w);

  GlandTruth t;
  t.length_mm = r_mm_per_px * arc;
  t.width_mm = r_mm_per_px * mean_w;
  t.deformation_mm = r_mm_per_px * std::sqrt(var_w);
  t.tortuosity = (arc / chord) * (turn / arc) / r_mm_per_px;
  return t;
}

struct Rng {
  std::mt19937 gen;
  explicit Rng(std::uint32_t seed) : gen(seed) {}

  double uniform() {  // (0, 1)
    return (static_cast<double>(gen()) + 0.5) / 4294967296.0;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Box-Muller, implementation-independent.
  double gaussian() {
    const double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTau * u2);
  }
};

}  // namespace

Phantom generate(const PhantomSpec& spec, double r_mm_per_px) {
  if (spec.gland_intensity <= spec.eyelid_intensity)
    throw SpecInfeasible("phantom: gland intensity must exceed the eyelid intensity");

  const int w = spec.width, h = spec.height;
  const EyelidModel& e = spec.eyelid;

  Phantom out;
  out.truth.roi = BinaryMask(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double ex = (x - e.cx) / e.rx, ey = (y - e.cy) / e.ry;
      if (ex * ex + ey * ey <= 1.0) out.truth.roi.at(x, y) = 1;
    }
  }

  out.truth.gland_signal = BinaryMask(w, h);
  const double mrx = e.rx - 2.0, mry = e.ry - 2.0;
  for (const GlandModel& g : spec.glands) {
    BinaryMask gm = render_gland(g, w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!gm.at(x, y)) continue;
        const double ex = (x - e.cx) / mrx, ey = (y - e.cy) / mry;
        if (ex * ex + ey * ey > 1.0)
          throw SpecInfeasible("phantom: gland leaves the eyelid margin");
        if (out.truth.gland_signal.at(x, y))
          throw SpecInfeasible("phantom: glands overlap");
        out.truth.gland_signal.at(x, y) = 1;
      }
    }
    out.truth.gland_metrics.push_back(gland_truth(g, r_mm_per_px));
    out.truth.glands.push_back(std::move(gm));
  }

  // Noise-free rendering.
  GrayImage clean(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = spec.outside_intensity;
      if (out.truth.gland_signal.at(x, y))
        v = spec.gland_intensity;
      else if (out.truth.roi.at(x, y))
        v = spec.eyelid_intensity;
      v += spec.illumination_gradient * (static_cast<double>(x) / (w - 1) - 0.5);
      clean.at(x, y) = static_cast<std::uint8_t>(
          std::clamp<long>(std::lround(v), 0L, 255L));
    }
  }

  Rng rng(spec.seed);

  // Lash streaks pierce the upper eyelid boundary.
  for (int i = 0; i < spec.lash_count; ++i) {
    const double x0 = rng.uniform(e.cx - 0.7 * e.rx, e.cx + 0.7 * e.rx);
    const double boundary_y = e.cy - e.ry * std::sqrt(std::max(0.0, 1.0 - ((x0 - e.cx) / e.rx) * ((x0 - e.cx) / e.rx)));
    const double above = rng.uniform(15.0, 40.0);
    const double below = rng.uniform(3.0, 8.0);
    const double tilt = rng.uniform(-8.0, 8.0);
    const double y_start = boundary_y - above, y_end = boundary_y + below;
    for (double t = 0.0; t <= 1.0; t += 0.004) {
      const double sy = y_start + t * (y_end - y_start);
      const double sx = x0 + tilt * t;
      for (int py = static_cast<int>(sy) - 1; py <= static_cast<int>(sy) + 1; ++py) {
        for (int px = static_cast<int>(sx) - 1; px <= static_cast<int>(sx) + 1; ++px) {
          if (px < 0 || py < 0 || px >= w || py >= h) continue;
          const double dx = px - sx, dyp = py - sy;
          if (dx * dx + dyp * dyp <= 0.8 * 0.8) clean.at(px, py) = spec.lash_intensity;
        }
      }
    }
  }

  // Truth SI comes from the noise-free rendering and the truth masks.
  {
    std::int64_t gsum = 0, gn = 0, bsum = 0, bn = 0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (out.truth.gland_signal.at(x, y)) {
          gsum += clean.at(x, y);
          ++gn;
        } else if (out.truth.roi.at(x, y)) {
          bsum += clean.at(x, y);
          ++bn;
        }
      }
    }
    if (gn > 0 && bn > 0 && bsum > 0) {
      out.truth.si = std::log10((static_cast<double>(gsum) / gn) /
                                (static_cast<double>(bsum) / bn));
      out.truth.si_scaled = 100.0 * out.truth.si;
    }
    const std::int64_t roi_n = gn + bn;
    out.truth.ga_percent = roi_n > 0 ? 100.0 * static_cast<double>(gn) / roi_n : 0.0;
  }

  out.image = clean;
  if (spec.noise_sigma > 0.0) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double v = clean.at(x, y) + spec.noise_sigma * rng.gaussian();
        out.image.at(x, y) = static_cast<std::uint8_t>(
            std::clamp<long>(std::lround(v), 0L, 255L));
      }
    }
  }
  return out;
}

PhantomSpec default_spec(int gland_count, std::uint32_t seed) {
  PhantomSpec spec;
  spec.seed = seed;
  Rng rng(seed * 2654435761u + 17u);

  const EyelidModel& e = spec.eyelid;
  const double span = 1.56 * e.rx;
  for (int i = 0; i < gland_count; ++i) {
    GlandModel g;
    g.base_x = e.cx - span / 2.0 +
               span * (gland_count == 1 ? 0.5 : static_cast<double>(i) / (gland_count - 1));
    g.width = rng.uniform(10.0, 15.0);
    g.amplitude = rng.uniform(0.0, 9.0);
    g.period = rng.uniform(160.0, 300.0);
    g.phase = rng.uniform(0.0, kTau);

    const double worst_dx = std::abs(g.base_x - e.cx) + g.amplitude + g.width / 2.0 + 4.0;
    const double half_h = e.ry * std::sqrt(std::max(0.0, 1.0 - (worst_dx / e.rx) * (worst_dx / e.rx)));
    const double margin_top = 16.0 + g.width / 2.0;
    const double margin_bottom = 10.0 + g.width / 2.0;
    g.top_y = e.cy - half_h + margin_top;
    g.extent_y = std::max(40.0, 2.0 * half_h - margin_top - margin_bottom);
    spec.glands.push_back(g);
  }
  return spec;
}

namespace {

using nlohmann::json;

GlandModel gland_from_json(const json& j) {
  GlandModel g;
  g.base_x = j.value("base_x", g.base_x);
  g.top_y = j.value("top_y", g.top_y);
  g.extent_y = j.value("extent_y", g.extent_y);
  g.width = j.value("width", g.width);
  g.amplitude = j.value("amplitude", g.amplitude);
  g.period = j.value("period", g.period);
  g.phase = j.value("phase", g.phase);
  const std::string wm = j.value("width_model", "constant");
  if (wm == "sinusoid")
    g.width_model = GlandModel::WidthModel::Sinusoid;
  else if (wm == "step")
    g.width_model = GlandModel::WidthModel::Step;
  g.width_amp = j.value("width_amp", g.width_amp);
  g.width_period = j.value("width_period", g.width_period);
  g.width_phase = j.value("width_phase", g.width_phase);
  g.width2 = j.value("width2", g.width2);
  g.step_fraction = j.value("step_fraction", g.step_fraction);
  return g;
}

PhantomSpec spec_from_json(const json& j) {
  PhantomSpec s;
  if (j.contains("gland_count") && !j.contains("glands"))
    s = default_spec(j["gland_count"].get<int>(), j.value("seed", 1u));
  s.width = j.value("width", s.width);
  s.height = j.value("height", s.height);
  s.seed = j.value("seed", s.seed);
  if (j.contains("eyelid")) {
    const json& e = j["eyelid"];
    s.eyelid.cx = e.value("cx", s.eyelid.cx);
    s.eyelid.cy = e.value("cy", s.eyelid.cy);
    s.eyelid.rx = e.value("rx", s.eyelid.rx);
    s.eyelid.ry = e.value("ry", s.eyelid.ry);
  }
  if (j.contains("intensity")) {
    const json& t = j["intensity"];
    s.outside_intensity = t.value("outside", s.outside_intensity);
    s.eyelid_intensity = t.value("eyelid", s.eyelid_intensity);
    s.gland_intensity = t.value("gland", s.gland_intensity);
    s.lash_intensity = t.value("lash", s.lash_intensity);
  }
  s.noise_sigma = j.value("noise_sigma", s.noise_sigma);
  s.lash_count = j.value("lash_count", s.lash_count);
  s.illumination_gradient = j.value("illumination_gradient", s.illumination_gradient);
  if (j.contains("glands")) {
    s.glands.clear();
    for (const json& g : j["glands"]) s.glands.push_back(gland_from_json(g));
  }
  return s;
}

}  // namespace

PhantomSpec parse_spec_json(const std::string& text) {
  return spec_from_json(json::parse(text));
}

std::vector<PhantomSpec> parse_spec_corpus_json(const std::string& text) {
  const json j = json::parse(text);
  std::vector<PhantomSpec> out;
  if (j.contains("corpus")) {
    for (const json& item : j["corpus"]) out.push_back(spec_from_json(item));
  } else {
    out.push_back(spec_from_json(j));
  }
  return out;
}

}  // namespace meibo::phantom
