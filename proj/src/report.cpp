// SPDX-License-Identifier: Apache-2.0

#include "meibo/report.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "meibo/imgproc.hpp"

namespace meibo::report {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

double round4(double v) { return std::round(v * 10000.0) / 10000.0; }

json opt(const std::optional<double>& v) {
  if (!v) return nullptr;
  return round4(*v);
}

ordered_json aggregate_json(const std::optional<metrics::Aggregate>& a,
                            const char* mean_key, const char* sd_key) {
  ordered_json j;
  j[mean_key] = a ? json(round4(a->mean)) : json(nullptr);
  j[sd_key] = a ? json(round4(a->sd)) : json(nullptr);
  return j;
}

}  // namespace

std::string to_json(const metrics::ImageReport& r) {
  ordered_json j;
  j["schema"] = "meibo-report/1";
  j["image"] = r.image_name;
  j["R_mm_per_px"] = round4(r.r_mm_per_px);
  j["roi"] = ordered_json{{"area_px", r.roi_area_px}};
  j["GA_percent"] = round4(r.ga_percent);
  j["SI"] = opt(r.si);
  j["SI_scaled"] = opt(r.si_scaled);

  ordered_json glands = ordered_json::array();
  for (const auto& g : r.glands) {
    ordered_json gj;
    gj["label"] = g.label;
    gj["area_px"] = g.area_px;
    gj["L_mm"] = opt(g.length_mm);
    gj["D_mm"] = opt(g.width_mm);
    gj["DI_mm"] = opt(g.deformation_mm);
    gj["TI"] = opt(g.tortuosity);
    gj["flags"] = g.flags;
    glands.push_back(std::move(gj));
  }
  j["glands"] = std::move(glands);

  ordered_json agg;
  agg.update(aggregate_json(r.length_mm, "L_mean", "L_sd"));
  agg.update(aggregate_json(r.width_mm, "D_mean", "D_sd"));
  agg.update(aggregate_json(r.deformation_mm, "DI_mean", "DI_sd"));
  agg.update(aggregate_json(r.tortuosity, "TI_mean", "TI_sd"));
  j["aggregates"] = std::move(agg);
  j["errors"] = r.errors;
  return j.dump(2) + "\n";
}

std::string csv_header() {
  return "image,label,area_px,L_mm,D_mm,DI_mm,TI,flags\n";
}

namespace {

std::string fmt4(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

}  // namespace

std::string to_csv_rows(const metrics::ImageReport& r) {
  std::ostringstream out;
  for (const auto& g : r.glands) {
    out << r.image_name << ',' << g.label << ',' << g.area_px << ','
        << fmt4(g.length_mm) << ',' << fmt4(g.width_mm) << ','
        << fmt4(g.deformation_mm) << ',' << fmt4(g.tortuosity) << ',';
    for (std::size_t i = 0; i < g.flags.size(); ++i)
      out << (i ? ";" : "") << g.flags[i];
    out << '\n';
  }
  return out.str();
}

io::RgbImage render_overlay(const GrayImage& img, const roi::RoiResult& roi,
                            const glands::GlandSet& glands) {
  io::RgbImage rgb(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const std::uint8_t v = img.at(x, y);
      rgb.set(x, y, {v, v, v});
    }
  }

  const auto se = meibo::StructuringElement::disk(3);
  const BinaryMask roi_edge = imgproc::gradient_in(roi.roi_mask, se);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (roi_edge.at(x, y)) rgb.set(x, y, {230, 30, 30});

  static constexpr std::array<std::array<std::uint8_t, 3>, 6> palette = {{
      {250, 220, 40},   // yellow
      {60, 200, 80},    // green
      {70, 170, 250},   // blue
      {240, 130, 40},   // orange
      {200, 80, 220},   // magenta
      {80, 230, 220},   // cyan
  }};
  for (const auto& g : glands.glands) {
    const auto color = palette[static_cast<std::size_t>(g.label - 1) % palette.size()];
    const BinaryMask edge = imgproc::gradient_in(g.mask, se);
    for (int y = g.min_y; y <= g.max_y; ++y)
      for (int x = g.min_x; x <= g.max_x; ++x)
        if (edge.at(x, y)) rgb.set(x, y, color);
  }
  return rgb;
}

}  // namespace meibo::report
