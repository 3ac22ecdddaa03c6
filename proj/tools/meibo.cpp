// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "meibo/evalseg.hpp"
#include "meibo/imageio.hpp"
#include "meibo/log.hpp"
#include "meibo/metrics.hpp"
#include "meibo/phantom.hpp"
#include "meibo/report.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

double round4(double v) { return std::round(v * 10000.0) / 10000.0; }

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw meibo::IoError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw meibo::IoError("cannot write " + path.string());
  f << text;
}

struct ImageOutcome {
  std::string input;
  bool ok = false;
  std::string error;
  meibo::metrics::ImageReport report;
  std::optional<meibo::io::RgbImage> overlay;
  std::vector<std::pair<std::string, meibo::GrayImage>> trace_images;
  std::vector<std::pair<std::string, meibo::BinaryMask>> trace_masks;
};

ImageOutcome process_image(const std::string& path,
                           const meibo::metrics::AnalyzeParams& params,
                           bool overlay, bool trace) {
  ImageOutcome out;
  out.input = path;
  out.report.image_name = stem_of(path);
  out.report.r_mm_per_px = params.r_mm_per_px;
  try {
    const meibo::GrayImage img = meibo::io::read_gray(path);
    if (img.width() != 1088 || img.height() != 512)
      meibo::log::warn(path + ": unexpected size " + std::to_string(img.width()) +
                       "x" + std::to_string(img.height()) +
                       " (pipeline constants assume 1088x512)");
    meibo::roi::RoiTrace trace_data;
    auto result =
        meibo::metrics::analyze(img, params, trace ? &trace_data : nullptr);
    result.report.image_name = stem_of(path);
    out.report = std::move(result.report);
    out.ok = true;
    if (overlay)
      out.overlay = meibo::report::render_overlay(img, result.roi, result.glands);
    if (trace) {
      out.trace_masks.emplace_back("00_reflection_mask", trace_data.reflection_mask);
      out.trace_images.emplace_back("01_masked_input", trace_data.masked_input);
      out.trace_images.emplace_back("02_enhanced", trace_data.enhanced);
      out.trace_masks.emplace_back("03_binary_inverted", trace_data.binary_inverted);
      out.trace_masks.emplace_back("04_binary_masked", trace_data.binary_masked);
      out.trace_masks.emplace_back("05_cleaned_blocks", trace_data.cleaned_blocks);
      out.trace_masks.emplace_back("06_hull", trace_data.hull);
      out.trace_masks.emplace_back("07_eyelid_block", trace_data.eyelid_block);
      out.trace_masks.emplace_back("08_roi_mask", result.roi.roi_mask);
      out.trace_masks.emplace_back("09_gland_signal", result.glands.gland_signal);
    }
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
    out.report.errors.push_back(e.what());
  }
  return out;
}

int cmd_analyze(const std::vector<std::string>& inputs_arg, const std::string& out_dir,
                double r_mm_per_px, const std::string& format, bool overlay,
                bool trace, int jobs) {
  std::vector<std::string> inputs = inputs_arg;
  std::sort(inputs.begin(), inputs.end());

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    meibo::log::error("cannot create output directory " + out_dir);
    return 1;
  }

  meibo::metrics::AnalyzeParams params;
  params.r_mm_per_px = r_mm_per_px;

  std::vector<ImageOutcome> outcomes(inputs.size());
  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(inputs.size())));
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= inputs.size()) break;
      outcomes[i] = process_image(inputs[i], params, overlay, trace);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  // All writes are serialized and ordered by input path.
  bool any_failed = false;
  ordered_json summary;
  summary["schema"] = "meibo-summary/1";
  summary["images"] = ordered_json::array();
  double ga_sum = 0.0;
  int ga_n = 0;
  for (const auto& oc : outcomes) {
    const std::string stem = stem_of(oc.input);
    if (format == "csv") {
      write_file(fs::path(out_dir) / (stem + ".report.csv"),
                 meibo::report::csv_header() + meibo::report::to_csv_rows(oc.report));
    } else {
      write_file(fs::path(out_dir) / (stem + ".report.json"),
                 meibo::report::to_json(oc.report));
    }
    if (oc.overlay)
      meibo::io::write_rgb_png((fs::path(out_dir) / (stem + "_overlay.png")).string(),
                               *oc.overlay);
    if (!oc.trace_images.empty() || !oc.trace_masks.empty()) {
      const fs::path tdir = fs::path(out_dir) / (stem + "_trace");
      fs::create_directories(tdir);
      for (const auto& [name, img] : oc.trace_images)
        meibo::io::write_gray_png((tdir / (name + ".png")).string(), img);
      for (const auto& [name, mask] : oc.trace_masks)
        meibo::io::write_mask((tdir / (name + ".png")).string(), mask);
    }

    ordered_json entry;
    entry["image"] = stem;
    entry["status"] = oc.ok ? "ok" : "failed";
    if (!oc.ok) {
      entry["error"] = oc.error;
      any_failed = true;
    } else {
      entry["GA_percent"] = round4(oc.report.ga_percent);
      entry["glands"] = oc.report.glands.size();
      ga_sum += oc.report.ga_percent;
      ++ga_n;
    }
    summary["images"].push_back(std::move(entry));
  }
  summary["aggregate"] =
      ordered_json{{"images_ok", ga_n},
                   {"images_failed", static_cast<int>(outcomes.size()) - ga_n},
                   {"GA_mean", ga_n ? ordered_json(round4(ga_sum / ga_n))
                                    : ordered_json(nullptr)}};
  write_file(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");

  for (const auto& oc : outcomes)
    if (!oc.ok)
      meibo::log::error(oc.input + ": " + oc.error);
  return any_failed ? 2 : 0;
}

int cmd_eval(const std::string& auto_path, const std::string& manual_path,
             const std::string& out_path) {
  try {
    const meibo::BinaryMask manual = meibo::io::read_mask(manual_path);
    const meibo::BinaryMask autom = meibo::io::read_mask(auto_path);
    const meibo::evalseg::SegScore s = meibo::evalseg::score(manual, autom);
    ordered_json j;
    j["schema"] = "meibo-eval/1";
    j["manual"] = manual_path;
    j["auto"] = auto_path;
    j["k"] = round4(s.k);
    j["r_p_percent"] = round4(s.r_p);
    j["r_n_percent"] = round4(s.r_n);
    j["area_manual_px"] = s.area_manual;
    j["area_auto_px"] = s.area_auto;
    j["area_intersection_px"] = s.area_intersection;
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty() || out_path == "-")
      std::fputs(text.c_str(), stdout);
    else
      write_file(out_path, text);
    return 0;
  } catch (const std::exception& e) {
    meibo::log::error(std::string("eval: ") + e.what());
    return 1;
  }
}

int cmd_phantom(const std::string& spec_path, const std::string& out_dir) {
  try {
    const auto specs = spec_path.empty()
                           ? std::vector<meibo::phantom::PhantomSpec>{meibo::phantom::default_spec()}
                           : meibo::phantom::parse_spec_corpus_json(read_file(spec_path));
    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const auto phantom = meibo::phantom::generate(specs[i]);
      const std::string prefix =
          specs.size() == 1 ? "phantom" : "phantom_" + std::to_string(i);
      meibo::io::write_gray_png((fs::path(out_dir) / (prefix + ".png")).string(),
                                phantom.image);
      meibo::io::write_mask((fs::path(out_dir) / (prefix + "_roi.png")).string(),
                            phantom.truth.roi);
      meibo::io::write_mask(
          (fs::path(out_dir) / (prefix + "_gland_signal.png")).string(),
          phantom.truth.gland_signal);
      for (std::size_t g = 0; g < phantom.truth.glands.size(); ++g) {
        char name[64];
        std::snprintf(name, sizeof name, "%s_gland_%02zu.png", prefix.c_str(), g + 1);
        meibo::io::write_mask((fs::path(out_dir) / name).string(),
                              phantom.truth.glands[g]);
      }
      ordered_json truth;
      truth["schema"] = "meibo-phantom-truth/1";
      truth["GA_percent"] = round4(phantom.truth.ga_percent);
      truth["SI"] = round4(phantom.truth.si);
      truth["SI_scaled"] = round4(phantom.truth.si_scaled);
      truth["glands"] = ordered_json::array();
      for (const auto& gt : phantom.truth.gland_metrics) {
        truth["glands"].push_back(ordered_json{{"L_mm", round4(gt.length_mm)},
                                               {"D_mm", round4(gt.width_mm)},
                                               {"DI_mm", round4(gt.deformation_mm)},
                                               {"TI", round4(gt.tortuosity)}});
      }
      write_file(fs::path(out_dir) / (prefix + "_truth.json"), truth.dump(2) + "\n");
    }
    return 0;
  } catch (const std::exception& e) {
    meibo::log::error(std::string("phantom: ") + e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meibography image analysis: ROI and gland segmentation with "
               "quantitative gland metrics"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Analyze meibography images");
  std::vector<std::string> inputs;
  std::string out_dir = "out";
  double r = 0.03;
  std::string format = "json";
  bool overlay = false, trace = false;
  int jobs = 1;
  analyze->add_option("--in", inputs, "Input images (PNG or BMP)")->required();
  analyze->add_option("--out", out_dir, "Output directory")->required();
  analyze->add_option("--r-mm-per-px", r, "Digital resolution, mm per pixel");
  analyze->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  analyze->add_flag("--overlay", overlay, "Write segmentation overlays");
  analyze->add_flag("--trace", trace, "Dump intermediate images");
  analyze->add_option("--jobs", jobs, "Concurrent images")->check(CLI::PositiveNumber);

  // eval
  auto* eval = app.add_subcommand("eval", "Score a segmentation against a reference");
  std::string auto_path, manual_path, eval_out;
  eval->add_option("--auto", auto_path, "Automatic segmentation mask")->required();
  eval->add_option("--manual", manual_path, "Reference mask")->required();
  eval->add_option("--out", eval_out, "Output file (default stdout)");

  // phantom
  auto* phantom = app.add_subcommand("phantom", "Generate synthetic phantoms");
  std::string spec_path, phantom_out = "phantom_out";
  phantom->add_option("--spec", spec_path, "Phantom spec JSON (default built-in)");
  phantom->add_option("--out", phantom_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (analyze->parsed())
    return cmd_analyze(inputs, out_dir, r, format, overlay, trace, jobs);
  if (eval->parsed()) return cmd_eval(auto_path, manual_path, eval_out);
  if (phantom->parsed()) return cmd_phantom(spec_path, phantom_out);
  return 1;
}
