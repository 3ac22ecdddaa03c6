// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "meibo/imageio.hpp"
#include "meibo/metrics.hpp"

namespace meibo::report {

/// Schema-versioned JSON report, numbers rounded to 4 decimals.
std::string to_json(const metrics::ImageReport& report);

/// Flattened per-gland CSV rows; `header` selects the column row.
std::string csv_header();
std::string to_csv_rows(const metrics::ImageReport& report);

/// Source image with the ROI boundary in red and each gland contour in a
/// cycling palette.
io::RgbImage render_overlay(const GrayImage& img, const roi::RoiResult& roi,
                            const glands::GlandSet& glands);

}  // namespace meibo::report
