#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "curvpdc/pdc.hpp"

namespace curvpdc::sweep {

struct FigureOptions {
  /// r reaches 3 on several figures, where tanh(r)^2 ~ 0.99; the default
  /// pair cap of the evolution module is far too small there.
  pdc::TruncationPolicy policy{1e-12, 20000};
  int threads = 1;
  int curve_points = 101;
  int contour_points = 61;
};

/// "fig1" .. "fig7".
const std::vector<std::string>& figure_ids();

/// Writes the CSVs of one figure plus figN_manifest.json into out_dir and
/// returns the written paths. Throws InvalidArgument for an unknown id.
std::vector<std::filesystem::path> figure_data(std::string_view figure_id, const std::filesystem::path& out_dir,
                                               const FigureOptions& options = {});

}  // namespace curvpdc::sweep
