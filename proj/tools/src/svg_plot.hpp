#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qkm/matrix.hpp"

namespace qkm::cli {

/// One scatter panel: every point of the shared coordinate table drawn in
/// the color of its group, with a centroid marker per group.
struct PlotPanel {
    std::string title;
    std::vector<int> groups;
};

/// Writes a fixed-size SVG scatter of xy (N x 2), one panel per entry side
/// by side. Output is byte-stable for identical inputs.
void write_scatter_svg(const std::filesystem::path& path, const Matrix& xy,
                       const std::vector<PlotPanel>& panels, const std::string& x_label,
                       const std::string& y_label);

} // namespace qkm::cli
