#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "coword/clusters.hpp"
#include "coword/conet.hpp"
#include "coword/layout.hpp"

namespace coword {

struct SvgOptions {
  double size = 800.0;    // square viewport, pixels
  double margin = 60.0;   // room for labels around the unit square
  double min_radius = 3.0;
  double max_radius = 24.0;
  double min_font = 8.0;
  double max_font = 22.0;
  double edge_width = 1.0;       // stroke width per unit of log(1 + weight)
  std::size_t edge_floor = 1;    // edges lighter than this are not drawn
  std::string font_family = "Helvetica, Arial, sans-serif";
};

// Fixed qualitative palette; cluster k uses entry (k - 1) mod size.
std::span<const char* const> cluster_palette();

// Radius proportional to sqrt(weight), max_radius at the heaviest vertex,
// never below min_radius.
double symbol_radius(std::size_t weight, std::size_t max_weight, const SvgOptions& opts);
double label_font_size(std::size_t weight, std::size_t max_weight, const SvgOptions& opts);

// Label view: one <circle> and one <text> per vertex, one <line> per edge
// with weight >= edge_floor. SVG 1.1, deterministic.
std::string render_label_map_svg(const CoNetwork& net, const LayoutMap& layout,
                                 const ClusterPartition& partition, const SvgOptions& opts = {});
void write_label_map_svg(const CoNetwork& net, const LayoutMap& layout,
                         const ClusterPartition& partition, const std::string& path,
                         const SvgOptions& opts = {});

}  // namespace coword
