#include "coword/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "coword/text.hpp"

namespace coword {
namespace {

constexpr std::array<const char*, 12> kPalette = {
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4",
    "#f032e6", "#9a6324", "#469990", "#808000", "#000075", "#a9a9a9",
};

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string num(double v) { return format_fixed(v, 2); }

double sqrt_scaled(std::size_t weight, std::size_t max_weight, double lo, double hi) {
  if (max_weight == 0 || weight == 0) return lo;
  double value = hi * std::sqrt(static_cast<double>(weight) / static_cast<double>(max_weight));
  return std::max(lo, value);
}

}  // namespace

std::span<const char* const> cluster_palette() { return kPalette; }

double symbol_radius(std::size_t weight, std::size_t max_weight, const SvgOptions& opts) {
  return sqrt_scaled(weight, max_weight, opts.min_radius, opts.max_radius);
}

double label_font_size(std::size_t weight, std::size_t max_weight, const SvgOptions& opts) {
  return sqrt_scaled(weight, max_weight, opts.min_font, opts.max_font);
}

std::string render_label_map_svg(const CoNetwork& net, const LayoutMap& layout,
                                 const ClusterPartition& partition, const SvgOptions& opts) {
  if (layout.coordinates.size() != net.size() || partition.assignment.size() != net.size()) {
    throw std::invalid_argument("layout and partition must cover every vertex");
  }
  if (!(opts.size > 2.0 * opts.margin) || opts.margin < 0.0) {
    throw std::invalid_argument("SVG size must exceed twice the margin");
  }
  const double span = opts.size - 2.0 * opts.margin;
  auto px = [&](double u) { return opts.margin + std::clamp(u, 0.0, 1.0) * span; };

  std::size_t max_weight = 0;
  for (const auto& v : net.vertices()) max_weight = std::max(max_weight, v.weight);

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         num(opts.size) + "\" height=\"" + num(opts.size) + "\" viewBox=\"0 0 " +
         num(opts.size) + " " + num(opts.size) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(opts.size) + "\" height=\"" + num(opts.size) +
         "\" fill=\"#ffffff\"/>\n";

  out += "<g id=\"edges\" stroke=\"#b0b0b0\" stroke-opacity=\"0.6\">\n";
  for (const auto& e : net.edges()) {
    if (e.weight < opts.edge_floor) continue;
    const auto& a = layout.coordinates[e.source];
    const auto& b = layout.coordinates[e.target];
    out += "<line x1=\"" + num(px(a.x)) + "\" y1=\"" + num(px(a.y)) + "\" x2=\"" +
           num(px(b.x)) + "\" y2=\"" + num(px(b.y)) + "\" stroke-width=\"" +
           num(opts.edge_width * std::log1p(static_cast<double>(e.weight))) + "\"/>\n";
  }
  out += "</g>\n";

  // Heavier vertices last so their symbols sit on top.
  std::vector<std::size_t> order(net.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return net.vertices()[l].weight < net.vertices()[r].weight;
  });

  out += "<g id=\"vertices\" stroke=\"#ffffff\" stroke-width=\"1\">\n";
  for (auto v : order) {
    const auto& p = layout.coordinates[v];
    const char* color = kPalette[(partition.assignment[v] - 1) % kPalette.size()];
    out += "<circle cx=\"" + num(px(p.x)) + "\" cy=\"" + num(px(p.y)) + "\" r=\"" +
           num(symbol_radius(net.vertices()[v].weight, max_weight, opts)) + "\" fill=\"" +
           color + "\" fill-opacity=\"0.35\"/>\n";
  }
  out += "</g>\n";

  out += "<g id=\"labels\" font-family=\"" + xml_escape(opts.font_family) +
         "\" text-anchor=\"middle\" dominant-baseline=\"central\">\n";
  for (auto v : order) {
    const auto& p = layout.coordinates[v];
    const char* color = kPalette[(partition.assignment[v] - 1) % kPalette.size()];
    out += "<text x=\"" + num(px(p.x)) + "\" y=\"" + num(px(p.y)) + "\" font-size=\"" +
           num(label_font_size(net.vertices()[v].weight, max_weight, opts)) + "\" fill=\"" +
           color + "\">" + xml_escape(net.vertices()[v].label) + "</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

void write_label_map_svg(const CoNetwork& net, const LayoutMap& layout,
                         const ClusterPartition& partition, const std::string& path,
                         const SvgOptions& opts) {
  write_file(path, render_label_map_svg(net, layout, partition, opts));
}

}  // namespace coword
