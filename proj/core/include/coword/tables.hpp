#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coword/clusters.hpp"
#include "coword/compare.hpp"
#include "coword/conet.hpp"
#include "coword/corpus.hpp"
#include "coword/layout.hpp"
#include "coword/vocabulary.hpp"

// CSV tables written by the pipeline (UTF-8, comma, quoted where needed, LF)
// and the readers for the ones later stages consume.
namespace coword {

std::string format_distribution_csv(std::span<const DistributionRow> rows);

// label,<g1>_count,<g1>_percent,... with rows aligned by label.
std::string format_grouped_distribution_csv(std::span<const std::string> group_labels,
                                            std::span<const std::vector<DistributionRow>> groups);

// Unclassified row/column are written only when nonzero.
std::string format_crosstab_csv(const CrossTab& tab);

std::string format_frequencies_csv(std::span<const RankedDescriptor> ranked);
std::string format_unmapped_csv(const OccurrenceIndex& idx);
std::string format_coverage_csv(const CoverageStats& stats, std::size_t token_count);

// Per-record descriptor sets, the hand-off from `normalize` to `net`.
struct DescriptorRow {
  std::string id;
  std::string source;
  int year = 0;
  std::set<std::string> descriptors;
};
std::string format_descriptors_csv(const RecordSet& rs, const OccurrenceIndex& idx);
std::vector<DescriptorRow> parse_descriptors_csv(std::string_view text,
                                                 const std::string& source_name);

std::string format_vertices_csv(const CoNetwork& net);
std::string format_edge_list_csv(const CoNetwork& net);
// Rebuilds a network from vertices.csv and edges.csv contents; vertex order
// is the file order.
CoNetwork parse_network_csv(std::string_view vertices_text, const std::string& vertices_name,
                            std::string_view edges_text, const std::string& edges_name);

std::string format_metrics_csv(const CoNetwork& net, const NetworkMetrics& metrics);
std::string format_clusters_csv(const CoNetwork& net, std::span<const ClusterSummary> clusters);

std::string format_layout_csv(const CoNetwork& net, const LayoutMap& layout);
LayoutMap parse_layout_csv(const CoNetwork& net, std::string_view text,
                           const std::string& source_name);

std::string format_compare_csv(const CompareReport& report);

}  // namespace coword
