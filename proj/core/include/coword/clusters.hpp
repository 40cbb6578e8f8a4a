#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "coword/conet.hpp"

namespace coword {

// Edge weights the clustering objective is evaluated on.
enum class EdgeWeighting {
  association_strength,  // c_ij / (w_i * w_j)
  raw,                   // c_ij
};

struct ClusterOptions {
  double resolution = 1.0;
  EdgeWeighting weighting = EdgeWeighting::association_strength;
};

struct ClusterPartition {
  std::vector<std::size_t> assignment;  // vertex -> cluster id in 1..k
  double modularity = 0.0;

  std::size_t cluster_count() const noexcept;
  std::vector<std::size_t> cluster_sizes() const;  // index 0 is cluster 1
};

// Q = sum_c [ in_c / 2m - resolution * (tot_c / 2m)^2 ], 0 when m == 0.
double modularity(const CoNetwork& net, std::span<const std::size_t> assignment,
                  double resolution, EdgeWeighting weighting = EdgeWeighting::association_strength);

// Greedy local moving with aggregation, one connected component at a time.
// Vertices are visited in index order and ties go to the lowest cluster id.
// Clusters are numbered by size descending, then by their lowest vertex.
// Throws std::invalid_argument on an empty network.
ClusterPartition detect_clusters(const CoNetwork& net, const ClusterOptions& options = {});

// Renumbers an arbitrary labelling into the canonical 1..k numbering.
std::vector<std::size_t> canonical_cluster_ids(std::span<const std::size_t> labels);

struct ClusterSummary {
  std::size_t id = 0;
  std::string label;
  std::vector<std::size_t> members;  // occurrence weight descending, label ascending
  std::string legend;                // "<label> (n items)"
};

// `labels[k-1]` names cluster k when present; otherwise "Cluster k".
std::vector<ClusterSummary> cluster_summary(const ClusterPartition& partition,
                                            const CoNetwork& net,
                                            std::span<const std::string> labels = {});

}  // namespace coword
