#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coword/vocabulary.hpp"

namespace coword {

struct Vertex {
  std::string label;
  std::size_t weight = 0;  // occurrence weight; 0 when unknown
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

// Undirected edge stored once with source < target.
struct Edge {
  std::size_t source = 0;
  std::size_t target = 0;
  std::size_t weight = 0;  // co-occurrence count, always >= 1
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Weighted co-occurrence network. Edges are kept sorted by (source, target).
class CoNetwork {
 public:
  CoNetwork() = default;

  // Validates endpoints, self-edges, duplicates and positive weights, then
  // sorts the edges. Vertex order is kept as given. Throws InputError.
  CoNetwork(std::vector<Vertex> vertices, std::vector<Edge> edges,
            bool external_weights = false);

  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  bool empty() const noexcept { return vertices_.empty(); }

  // True when occurrence weights came from outside the corpus (e.g. a Pajek
  // file) and are not meaningful.
  bool external_weights() const noexcept { return external_weights_; }

  std::optional<std::size_t> find(std::string_view label) const;

  // Neighbour lists with edge weights, neighbours ascending.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency() const;

  friend bool operator==(const CoNetwork&, const CoNetwork&) = default;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  bool external_weights_ = false;
};

// Vertices in canonical order: weight descending, then label ascending.
CoNetwork build_network(const OccurrenceIndex& idx);

// Keeps vertices with weight >= min_occ and edges between kept vertices.
CoNetwork threshold_filter(const CoNetwork& net, std::size_t min_occ);

struct EdgeRow {
  std::string keyword1;
  std::string keyword2;
  std::size_t weight = 0;
  friend bool operator==(const EdgeRow&, const EdgeRow&) = default;
};

// Incident edges of one descriptor, queried descriptor first, partners
// ascending. Throws InputError for an unknown descriptor.
std::vector<EdgeRow> edge_query(const CoNetwork& net, std::string_view descriptor);

// Tab-separated "Keyword1  Keyword2  weight" table with a header line.
std::string format_edge_rows(std::span<const EdgeRow> rows);

// Every edge once with keyword1 < keyword2, sorted by (keyword1, keyword2).
std::vector<EdgeRow> edge_list(const CoNetwork& net);

// Dense symmetric matrix with zero diagonal.
struct SimilarityMatrix {
  std::size_t n = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

// s_ij = c_ij / (w_i * w_j). Requires every vertex weight > 0.
SimilarityMatrix association_strength(const CoNetwork& net);

struct NetworkMetrics {
  std::vector<double> degree_centrality;
  std::vector<double> closeness;  // within the vertex's own component
  double density = 0.0;
  std::size_t components = 0;
};

NetworkMetrics network_metrics(const CoNetwork& net);

// Connected components, each sorted ascending, ordered by smallest member.
std::vector<std::vector<std::size_t>> connected_components(const CoNetwork& net);

}  // namespace coword
