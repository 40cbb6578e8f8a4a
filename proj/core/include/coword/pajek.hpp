#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coword/clusters.hpp"
#include "coword/conet.hpp"
#include "coword/layout.hpp"

// Undirected weighted subset of the Pajek formats:
//
//   *Vertices 3
//   1 "public libraries" 0.250000 0.500000
//   ...
//   *Edges
//   1 2 4
//
// Vertex coordinates are optional (all or none), six decimals, y down.
// Newlines are LF and the output is fully determined by the inputs.
namespace coword {

std::string format_pajek_net(const CoNetwork& net, const LayoutMap* layout = nullptr);
void write_pajek_net(const CoNetwork& net, const LayoutMap* layout, const std::string& path);

struct PajekNetwork {
  CoNetwork network;  // external_weights() is true
  std::optional<std::vector<Point>> coordinates;
};

// Throws InputError with the line number on malformed input or dangling ids.
PajekNetwork parse_pajek_net(std::string_view text, const std::string& source_name);
PajekNetwork read_pajek_net(const std::string& path);

std::string format_pajek_clu(const ClusterPartition& partition);
void write_pajek_clu(const ClusterPartition& partition, const std::string& path);

std::vector<std::size_t> parse_pajek_clu(std::string_view text, const std::string& source_name);
std::vector<std::size_t> read_pajek_clu(const std::string& path);

}  // namespace coword
