#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "coword/conet.hpp"

namespace coword {

struct NetworkSummary {
  std::string label;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  double density = 0.0;
  double mean_degree_centrality = 0.0;
  double mean_closeness = 0.0;
  std::size_t components = 0;
};

NetworkSummary summarize_network(const CoNetwork& net, std::string label);

struct LinkDelta {
  std::string descriptor;
  std::size_t degree_a = 0;
  std::size_t degree_b = 0;
  long long delta = 0;  // degree_b - degree_a
};

struct CompareReport {
  NetworkSummary a;
  NetworkSummary b;
  std::vector<std::string> appeared;   // in b only, ascending
  std::vector<std::string> vanished;   // in a only, ascending
  std::vector<LinkDelta> persisted;    // in both, ascending by descriptor
};

CompareReport compare_networks(const CoNetwork& a, const CoNetwork& b,
                               const std::string& label_a, const std::string& label_b);

}  // namespace coword
