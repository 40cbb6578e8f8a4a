#include "coword/compare.hpp"

#include <map>
#include <numeric>

namespace coword {
namespace {

std::map<std::string, std::size_t> degrees(const CoNetwork& net) {
  std::map<std::string, std::size_t> out;
  auto adj = net.adjacency();
  for (std::size_t v = 0; v < net.size(); ++v) out[net.vertices()[v].label] = adj[v].size();
  return out;
}

double mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace

NetworkSummary summarize_network(const CoNetwork& net, std::string label) {
  auto metrics = network_metrics(net);
  NetworkSummary s;
  s.label = std::move(label);
  s.vertices = net.size();
  s.edges = net.edges().size();
  s.density = metrics.density;
  s.mean_degree_centrality = mean(metrics.degree_centrality);
  s.mean_closeness = mean(metrics.closeness);
  s.components = metrics.components;
  return s;
}

CompareReport compare_networks(const CoNetwork& a, const CoNetwork& b,
                               const std::string& label_a, const std::string& label_b) {
  CompareReport report{summarize_network(a, label_a), summarize_network(b, label_b), {}, {}, {}};
  auto deg_a = degrees(a);
  auto deg_b = degrees(b);
  for (const auto& [label, da] : deg_a) {
    auto it = deg_b.find(label);
    if (it == deg_b.end()) {
      report.vanished.push_back(label);
      continue;
    }
    report.persisted.push_back({label, da, it->second,
                                static_cast<long long>(it->second) - static_cast<long long>(da)});
  }
  for (const auto& [label, _] : deg_b) {
    if (!deg_a.count(label)) report.appeared.push_back(label);
  }
  return report;
}

}  // namespace coword
