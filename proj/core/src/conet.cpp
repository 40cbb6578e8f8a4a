#include "coword/conet.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "coword/error.hpp"

namespace coword {

CoNetwork::CoNetwork(std::vector<Vertex> vertices, std::vector<Edge> edges,
                     bool external_weights)
    : vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      external_weights_(external_weights) {
  const auto n = vertices_.size();
  for (auto& e : edges_) {
    if (e.source >= n || e.target >= n) {
      throw InputError("edge endpoint out of range (" + std::to_string(e.source) + ", " +
                       std::to_string(e.target) + ") for " + std::to_string(n) + " vertices");
    }
    if (e.source == e.target) {
      throw InputError("self-edge on vertex '" + vertices_[e.source].label + "'");
    }
    if (e.weight == 0) throw InputError("edge weight must be positive");
    if (e.source > e.target) std::swap(e.source, e.target);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& l, const Edge& r) {
    return std::tie(l.source, l.target) < std::tie(r.source, r.target);
  });
  auto dup = std::adjacent_find(edges_.begin(), edges_.end(), [](const Edge& l, const Edge& r) {
    return l.source == r.source && l.target == r.target;
  });
  if (dup != edges_.end()) {
    throw InputError("duplicate edge '" + vertices_[dup->source].label + "' -- '" +
                     vertices_[dup->target].label + "'");
  }
}

std::optional<std::size_t> CoNetwork::find(std::string_view label) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].label == label) return i;
  }
  return std::nullopt;
}

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> CoNetwork::adjacency() const {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(vertices_.size());
  for (const auto& e : edges_) {
    adj[e.source].emplace_back(e.target, e.weight);
    adj[e.target].emplace_back(e.source, e.weight);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

CoNetwork build_network(const OccurrenceIndex& idx) {
  std::vector<Vertex> vertices;
  for (const auto& [label, count] : idx.totals) {
    if (count > 0) vertices.push_back({label, count});
  }
  std::stable_sort(vertices.begin(), vertices.end(),
                   [](const Vertex& l, const Vertex& r) { return l.weight > r.weight; });
  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < vertices.size(); ++i) index.emplace(vertices[i].label, i);

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pairs;
  std::vector<std::size_t> members;
  for (const auto& entry : idx.per_record) {
    members.clear();
    for (const auto& d : entry.descriptors) members.push_back(index.at(d));
    std::sort(members.begin(), members.end());
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) ++pairs[{members[a], members[b]}];
    }
  }
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [key, count] : pairs) edges.push_back({key.first, key.second, count});
  return CoNetwork(std::move(vertices), std::move(edges));
}

CoNetwork threshold_filter(const CoNetwork& net, std::size_t min_occ) {
  if (min_occ < 1) throw std::invalid_argument("threshold_filter: min_occ must be >= 1");
  constexpr auto kDropped = static_cast<std::size_t>(-1);
  std::vector<std::size_t> remap(net.size(), kDropped);
  std::vector<Vertex> vertices;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (net.vertices()[i].weight >= min_occ) {
      remap[i] = vertices.size();
      vertices.push_back(net.vertices()[i]);
    }
  }
  std::vector<Edge> edges;
  for (const auto& e : net.edges()) {
    if (remap[e.source] != kDropped && remap[e.target] != kDropped) {
      edges.push_back({remap[e.source], remap[e.target], e.weight});
    }
  }
  return CoNetwork(std::move(vertices), std::move(edges), net.external_weights());
}

std::vector<EdgeRow> edge_query(const CoNetwork& net, std::string_view descriptor) {
  auto v = net.find(descriptor);
  if (!v) throw InputError("unknown descriptor '" + std::string(descriptor) + "'");
  std::vector<EdgeRow> rows;
  for (const auto& e : net.edges()) {
    if (e.source != *v && e.target != *v) continue;
    std::size_t other = e.source == *v ? e.target : e.source;
    rows.push_back({std::string(descriptor), net.vertices()[other].label, e.weight});
  }
  std::sort(rows.begin(), rows.end(),
            [](const EdgeRow& l, const EdgeRow& r) { return l.keyword2 < r.keyword2; });
  return rows;
}

std::string format_edge_rows(std::span<const EdgeRow> rows) {
  std::string out = "Keyword1\tKeyword2\tweight\n";
  for (const auto& row : rows) {
    out += row.keyword1 + '\t' + row.keyword2 + '\t' + std::to_string(row.weight) + '\n';
  }
  return out;
}

std::vector<EdgeRow> edge_list(const CoNetwork& net) {
  std::vector<EdgeRow> rows;
  rows.reserve(net.edges().size());
  for (const auto& e : net.edges()) {
    const auto& a = net.vertices()[e.source].label;
    const auto& b = net.vertices()[e.target].label;
    if (a < b) {
      rows.push_back({a, b, e.weight});
    } else {
      rows.push_back({b, a, e.weight});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const EdgeRow& l, const EdgeRow& r) {
    return std::tie(l.keyword1, l.keyword2) < std::tie(r.keyword1, r.keyword2);
  });
  return rows;
}

SimilarityMatrix association_strength(const CoNetwork& net) {
  SimilarityMatrix s{net.size(), std::vector<double>(net.size() * net.size(), 0.0)};
  for (const auto& v : net.vertices()) {
    if (v.weight == 0) {
      throw std::invalid_argument("association_strength: vertex '" + v.label +
                                  "' has no occurrence weight");
    }
  }
  for (const auto& e : net.edges()) {
    double value = static_cast<double>(e.weight) /
                   (static_cast<double>(net.vertices()[e.source].weight) *
                    static_cast<double>(net.vertices()[e.target].weight));
    s.values[e.source * s.n + e.target] = value;
    s.values[e.target * s.n + e.source] = value;
  }
  return s;
}

std::vector<std::vector<std::size_t>> connected_components(const CoNetwork& net) {
  auto adj = net.adjacency();
  std::vector<bool> seen(net.size(), false);
  std::vector<std::vector<std::size_t>> components;
  for (std::size_t start = 0; start < net.size(); ++start) {
    if (seen[start]) continue;
    std::vector<std::size_t> members{start};
    seen[start] = true;
    for (std::size_t head = 0; head < members.size(); ++head) {
      for (auto [next, _] : adj[members[head]]) {
        if (!seen[next]) {
          seen[next] = true;
          members.push_back(next);
        }
      }
    }
    std::sort(members.begin(), members.end());
    components.push_back(std::move(members));
  }
  return components;
}

NetworkMetrics network_metrics(const CoNetwork& net) {
  const std::size_t n = net.size();
  NetworkMetrics m;
  m.degree_centrality.assign(n, 0.0);
  m.closeness.assign(n, 0.0);
  if (n == 0) return m;

  auto adj = net.adjacency();
  if (n > 1) {
    for (std::size_t v = 0; v < n; ++v) {
      m.degree_centrality[v] = static_cast<double>(adj[v].size()) / static_cast<double>(n - 1);
    }
    m.density = 2.0 * static_cast<double>(net.edges().size()) /
                (static_cast<double>(n) * static_cast<double>(n - 1));
  }

  constexpr auto kUnseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> hops(n, kUnseen);
  std::deque<std::size_t> queue;
  for (std::size_t v = 0; v < n; ++v) {
    std::fill(hops.begin(), hops.end(), kUnseen);
    hops[v] = 0;
    queue.assign({v});
    std::size_t reached = 0;
    std::size_t total = 0;
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      for (auto [w, _] : adj[u]) {
        if (hops[w] != kUnseen) continue;
        hops[w] = hops[u] + 1;
        ++reached;
        total += hops[w];
        queue.push_back(w);
      }
    }
    if (total > 0) m.closeness[v] = static_cast<double>(reached) / static_cast<double>(total);
  }
  m.components = connected_components(net).size();
  return m;
}

}  // namespace coword
