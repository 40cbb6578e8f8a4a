#include "coword/clusters.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

namespace coword {
namespace {

// Symmetric weighted graph; aggregated nodes may carry self-loop weight.
// `strength[i]` counts a self-loop twice, as the adjacency-matrix row sum.
struct WeightedGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // no self entries
  std::vector<double> self_loop;
  std::vector<double> strength;

  std::size_t size() const { return adj.size(); }
};

std::vector<double> edge_weights(const CoNetwork& net, EdgeWeighting weighting) {
  std::vector<double> w;
  w.reserve(net.edges().size());
  for (const auto& e : net.edges()) {
    if (weighting == EdgeWeighting::raw) {
      w.push_back(static_cast<double>(e.weight));
      continue;
    }
    double wi = static_cast<double>(net.vertices()[e.source].weight);
    double wj = static_cast<double>(net.vertices()[e.target].weight);
    if (wi <= 0.0 || wj <= 0.0) {
      throw std::invalid_argument(
          "association-strength clustering needs occurrence weights on every vertex");
    }
    w.push_back(static_cast<double>(e.weight) / (wi * wj));
  }
  return w;
}

// Subgraph induced by `members` (global indices, ascending).
WeightedGraph induced_graph(const CoNetwork& net, std::span<const double> weights,
                            std::span<const std::size_t> members) {
  std::map<std::size_t, std::size_t> local;
  for (std::size_t i = 0; i < members.size(); ++i) local.emplace(members[i], i);
  WeightedGraph g;
  g.adj.resize(members.size());
  g.self_loop.assign(members.size(), 0.0);
  g.strength.assign(members.size(), 0.0);
  for (std::size_t k = 0; k < net.edges().size(); ++k) {
    const auto& e = net.edges()[k];
    auto a = local.find(e.source);
    if (a == local.end()) continue;
    auto b = local.at(e.target);
    g.adj[a->second].emplace_back(b, weights[k]);
    g.adj[b].emplace_back(a->second, weights[k]);
    g.strength[a->second] += weights[k];
    g.strength[b] += weights[k];
  }
  return g;
}

// One local-moving phase. Returns true if any node changed community.
bool local_moving(const WeightedGraph& g, std::vector<std::size_t>& community,
                  double two_m, double resolution) {
  const std::size_t n = g.size();
  std::vector<double> total(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) total[community[i]] += g.strength[i];

  std::vector<double> link(n, 0.0);
  std::vector<std::size_t> touched;
  bool any_move = false;
  constexpr double kMinGain = 1e-12;
  constexpr int kMaxPasses = 1000;

  for (int pass = 0; pass < kMaxPasses; ++pass) {
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t current = community[i];
      const double k_i = g.strength[i];
      touched.clear();
      for (auto [j, w] : g.adj[i]) {
        std::size_t c = community[j];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += w;
      }
      total[current] -= k_i;

      auto gain = [&](std::size_t c) { return link[c] - resolution * total[c] * k_i / two_m; };
      std::size_t best = current;
      double best_gain = gain(current);
      std::sort(touched.begin(), touched.end());
      for (std::size_t c : touched) {
        if (c == current) continue;
        double value = gain(c);
        if (value > best_gain + kMinGain) {
          best = c;
          best_gain = value;
        }
      }

      total[best] += k_i;
      if (best != current) {
        community[i] = best;
        moved = true;
        any_move = true;
      }
      for (std::size_t c : touched) link[c] = 0.0;
    }
    if (!moved) break;
  }
  return any_move;
}

// Relabels communities densely in order of first appearance.
std::size_t compact(std::vector<std::size_t>& community) {
  std::map<std::size_t, std::size_t> remap;
  for (auto& c : community) {
    auto [it, _] = remap.emplace(c, remap.size());
    c = it->second;
  }
  return remap.size();
}

WeightedGraph aggregate(const WeightedGraph& g, const std::vector<std::size_t>& community,
                        std::size_t count) {
  WeightedGraph out;
  out.adj.resize(count);
  out.self_loop.assign(count, 0.0);
  out.strength.assign(count, 0.0);
  std::vector<std::map<std::size_t, double>> links(count);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t ci = community[i];
    out.self_loop[ci] += g.self_loop[i];
    out.strength[ci] += g.strength[i];
    for (auto [j, w] : g.adj[i]) {
      const std::size_t cj = community[j];
      if (ci == cj) {
        out.self_loop[ci] += w;  // seen from both ends: counts the edge twice
      } else {
        links[ci][cj] += w;
      }
    }
  }
  for (std::size_t c = 0; c < count; ++c) {
    out.adj[c].assign(links[c].begin(), links[c].end());
  }
  return out;
}

// Kernighan-Lin style sweep: every vertex moves once, to its best cluster
// or to an empty one, even when the move loses modularity; the best prefix
// of the sweep is kept. Returns true if the partition improved.
bool move_sweep(const WeightedGraph& g, std::vector<std::size_t>& community, double two_m,
                double resolution) {
  const std::size_t n = g.size();
  std::vector<double> total(n, 0.0);
  std::vector<std::size_t> members(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    total[community[i]] += g.strength[i];
    ++members[community[i]];
  }
  struct Move {
    std::size_t vertex, from, to;
  };
  std::vector<Move> moves;
  std::vector<bool> done(n, false);
  std::vector<double> link(n, 0.0);
  std::vector<std::size_t> touched;
  double running = 0.0;
  double best_total = 0.0;
  std::size_t best_prefix = 0;

  for (std::size_t step = 0; step < n; ++step) {
    bool found = false;
    Move pick{};
    double pick_delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const std::size_t current = community[i];
      const double k_i = g.strength[i];
      touched.clear();
      for (auto [j, w] : g.adj[i]) {
        std::size_t c = community[j];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += w;
      }
      auto gain = [&](std::size_t c) {
        double tot = total[c] - (c == current ? k_i : 0.0);
        return link[c] - resolution * tot * k_i / two_m;
      };
      const double stay = gain(current);
      std::sort(touched.begin(), touched.end());
      std::vector<std::size_t> options = touched;
      if (members[current] > 1) {
        std::size_t empty = 0;
        while (members[empty] != 0) ++empty;
        options.push_back(empty);
      }
      for (std::size_t c : options) {
        if (c == current) continue;
        double delta = gain(c) - stay;
        if (!found || delta > pick_delta + 1e-15) {
          found = true;
          pick = {i, current, c};
          pick_delta = delta;
        }
      }
      for (std::size_t c : touched) link[c] = 0.0;
    }
    if (!found) break;
    const double k = g.strength[pick.vertex];
    total[pick.from] -= k;
    total[pick.to] += k;
    --members[pick.from];
    ++members[pick.to];
    community[pick.vertex] = pick.to;
    done[pick.vertex] = true;
    moves.push_back(pick);
    running += pick_delta;
    if (running > best_total + 1e-12) {
      best_total = running;
      best_prefix = moves.size();
    }
  }
  for (std::size_t m = moves.size(); m > best_prefix; --m) {
    community[moves[m - 1].vertex] = moves[m - 1].from;
  }
  return best_prefix > 0;
}

// Merges the pair of adjacent clusters with the largest positive gain until
// no merge helps. Returns true if anything merged.
bool merge_clusters(const WeightedGraph& g, std::vector<std::size_t>& community, double two_m,
                    double resolution) {
  bool any = false;
  while (true) {
    std::map<std::size_t, double> total;
    std::map<std::pair<std::size_t, std::size_t>, double> between;
    for (std::size_t i = 0; i < g.size(); ++i) {
      total[community[i]] += g.strength[i];
      for (auto [j, w] : g.adj[i]) {
        if (community[i] < community[j]) between[{community[i], community[j]}] += w;
      }
    }
    std::pair<std::size_t, std::size_t> best{};
    double best_gain = 1e-12;
    bool found = false;
    for (const auto& [pair, w] : between) {
      double gain = w - resolution * total[pair.first] * total[pair.second] / two_m;
      if (gain > best_gain) {
        best_gain = gain;
        best = pair;
        found = true;
      }
    }
    if (!found) return any;
    for (auto& c : community) {
      if (c == best.second) c = best.first;
    }
    any = true;
  }
}

// sum_c [in_c - resolution * tot_c^2 / 2m], i.e. modularity times 2m.
double scaled_quality(const WeightedGraph& g, const std::vector<std::size_t>& community,
                      double two_m, double resolution) {
  std::map<std::size_t, double> inside, total;
  for (std::size_t i = 0; i < g.size(); ++i) {
    total[community[i]] += g.strength[i];
    inside[community[i]] += g.self_loop[i];
    for (auto [j, w] : g.adj[i]) {
      if (community[j] == community[i]) inside[community[i]] += w;
    }
  }
  double q = 0.0;
  for (const auto& [c, tot] : total) q += inside[c] - resolution * tot * tot / two_m;
  return q;
}

// Tries to bisect each cluster along the leading eigenvector of its
// modularity matrix, fine-tuned by a sweep. Keeps splits that improve.
bool split_clusters(const WeightedGraph& g, std::vector<std::size_t>& community, double two_m,
                    double resolution) {
  bool any = false;
  const std::size_t cluster_total = compact(community);
  for (std::size_t c = 0; c < cluster_total; ++c) {
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (community[i] == c) nodes.push_back(i);
    const auto s = static_cast<Eigen::Index>(nodes.size());
    if (s < 2) continue;

    std::map<std::size_t, Eigen::Index> local;
    for (Eigen::Index a = 0; a < s; ++a) local.emplace(nodes[static_cast<std::size_t>(a)], a);
    Eigen::MatrixXd b(s, s);
    for (Eigen::Index a = 0; a < s; ++a) {
      for (Eigen::Index e = 0; e < s; ++e) {
        b(a, e) = -resolution * g.strength[nodes[static_cast<std::size_t>(a)]] *
                  g.strength[nodes[static_cast<std::size_t>(e)]] / two_m;
      }
      for (auto [j, w] : g.adj[nodes[static_cast<std::size_t>(a)]]) {
        auto it = local.find(j);
        if (it != local.end()) b(a, it->second) += w;
      }
    }
    Eigen::VectorXd row_sums = b.rowwise().sum();
    for (Eigen::Index a = 0; a < s; ++a) b(a, a) -= row_sums(a);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
    if (solver.info() != Eigen::Success) continue;
    Eigen::VectorXd lead = solver.eigenvectors().col(s - 1);
    for (Eigen::Index a = 0; a < s; ++a) {
      if (std::abs(lead(a)) > 1e-12) {
        if (lead(a) < 0.0) lead = -lead;
        break;
      }
    }

    std::vector<std::size_t> trial = community;
    std::size_t fresh = cluster_total;
    bool split = false;
    for (Eigen::Index a = 0; a < s; ++a) {
      if (lead(a) < -1e-12) {
        trial[nodes[static_cast<std::size_t>(a)]] = fresh;
        split = true;
      }
    }
    if (!split) continue;
    compact(trial);
    move_sweep(g, trial, two_m, resolution);
    if (scaled_quality(g, trial, two_m, resolution) >
        scaled_quality(g, community, two_m, resolution) + 1e-12) {
      community = trial;
      compact(community);
      any = true;
    }
  }
  return any;
}

// Merges each adjacent pair of clusters and fine-tunes with a sweep; keeps
// the first trial that improves on the current partition.
bool merge_and_sweep(const WeightedGraph& g, std::vector<std::size_t>& community, double two_m,
                     double resolution) {
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (auto [j, w] : g.adj[i]) {
      if (community[i] < community[j]) pairs.emplace(community[i], community[j]);
    }
  }
  const double current = scaled_quality(g, community, two_m, resolution);
  for (auto [a, b] : pairs) {
    auto trial = community;
    for (auto& c : trial) {
      if (c == b) c = a;
    }
    compact(trial);
    move_sweep(g, trial, two_m, resolution);
    if (scaled_quality(g, trial, two_m, resolution) > current + 1e-12) {
      community = trial;
      return true;
    }
  }
  return false;
}

// Components up to this size get spectral splits, pair trials and extra
// starting points; larger ones only sweeps and merges.
constexpr std::size_t kThoroughLimit = 150;

// Vertex sweeps, cluster merges and (when thorough) spectral splits and
// merge-then-sweep trials until none improves.
void refine(const WeightedGraph& g, std::vector<std::size_t>& membership, double two_m,
            double resolution, bool thorough) {
  local_moving(g, membership, two_m, resolution);
  constexpr int kMaxRounds = 100;
  for (int round = 0; round < kMaxRounds; ++round) {
    compact(membership);
    bool improved = move_sweep(g, membership, two_m, resolution);
    compact(membership);
    improved = merge_clusters(g, membership, two_m, resolution) || improved;
    if (thorough) {
      improved = split_clusters(g, membership, two_m, resolution) || improved;
      if (!improved) improved = merge_and_sweep(g, membership, two_m, resolution);
    }
    if (!improved) break;
  }
  compact(membership);
}

// Refined multi-level agglomeration; small components also try one cluster
// (recursive spectral bisection) and singletons as starting points and keep
// the best. Returns local community ids.
std::vector<std::size_t> optimise_component(const WeightedGraph& base, double two_m,
                                            double resolution) {
  std::vector<std::size_t> membership(base.size());
  std::iota(membership.begin(), membership.end(), 0);
  if (two_m <= 0.0) return membership;

  std::vector<std::size_t> singletons = membership;
  WeightedGraph g = base;
  while (true) {
    std::vector<std::size_t> community(g.size());
    std::iota(community.begin(), community.end(), 0);
    bool moved = local_moving(g, community, two_m, resolution);
    std::size_t count = compact(community);
    for (auto& m : membership) m = community[m];
    if (!moved || count == g.size()) break;
    g = aggregate(g, community, count);
  }

  const bool thorough = base.size() <= kThoroughLimit;
  std::vector<std::vector<std::size_t>> starts{membership};
  if (thorough) {
    starts.emplace_back(base.size(), 0);
    starts.push_back(singletons);
  }
  std::vector<std::size_t> best;
  double best_q = 0.0;
  for (auto& start : starts) {
    refine(base, start, two_m, resolution, thorough);
    double q = scaled_quality(base, start, two_m, resolution);
    if (best.empty() || q > best_q + 1e-12) {
      best = start;
      best_q = q;
    }
  }
  return best;
}

}  // namespace

std::size_t ClusterPartition::cluster_count() const noexcept {
  std::size_t k = 0;
  for (auto c : assignment) k = std::max(k, c);
  return k;
}

std::vector<std::size_t> ClusterPartition::cluster_sizes() const {
  std::vector<std::size_t> sizes(cluster_count(), 0);
  for (auto c : assignment) ++sizes[c - 1];
  return sizes;
}

double modularity(const CoNetwork& net, std::span<const std::size_t> assignment,
                  double resolution, EdgeWeighting weighting) {
  if (assignment.size() != net.size()) {
    throw std::invalid_argument("modularity: assignment does not cover every vertex");
  }
  auto weights = edge_weights(net, weighting);
  double two_m = 0.0;
  std::vector<double> strength(net.size(), 0.0);
  std::map<std::size_t, double> inside, total;
  for (std::size_t k = 0; k < net.edges().size(); ++k) {
    const auto& e = net.edges()[k];
    two_m += 2.0 * weights[k];
    strength[e.source] += weights[k];
    strength[e.target] += weights[k];
    if (assignment[e.source] == assignment[e.target]) {
      inside[assignment[e.source]] += 2.0 * weights[k];
    }
  }
  if (two_m == 0.0) return 0.0;
  for (std::size_t v = 0; v < net.size(); ++v) total[assignment[v]] += strength[v];
  double q = 0.0;
  for (const auto& [c, tot] : total) {
    double in = inside.count(c) ? inside.at(c) : 0.0;
    q += in / two_m - resolution * (tot / two_m) * (tot / two_m);
  }
  return q;
}

std::vector<std::size_t> canonical_cluster_ids(std::span<const std::size_t> labels) {
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> info;  // size, first vertex
  for (std::size_t v = 0; v < labels.size(); ++v) {
    auto [it, inserted] = info.emplace(labels[v], std::make_pair(0, v));
    ++it->second.first;
  }
  std::vector<std::pair<std::size_t, std::size_t>> order;  // (label, first vertex)
  for (const auto& [label, stats] : info) order.emplace_back(label, stats.second);
  std::sort(order.begin(), order.end(), [&](const auto& l, const auto& r) {
    auto sl = info.at(l.first).first, sr = info.at(r.first).first;
    if (sl != sr) return sl > sr;
    return l.second < r.second;
  });
  std::map<std::size_t, std::size_t> id;
  for (std::size_t k = 0; k < order.size(); ++k) id.emplace(order[k].first, k + 1);
  std::vector<std::size_t> out(labels.size());
  for (std::size_t v = 0; v < labels.size(); ++v) out[v] = id.at(labels[v]);
  return out;
}

ClusterPartition detect_clusters(const CoNetwork& net, const ClusterOptions& options) {
  if (net.empty()) throw std::invalid_argument("detect_clusters: network is empty");
  if (!(options.resolution > 0.0)) {
    throw std::invalid_argument("detect_clusters: resolution must be positive");
  }
  auto weights = edge_weights(net, options.weighting);
  // The global 2m keeps per-component optimisation equivalent to optimising
  // the modularity of the whole network.
  double two_m = 0.0;
  for (double w : weights) two_m += 2.0 * w;

  std::vector<std::size_t> labels(net.size(), 0);
  std::size_t next_label = 0;
  for (const auto& members : connected_components(net)) {
    auto g = induced_graph(net, weights, members);
    auto local = optimise_component(g, two_m, options.resolution);
    std::size_t used = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      labels[members[i]] = next_label + local[i];
      used = std::max(used, local[i] + 1);
    }
    next_label += used;
  }
  ClusterPartition p;
  p.assignment = canonical_cluster_ids(labels);
  p.modularity = modularity(net, p.assignment, options.resolution, options.weighting);
  return p;
}

std::vector<ClusterSummary> cluster_summary(const ClusterPartition& partition,
                                            const CoNetwork& net,
                                            std::span<const std::string> labels) {
  std::vector<ClusterSummary> out(partition.cluster_count());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k].id = k + 1;
    out[k].label = k < labels.size() && !labels[k].empty() ? labels[k]
                                                           : "Cluster " + std::to_string(k + 1);
  }
  for (std::size_t v = 0; v < partition.assignment.size(); ++v) {
    out[partition.assignment[v] - 1].members.push_back(v);
  }
  for (auto& summary : out) {
    std::sort(summary.members.begin(), summary.members.end(),
              [&](std::size_t l, std::size_t r) {
                const auto& a = net.vertices()[l];
                const auto& b = net.vertices()[r];
                if (a.weight != b.weight) return a.weight > b.weight;
                return a.label < b.label;
              });
    summary.legend =
        summary.label + " (" + std::to_string(summary.members.size()) + " items)";
  }
  return out;
}

}  // namespace coword
