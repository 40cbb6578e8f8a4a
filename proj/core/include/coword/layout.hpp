#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "coword/conet.hpp"

namespace coword {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

// All-pairs shortest paths inside one connected component, using edge
// length 1 / c_ij so that stronger co-occurrence means closer.
struct ComponentDistances {
  std::vector<std::size_t> vertices;  // global indices, ascending
  std::vector<double> distances;      // row-major, local indices

  std::size_t size() const noexcept { return vertices.size(); }
  double at(std::size_t a, std::size_t b) const { return distances[a * size() + b]; }
};

std::vector<ComponentDistances> graph_distances(const CoNetwork& net);

struct LayoutParams {
  double edge_scale = 1.0;  // L0: display length of one unit of graph distance
  std::size_t max_iterations = 200000;  // accepted relaxation steps per component
  double tolerance = 1e-4;  // gradient norm at which a vertex counts as relaxed
  std::uint64_t seed = 0;   // 0: plain circle start; otherwise a fixed jitter
  bool record_trace = false;
};

// Kamada-Kawai stress E = sum_{i<j} k_ij (|p_i - p_j| - L0 d_ij)^2 with
// k_ij = 1 / d_ij^2, over one component.
class StressModel {
 public:
  StressModel(const ComponentDistances& distances, double edge_scale);

  std::size_t size() const noexcept { return n_; }
  double length(std::size_t i, std::size_t j) const { return length_[i * n_ + j]; }
  double strength(std::size_t i, std::size_t j) const { return strength_[i * n_ + j]; }
  double stress(std::span<const Point> positions) const;
  // Terms of the stress that involve vertex v.
  double partial_stress(std::span<const Point> positions, std::size_t v) const;
  Point gradient(std::span<const Point> positions, std::size_t v) const;
  // Hessian of the stress with respect to p_v: {xx, xy, yy}.
  std::array<double, 3> hessian(std::span<const Point> positions, std::size_t v) const;

 private:
  std::size_t n_;
  std::vector<double> length_;    // L0 * d_ij
  std::vector<double> strength_;  // 1 / d_ij^2
};

struct ComponentLayout {
  std::vector<std::size_t> vertices;  // global indices
  std::vector<Point> positions;       // raw display coordinates
  double initial_stress = 0.0;
  double final_stress = 0.0;
  std::size_t iterations = 0;
  bool converged = false;  // false: budget exhausted or no descent possible
  std::vector<double> stress_trace;  // stress after each accepted step, when recorded
};

// Circle start in vertex order, then repeatedly relaxes the vertex with the
// largest gradient by damped Newton steps.
ComponentLayout layout_component(const ComponentDistances& distances,
                                 const LayoutParams& params);

struct LayoutMap {
  std::vector<Point> coordinates;  // per vertex, inside the unit square (y down)
  double final_stress = 0.0;       // sum over components, raw coordinates
  std::size_t iterations = 0;
  bool converged = true;
};

// Scales each component by sqrt(vertex count), shelf-packs them left to
// right largest first, and fits the result into the unit square.
LayoutMap pack_components(std::span<const ComponentLayout> components,
                          std::size_t vertex_count);

// Throws std::invalid_argument on an empty network.
LayoutMap kamada_kawai(const CoNetwork& net, const LayoutParams& params = {});

// Uniform scale and translation into [0,1]^2, centred on the short axis.
// A single point lands on (0.5, 0.5).
void fit_unit_square(std::span<Point> points);

}  // namespace coword
