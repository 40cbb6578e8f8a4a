#include "coword/layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <stdexcept>

namespace coword {

std::vector<ComponentDistances> graph_distances(const CoNetwork& net) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto adj = net.adjacency();
  std::vector<std::size_t> local(net.size(), 0);
  std::vector<ComponentDistances> out;
  for (auto& members : connected_components(net)) {
    for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = i;
    const std::size_t n = members.size();
    ComponentDistances cd{std::move(members), std::vector<double>(n * n, kInf)};

    using Item = std::pair<double, std::size_t>;
    for (std::size_t s = 0; s < n; ++s) {
      double* row = &cd.distances[s * n];
      row[s] = 0.0;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      heap.emplace(0.0, s);
      while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > row[u]) continue;
        for (auto [w, c] : adj[cd.vertices[u]]) {
          std::size_t lw = local[w];
          double nd = d + 1.0 / static_cast<double>(c);
          if (nd < row[lw]) {
            row[lw] = nd;
            heap.emplace(nd, lw);
          }
        }
      }
    }
    out.push_back(std::move(cd));
  }
  return out;
}

StressModel::StressModel(const ComponentDistances& distances, double edge_scale)
    : n_(distances.size()), length_(n_ * n_, 0.0), strength_(n_ * n_, 0.0) {
  if (!(edge_scale > 0.0)) throw std::invalid_argument("edge scale must be positive");
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (i == j) continue;
      double d = distances.at(i, j);
      if (!std::isfinite(d) || d <= 0.0) {
        throw std::invalid_argument("stress model needs finite positive distances");
      }
      length_[i * n_ + j] = edge_scale * d;
      strength_[i * n_ + j] = 1.0 / (d * d);
    }
  }
}

double StressModel::stress(std::span<const Point> p) const {
  double e = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      double dist = std::hypot(p[i].x - p[j].x, p[i].y - p[j].y);
      double diff = dist - length_[i * n_ + j];
      e += strength_[i * n_ + j] * diff * diff;
    }
  }
  return e;
}

double StressModel::partial_stress(std::span<const Point> p, std::size_t v) const {
  double e = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (i == v) continue;
    double dist = std::hypot(p[v].x - p[i].x, p[v].y - p[i].y);
    double diff = dist - length_[v * n_ + i];
    e += strength_[v * n_ + i] * diff * diff;
  }
  return e;
}

Point StressModel::gradient(std::span<const Point> p, std::size_t v) const {
  Point g;
  for (std::size_t i = 0; i < n_; ++i) {
    if (i == v) continue;
    double dx = p[v].x - p[i].x;
    double dy = p[v].y - p[i].y;
    double dist = std::hypot(dx, dy);
    if (dist == 0.0) continue;
    double f = 2.0 * strength_[v * n_ + i] * (1.0 - length_[v * n_ + i] / dist);
    g.x += f * dx;
    g.y += f * dy;
  }
  return g;
}

std::array<double, 3> StressModel::hessian(std::span<const Point> p, std::size_t v) const {
  std::array<double, 3> h{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n_; ++i) {
    if (i == v) continue;
    double dx = p[v].x - p[i].x;
    double dy = p[v].y - p[i].y;
    double dist = std::hypot(dx, dy);
    if (dist == 0.0) continue;
    double k = 2.0 * strength_[v * n_ + i];
    double l_over_d3 = length_[v * n_ + i] / (dist * dist * dist);
    h[0] += k * (1.0 - l_over_d3 * dy * dy);
    h[1] += k * l_over_d3 * dx * dy;
    h[2] += k * (1.0 - l_over_d3 * dx * dx);
  }
  return h;
}

namespace {

double norm(Point g) { return std::hypot(g.x, g.y); }

// Descent direction for vertex v: Newton when the 2x2 Hessian is positive
// definite, otherwise the gradient scaled by the spring stiffness.
Point descent_direction(const StressModel& model, std::span<const Point> p, std::size_t v,
                        Point g) {
  auto [hxx, hxy, hyy] = model.hessian(p, v);
  double det = hxx * hyy - hxy * hxy;
  if (hxx > 0.0 && det > 1e-300) {
    return {-(hyy * g.x - hxy * g.y) / det, -(hxx * g.y - hxy * g.x) / det};
  }
  double scale = std::max(hxx + hyy, 1e-12);
  return {-g.x / scale, -g.y / scale};
}

}  // namespace

ComponentLayout layout_component(const ComponentDistances& distances,
                                 const LayoutParams& params) {
  if (params.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(params.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");

  const std::size_t n = distances.size();
  ComponentLayout out;
  out.vertices = distances.vertices;
  out.positions.assign(n, Point{});
  if (n <= 1) {
    out.converged = true;
    return out;
  }

  double max_d = 0.0;
  for (double d : distances.distances) max_d = std::max(max_d, d);
  const double radius = params.edge_scale * max_d / 2.0;
  std::mt19937_64 rng(params.seed);
  auto jitter = [&] {
    // Portable uniform in [-0.5, 0.5); std distributions are not.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
  };
  for (std::size_t k = 0; k < n; ++k) {
    double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    out.positions[k] = {radius * std::cos(angle), radius * std::sin(angle)};
    if (params.seed != 0) {
      out.positions[k].x += 0.1 * radius * jitter();
      out.positions[k].y += 0.1 * radius * jitter();
    }
  }

  StressModel model(distances, params.edge_scale);
  auto& p = out.positions;
  out.initial_stress = model.stress(p);
  if (params.record_trace) out.stress_trace.push_back(out.initial_stress);

  // Gradients are kept current incrementally: moving one vertex changes a
  // single term in every other vertex's sum.
  auto term = [&](std::size_t v, std::size_t i, Point at) {
    double dx = p[v].x - at.x;
    double dy = p[v].y - at.y;
    double dist = std::hypot(dx, dy);
    if (dist == 0.0) return Point{};
    double f = 2.0 * model.strength(v, i) * (1.0 - model.length(v, i) / dist);
    return Point{f * dx, f * dy};
  };
  std::vector<Point> grads(n);
  auto refresh = [&] {
    for (std::size_t v = 0; v < n; ++v) grads[v] = model.gradient(p, v);
  };
  refresh();

  constexpr int kMaxHalvings = 60;
  bool stalled = false;
  bool exact = true;
  while (out.iterations < params.max_iterations && !stalled) {
    std::size_t m = 0;
    double worst = -1.0;
    for (std::size_t v = 0; v < n; ++v) {
      double g = norm(grads[v]);
      if (g > worst) {
        worst = g;
        m = v;
      }
    }
    if (worst < params.tolerance) {
      if (exact) {
        out.converged = true;
        break;
      }
      refresh();
      exact = true;
      continue;
    }

    const Point start = p[m];
    Point g = model.gradient(p, m);
    while (norm(g) >= params.tolerance && out.iterations < params.max_iterations) {
      Point dir = descent_direction(model, p, m, g);
      const Point origin = p[m];
      const double before = model.partial_stress(p, m);
      bool accepted = false;
      double step = 1.0;
      for (int h = 0; h < kMaxHalvings; ++h, step *= 0.5) {
        p[m] = {origin.x + step * dir.x, origin.y + step * dir.y};
        if (model.partial_stress(p, m) < before) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        p[m] = origin;
        stalled = true;
        break;
      }
      ++out.iterations;
      if (params.record_trace) out.stress_trace.push_back(model.stress(p));
      g = model.gradient(p, m);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == m) continue;
      Point before = term(i, m, start);
      Point after = term(i, m, p[m]);
      grads[i].x += after.x - before.x;
      grads[i].y += after.y - before.y;
    }
    grads[m] = g;
    exact = false;
  }
  out.final_stress = model.stress(p);
  return out;
}

void fit_unit_square(std::span<Point> points) {
  if (points.empty()) return;
  double min_x = points[0].x, max_x = points[0].x;
  double min_y = points[0].y, max_y = points[0].y;
  for (const auto& q : points) {
    min_x = std::min(min_x, q.x);
    max_x = std::max(max_x, q.x);
    min_y = std::min(min_y, q.y);
    max_y = std::max(max_y, q.y);
  }
  const double w = max_x - min_x;
  const double h = max_y - min_y;
  const double extent = std::max(w, h);
  if (extent == 0.0) {
    for (auto& q : points) q = {0.5, 0.5};
    return;
  }
  const double off_x = (1.0 - w / extent) / 2.0;
  const double off_y = (1.0 - h / extent) / 2.0;
  for (auto& q : points) {
    q.x = std::clamp((q.x - min_x) / extent + off_x, 0.0, 1.0);
    q.y = std::clamp((q.y - min_y) / extent + off_y, 0.0, 1.0);
  }
}

LayoutMap pack_components(std::span<const ComponentLayout> components,
                          std::size_t vertex_count) {
  if (components.empty()) throw std::invalid_argument("pack_components: no layouts");
  LayoutMap map;
  map.coordinates.assign(vertex_count, Point{});

  std::vector<std::size_t> order(components.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return components[l].vertices.size() > components[r].vertices.size();
  });

  // The first shelf holds the ceil(sqrt(k)) largest components.
  constexpr double kGap = 0.5;
  const auto per_row = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(components.size()))));
  double shelf_width = 0.0;
  for (std::size_t k = 0; k < per_row; ++k) {
    if (k) shelf_width += kGap;
    shelf_width += std::sqrt(static_cast<double>(components[order[k]].vertices.size()));
  }

  std::vector<Point> all;
  std::vector<std::size_t> owner;
  double x = 0.0, y = 0.0, shelf_height = 0.0;
  for (std::size_t idx : order) {
    const auto& c = components[idx];
    const double side = std::sqrt(static_cast<double>(c.vertices.size()));
    if (x > 0.0 && x + side > shelf_width + 1e-12) {
      y += shelf_height + kGap;
      x = 0.0;
      shelf_height = 0.0;
    }
    std::vector<Point> local = c.positions;
    fit_unit_square(local);
    for (std::size_t i = 0; i < local.size(); ++i) {
      all.push_back({x + local[i].x * side, y + local[i].y * side});
      owner.push_back(c.vertices[i]);
    }
    x += side + kGap;
    shelf_height = std::max(shelf_height, side);
    map.final_stress += c.final_stress;
    map.iterations += c.iterations;
    map.converged = map.converged && c.converged;
  }
  fit_unit_square(all);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (owner[i] >= vertex_count) throw std::invalid_argument("pack_components: bad vertex");
    map.coordinates[owner[i]] = all[i];
  }
  return map;
}

LayoutMap kamada_kawai(const CoNetwork& net, const LayoutParams& params) {
  if (net.empty()) throw std::invalid_argument("kamada_kawai: network is empty");
  std::vector<ComponentLayout> layouts;
  for (const auto& cd : graph_distances(net)) layouts.push_back(layout_component(cd, params));
  return pack_components(layouts, net.size());
}

}  // namespace coword
