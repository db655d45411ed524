#include "pspec/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace pspec {
namespace {

using Graph = std::vector<std::vector<std::pair<int, double>>>;

// Mesh edges plus, for every interior edge of a triangle mesh, the straight
// segment between the two opposite vertices in the unfolded flap when it
// stays inside the flap. Every graph path is realized by a path on the
// polyhedral surface.
Graph distance_graph(const Mesh& mesh) {
  const auto& x = mesh.vertices();
  Graph g(mesh.vertex_count());
  for (std::size_t e = 0; e < mesh.edges().size(); ++e) {
    const int a = mesh.edges()[e][0], b = mesh.edges()[e][1];
    const double len = (x[a] - x[b]).norm();
    g[a].emplace_back(b, len);
    g[b].emplace_back(a, len);

    const auto& cells = mesh.edge_cells()[e];
    if (mesh.dimension() != 2 || cells.size() != 2) continue;
    int opp[2] = {-1, -1};
    for (int k = 0; k < 2; ++k) {
      for (int v : mesh.cell(cells[k])) {
        if (v != a && v != b) opp[k] = v;
      }
    }
    const Vec3 axis = (x[b] - x[a]) / len;
    auto unfold = [&](int v) {
      const Vec3 r = x[v] - x[a];
      const double along = r.dot(axis);
      return std::pair{along, (r - along * axis).norm()};
    };
    const auto [cx, cy] = unfold(opp[0]);
    const auto [dx, dy] = unfold(opp[1]);
    const double cross_at = cx + (dx - cx) * cy / (cy + dy);
    if (!(cross_at > 0.0 && cross_at < len)) continue;
    const double d = std::hypot(cx - dx, cy + dy);
    g[opp[0]].emplace_back(opp[1], d);
    g[opp[1]].emplace_back(opp[0], d);
  }
  return g;
}

std::vector<double> dijkstra(const Graph& g, int source) {
  std::vector<double> dist(g.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (auto [w, len] : g[v]) {
      const double nd = d + len;
      if (nd < dist[w]) {
        dist[w] = nd;
        heap.emplace(nd, w);
      }
    }
  }
  return dist;
}

}  // namespace

std::vector<double> edge_graph_distances(const Mesh& mesh, int source) {
  if (source < 0 || static_cast<std::size_t>(source) >= mesh.vertex_count()) {
    throw std::out_of_range("source vertex out of range");
  }
  return dijkstra(distance_graph(mesh), source);
}

double diameter(const Mesh& mesh, const DiameterOptions& opts) {
  const std::size_t nv = mesh.vertex_count();
  const Graph g = distance_graph(mesh);
  auto sweep = [&](int s) {
    auto d = dijkstra(g, s);
    for (double v : d) {
      if (v == std::numeric_limits<double>::infinity()) {
        throw std::invalid_argument("diameter of a disconnected mesh");
      }
    }
    return d;
  };

  double best = 0.0;
  if (nv <= opts.exact_vertex_budget) {
    for (std::size_t s = 0; s < nv; ++s) {
      const auto d = sweep(static_cast<int>(s));
      best = std::max(best, *std::max_element(d.begin(), d.end()));
    }
    return best;
  }

  // Alternate double sweeps (the farthest vertex from a source is a good next
  // source) with farthest-point sampling to spread the landmarks.
  std::vector<char> used(nv, 0);
  std::vector<double> to_set(nv, std::numeric_limits<double>::infinity());
  int source = 0;
  for (int k = 0; k < opts.landmarks; ++k) {
    used[source] = 1;
    const auto d = sweep(source);
    int far = source;
    for (std::size_t v = 0; v < nv; ++v) {
      to_set[v] = std::min(to_set[v], d[v]);
      if (d[v] > d[far]) far = static_cast<int>(v);
    }
    best = std::max(best, d[far]);
    if (k % 2 == 0 && !used[far]) {
      source = far;
    } else {
      source = static_cast<int>(std::max_element(to_set.begin(), to_set.end()) - to_set.begin());
    }
  }
  return best;
}

}  // namespace pspec
