#include "pspec/mesh.hpp"

#include "pspec/cap.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace pspec {

Mesh Mesh::from_triangles(std::vector<Vec3> vertices,
                          const std::vector<std::array<int, 3>>& triangles) {
  Mesh m;
  m.dim_ = 2;
  m.vertices_ = std::move(vertices);
  m.cells_.reserve(triangles.size() * 3);
  for (const auto& t : triangles) m.cells_.insert(m.cells_.end(), t.begin(), t.end());
  m.finalize();
  return m;
}

Mesh Mesh::from_segments(std::vector<Vec3> vertices,
                         const std::vector<std::array<int, 2>>& segments) {
  Mesh m;
  m.dim_ = 1;
  m.vertices_ = std::move(vertices);
  m.cells_.reserve(segments.size() * 2);
  for (const auto& s : segments) m.cells_.insert(m.cells_.end(), s.begin(), s.end());
  m.finalize();
  return m;
}

void Mesh::finalize() {
  const int k = cell_size();
  const std::size_t nv = vertices_.size();
  const std::size_t nc = cells_.size() / k;
  if (nv == 0 || nc == 0) throw std::invalid_argument("mesh has no vertices or cells");

  for (int idx : cells_) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= nv) {
      throw std::invalid_argument("cell references vertex " + std::to_string(idx) +
                                  " outside [0, " + std::to_string(nv) + ")");
    }
  }

  cell_measure_.assign(nc, 0.0);
  vertex_measure_.assign(nv, 0.0);
  grads_.assign(nc * k, Vec3::Zero());

  for (std::size_t c = 0; c < nc; ++c) {
    const int* idx = cells_.data() + c * k;
    double measure = 0.0;
    if (dim_ == 2) {
      const Vec3& x0 = vertices_[idx[0]];
      const Vec3& x1 = vertices_[idx[1]];
      const Vec3& x2 = vertices_[idx[2]];
      const Vec3 normal = (x1 - x0).cross(x2 - x0);
      const double twice_area = normal.norm();
      measure = 0.5 * twice_area;
      if (measure > 0.0) {
        const Vec3 n = normal / twice_area;
        const Vec3* x[3] = {&x0, &x1, &x2};
        for (int i = 0; i < 3; ++i) {
          grads_[c * 3 + i] = n.cross(*x[(i + 2) % 3] - *x[(i + 1) % 3]) / twice_area;
        }
      }
    } else {
      const Vec3 e = vertices_[idx[1]] - vertices_[idx[0]];
      measure = e.norm();
      if (measure > 0.0) {
        grads_[c * 2 + 1] = e / (measure * measure);
        grads_[c * 2 + 0] = -grads_[c * 2 + 1];
      }
    }
    if (!(measure > 0.0)) {
      throw std::invalid_argument("cell " + std::to_string(c) + " has non-positive measure");
    }
    cell_measure_[c] = measure;
    for (int i = 0; i < k; ++i) vertex_measure_[idx[i]] += measure / k;
  }

  // Edges with their incident cells. For segments the cells are the edges.
  std::map<std::pair<int, int>, int> edge_index;
  edges_.clear();
  edge_cells_.clear();
  for (std::size_t c = 0; c < nc; ++c) {
    const int* idx = cells_.data() + c * k;
    const int ne = dim_ == 2 ? 3 : 1;
    for (int i = 0; i < ne; ++i) {
      int a = idx[i], b = idx[(i + 1) % k];
      if (a == b) throw std::invalid_argument("degenerate cell " + std::to_string(c));
      if (a > b) std::swap(a, b);
      auto [it, inserted] = edge_index.try_emplace({a, b}, static_cast<int>(edges_.size()));
      if (inserted) {
        edges_.push_back({a, b});
        edge_cells_.emplace_back();
      }
      edge_cells_[it->second].push_back(static_cast<int>(c));
    }
  }

  neighbors_.assign(nv, {});
  for (const auto& e : edges_) {
    neighbors_[e[0]].push_back(e[1]);
    neighbors_[e[1]].push_back(e[0]);
  }

  if (dim_ == 2) {
    closed_ = true;
    for (const auto& ec : edge_cells_) {
      if (ec.size() > 2) throw std::invalid_argument("non-manifold edge in triangle mesh");
      if (ec.size() != 2) closed_ = false;
    }
  } else {
    closed_ = true;
    for (const auto& nb : neighbors_) {
      if (nb.size() > 2) throw std::invalid_argument("branching vertex in segment mesh");
      if (nb.size() != 2) closed_ = false;
    }
  }

  for (std::size_t v = 0; v < nv; ++v) {
    if (neighbors_[v].empty()) {
      throw std::invalid_argument("vertex " + std::to_string(v) + " is not used by any cell");
    }
  }
  std::vector<char> all(nv, 1);
  std::vector<int> labels;
  if (connected_components(*this, all, labels) != 1) {
    throw std::invalid_argument("mesh is not connected");
  }

  total_ = 0.0;
  for (double m : cell_measure_) total_ += m;
}

double Mesh::mean_edge_length() const {
  double sum = 0.0;
  for (const auto& e : edges_) sum += (vertices_[e[0]] - vertices_[e[1]]).norm();
  return sum / static_cast<double>(edges_.size());
}

Mesh Mesh::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
  Mesh m;
  m.dim_ = dim_;
  m.vertices_ = vertices_;
  for (auto& x : m.vertices_) x *= factor;
  m.cells_ = cells_;
  m.finalize();
  return m;
}

double total_measure(const Mesh& mesh) { return mesh.total_measure(); }

double beta(const Mesh& mesh) {
  if (!mesh.closed()) throw std::invalid_argument("beta requires a closed mesh");
  return mesh.total_measure() / sphere_measure(mesh.dimension());
}

int connected_components(const Mesh& mesh, std::span<const char> mask,
                         std::vector<int>& labels) {
  const std::size_t nv = mesh.vertex_count();
  labels.assign(nv, -1);
  int count = 0;
  std::vector<int> stack;
  for (std::size_t s = 0; s < nv; ++s) {
    if (!mask[s] || labels[s] >= 0) continue;
    labels[s] = count;
    stack.push_back(static_cast<int>(s));
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : mesh.neighbors()[v]) {
        if (mask[w] && labels[w] < 0) {
          labels[w] = count;
          stack.push_back(w);
        }
      }
    }
    ++count;
  }
  return count;
}

}  // namespace pspec
