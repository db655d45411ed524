#pragma once

#include "pspec/types.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace pspec {

/// Discrete manifold of intrinsic dimension 1 (segments) or 2 (triangles)
/// embedded in R^3. Immutable after construction. Carries lumped vertex
/// measures and the constant gradients of the linear hat functions per cell.
class Mesh {
 public:
  Mesh() = default;
  static Mesh from_triangles(std::vector<Vec3> vertices,
                             const std::vector<std::array<int, 3>>& triangles);
  static Mesh from_segments(std::vector<Vec3> vertices,
                            const std::vector<std::array<int, 2>>& segments);

  int dimension() const { return dim_; }
  int cell_size() const { return dim_ + 1; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t cell_count() const { return cell_measure_.size(); }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const Vec3& vertex(std::size_t v) const { return vertices_[v]; }

  std::span<const int> cell(std::size_t c) const {
    return {cells_.data() + c * cell_size(), static_cast<std::size_t>(cell_size())};
  }
  /// Gradients of the hat functions of the cell's vertices, in cell order.
  std::span<const Vec3> basis_gradients(std::size_t c) const {
    return {grads_.data() + c * cell_size(), static_cast<std::size_t>(cell_size())};
  }

  const std::vector<double>& vertex_measure() const { return vertex_measure_; }
  const std::vector<double>& cell_measure() const { return cell_measure_; }
  const std::vector<std::vector<int>>& neighbors() const { return neighbors_; }
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }

  /// Cells incident to each edge, parallel to edges(); one or two entries.
  const std::vector<std::vector<int>>& edge_cells() const { return edge_cells_; }

  bool closed() const { return closed_; }
  double total_measure() const { return total_; }
  double mean_edge_length() const;

  /// Gradient of the linear interpolant of `values` on cell c.
  Vec3 cell_gradient(std::size_t c, std::span<const double> values) const {
    Vec3 g = Vec3::Zero();
    auto idx = cell(c);
    auto gr = basis_gradients(c);
    for (int i = 0; i < cell_size(); ++i) g += values[idx[i]] * gr[i];
    return g;
  }

  /// Uniformly scaled copy.
  Mesh scaled(double factor) const;

 private:
  void finalize();

  int dim_ = 2;
  std::vector<Vec3> vertices_;
  std::vector<int> cells_;
  std::vector<Vec3> grads_;
  std::vector<double> vertex_measure_;
  std::vector<double> cell_measure_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::vector<int>> edge_cells_;
  bool closed_ = false;
  double total_ = 0.0;
};

// Builders ------------------------------------------------------------------

/// Subdivided icosahedron projected to the sphere of the given radius, in a
/// fixed generic orientation (no vertex lies on a coordinate plane).
Mesh build_icosphere(int level, double radius = 1.0);

/// Prolate ellipsoid of revolution together with its curvature sampling.
struct Ellipsoid {
  Mesh mesh;
  double aspect = 1.0;
  /// Equatorial semi-axis; the polar semi-axis is aspect * scale.
  double scale = 1.0;
  /// Minimum Gaussian curvature over the vertices.
  double min_curvature = 1.0;
};

/// Surface x^2 + y^2 + z^2/a^2 = scale^2 sampled on an icosphere of the given
/// level. With `normalize` the scale is chosen so the minimum sampled Gaussian
/// curvature is exactly 1.
Ellipsoid build_ellipsoid(double aspect, int level, bool normalize);

/// Gaussian curvature of the spheroid with equatorial semi-axis `scale` and
/// polar semi-axis `aspect * scale` at a point on it.
double spheroid_gaussian_curvature(double aspect, double scale, const Vec3& x);

/// Closed polygon inscribed in the circle of the given radius.
Mesh build_circle(int segments, double radius = 1.0);

/// Uniform partition of [0, length] along the x axis (open mesh).
Mesh build_interval(int segments, double length = 1.0);

// Measures ------------------------------------------------------------------

double total_measure(const Mesh& mesh);

/// H^n(M) / H^n(S^n). Rejects open meshes.
double beta(const Mesh& mesh);

struct DiameterOptions {
  /// All-pairs shortest paths are computed up to this many vertices.
  std::size_t exact_vertex_budget = 2500;
  /// Sources for the landmark estimate above the budget.
  int landmarks = 24;
};

/// Diameter of the mesh distance graph: mesh edges plus unfolded flap
/// diagonals across interior edges. The graph metric bounds the polyhedral
/// geodesic distance from above. Exact below the vertex budget; landmark
/// estimate above it.
double diameter(const Mesh& mesh, const DiameterOptions& opts = {});

/// Single-source shortest-path distances in the mesh distance graph.
std::vector<double> edge_graph_distances(const Mesh& mesh, int source);

/// Connected components of the vertex graph restricted to `mask`
/// (label -1 outside the mask). Returns the component count.
int connected_components(const Mesh& mesh, std::span<const char> mask,
                         std::vector<int>& labels);

}  // namespace pspec
