#pragma once

#include "pspec/mesh.hpp"

#include <span>
#include <vector>

namespace pspec {

/// A region of a closed manifold, meshed on its own. Pinned vertices lie on
/// the boundary trace and carry homogeneous Dirichlet data.
struct Domain {
  Mesh mesh;
  std::vector<char> pinned;
  /// H^{n-1} of the boundary trace (counting measure for n = 1).
  double boundary_measure = 0.0;
  /// H^n of the closed manifold the domain was cut from.
  double ambient_measure = 0.0;

  std::vector<int> interior_vertices() const;
  bool is_whole() const { return boundary_measure == 0.0; }
  /// Volume ratio of the ambient manifold against S^n.
  double ambient_beta() const;
};

/// The whole closed mesh as a domain (no boundary).
Domain whole_domain(const Mesh& closed);

/// The region {f > t} of a closed triangle mesh, cut along the linear
/// interpolant's level set. Vertices within 5% of an edge from the level set
/// are snapped onto it. The interior must be nonempty and connected.
Domain superlevel_domain(const Mesh& closed, std::span<const double> f, double t);

/// The interval [0, length] with both endpoints pinned.
Domain interval_domain(int segments, double length = 1.0);

/// Vertex z coordinates (a convenient field on the sphere and ellipsoids).
std::vector<double> coordinate_field(const Mesh& mesh, int axis);

}  // namespace pspec
