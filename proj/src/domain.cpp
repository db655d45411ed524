#include "pspec/domain.hpp"

#include "pspec/cap.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace pspec {
namespace {

constexpr double kSnapFraction = 0.05;

}  // namespace

std::vector<int> Domain::interior_vertices() const {
  std::vector<int> out;
  for (std::size_t v = 0; v < pinned.size(); ++v) {
    if (!pinned[v]) out.push_back(static_cast<int>(v));
  }
  return out;
}

double Domain::ambient_beta() const {
  return ambient_measure / sphere_measure(mesh.dimension());
}

Domain whole_domain(const Mesh& closed) {
  if (!closed.closed()) throw std::invalid_argument("whole_domain requires a closed mesh");
  Domain d;
  d.mesh = closed;
  d.pinned.assign(closed.vertex_count(), 0);
  d.ambient_measure = closed.total_measure();
  return d;
}

Domain interval_domain(int segments, double length) {
  Domain d;
  d.mesh = build_interval(segments, length);
  d.pinned.assign(d.mesh.vertex_count(), 0);
  d.pinned.front() = 1;
  d.pinned.back() = 1;
  d.boundary_measure = 2.0;
  d.ambient_measure = d.mesh.total_measure();
  return d;
}

Domain superlevel_domain(const Mesh& closed, std::span<const double> f, double t) {
  if (closed.dimension() != 2 || !closed.closed()) {
    throw std::invalid_argument("superlevel_domain requires a closed triangle mesh");
  }
  if (f.size() != closed.vertex_count()) {
    throw std::invalid_argument("field size does not match vertex count");
  }
  const std::size_t nv = closed.vertex_count();
  std::vector<double> g(nv);
  for (std::size_t v = 0; v < nv; ++v) g[v] = f[v] - t;

  // Snap vertices that sit within a small fraction of an edge from the level
  // set; this keeps the cut free of slivers.
  std::vector<char> snap(nv, 0);
  for (const auto& e : closed.edges()) {
    const double ga = g[e[0]], gb = g[e[1]];
    if (!((ga > 0.0 && gb < 0.0) || (ga < 0.0 && gb > 0.0))) continue;
    const double s = ga / (ga - gb);
    if (s < kSnapFraction) snap[e[0]] = 1;
    if (s > 1.0 - kSnapFraction) snap[e[1]] = 1;
  }
  for (std::size_t v = 0; v < nv; ++v) {
    if (snap[v]) g[v] = 0.0;
  }

  const auto& x = closed.vertices();
  std::vector<Vec3> verts;
  std::vector<char> pinned;
  std::vector<int> remap(nv, -1);
  std::map<std::pair<int, int>, int> crossing;

  auto keep_vertex = [&](int v) {
    if (remap[v] < 0) {
      remap[v] = static_cast<int>(verts.size());
      verts.push_back(x[v]);
      pinned.push_back(g[v] == 0.0 ? 1 : 0);
    }
    return remap[v];
  };
  auto cross_vertex = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = crossing.find(key);
    if (it != crossing.end()) return it->second;
    const double s = g[a] / (g[a] - g[b]);
    const int id = static_cast<int>(verts.size());
    verts.push_back(x[a] + s * (x[b] - x[a]));
    pinned.push_back(1);
    crossing.emplace(key, id);
    return id;
  };

  std::vector<std::array<int, 3>> tris;
  for (std::size_t c = 0; c < closed.cell_count(); ++c) {
    const auto idx = closed.cell(c);
    bool any_positive = false;
    for (int v : idx) any_positive |= g[v] > 0.0;
    if (!any_positive) continue;

    std::vector<int> poly;
    for (int i = 0; i < 3; ++i) {
      const int a = idx[i], b = idx[(i + 1) % 3];
      if (g[a] >= 0.0) poly.push_back(keep_vertex(a));
      if ((g[a] > 0.0 && g[b] < 0.0) || (g[a] < 0.0 && g[b] > 0.0)) {
        poly.push_back(cross_vertex(a, b));
      }
    }
    if (poly.size() == 3) {
      tris.push_back({poly[0], poly[1], poly[2]});
    } else if (poly.size() == 4) {
      const double d02 = (verts[poly[0]] - verts[poly[2]]).squaredNorm();
      const double d13 = (verts[poly[1]] - verts[poly[3]]).squaredNorm();
      if (d02 <= d13) {
        tris.push_back({poly[0], poly[1], poly[2]});
        tris.push_back({poly[0], poly[2], poly[3]});
      } else {
        tris.push_back({poly[0], poly[1], poly[3]});
        tris.push_back({poly[1], poly[2], poly[3]});
      }
    }
  }
  if (tris.empty()) throw std::invalid_argument("superlevel domain is empty");

  Domain d;
  try {
    d.mesh = Mesh::from_triangles(std::move(verts), tris);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("superlevel domain is not a valid mesh: ") + e.what());
  }
  d.pinned = std::move(pinned);
  d.ambient_measure = closed.total_measure();

  std::vector<char> interior(d.pinned.size());
  for (std::size_t v = 0; v < interior.size(); ++v) interior[v] = !d.pinned[v];
  std::vector<int> labels;
  const int parts = connected_components(d.mesh, interior, labels);
  if (parts == 0) throw std::invalid_argument("superlevel domain has no interior vertices");
  if (parts > 1) throw std::invalid_argument("superlevel domain interior is disconnected");

  for (std::size_t e = 0; e < d.mesh.edges().size(); ++e) {
    if (d.mesh.edge_cells()[e].size() == 1) {
      const auto& ed = d.mesh.edges()[e];
      d.boundary_measure += (d.mesh.vertex(ed[0]) - d.mesh.vertex(ed[1])).norm();
    }
  }
  return d;
}

std::vector<double> coordinate_field(const Mesh& mesh, int axis) {
  if (axis < 0 || axis > 2) throw std::out_of_range("axis must be 0, 1 or 2");
  std::vector<double> out(mesh.vertex_count());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = mesh.vertex(v)[axis];
  return out;
}

}  // namespace pspec
