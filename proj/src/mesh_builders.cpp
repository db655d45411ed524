#include "pspec/mesh.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace pspec {
namespace {

constexpr double kPi = std::numbers::pi;

// Unit icosahedron in a generic orientation: no vertex of any subdivision
// level lies on a coordinate plane, so coordinate level sets never pass
// through vertices.
void icosahedron(std::vector<Vec3>& verts, std::vector<std::array<int, 3>>& tris) {
  const double h = 1.0 / std::sqrt(5.0);
  const double r = 2.0 / std::sqrt(5.0);
  verts.clear();
  verts.emplace_back(0.0, 0.0, 1.0);
  for (int k = 0; k < 5; ++k) {
    const double a = 2.0 * kPi * k / 5.0;
    verts.emplace_back(r * std::cos(a), r * std::sin(a), h);
  }
  for (int k = 0; k < 5; ++k) {
    const double a = 2.0 * kPi * k / 5.0 + kPi / 5.0;
    verts.emplace_back(r * std::cos(a), r * std::sin(a), -h);
  }
  verts.emplace_back(0.0, 0.0, -1.0);
  const Eigen::Matrix3d tilt = Eigen::AngleAxisd(0.5, Vec3(1.0, 2.0, 3.0).normalized()).toRotationMatrix();
  for (Vec3& v : verts) v = tilt * v;

  tris.clear();
  for (int k = 0; k < 5; ++k) {
    const int u0 = 1 + k, u1 = 1 + (k + 1) % 5;
    const int l0 = 6 + k, l1 = 6 + (k + 1) % 5;
    tris.push_back({0, u0, u1});
    tris.push_back({u0, l0, u1});
    tris.push_back({u1, l0, l1});
    tris.push_back({11, l1, l0});
  }
}

}  // namespace

Mesh build_icosphere(int level, double radius) {
  if (level < 0) throw std::invalid_argument("icosphere level must be >= 0");
  if (level > 8) throw std::invalid_argument("icosphere level > 8 rejected (resource guard)");
  if (!(radius > 0.0)) throw std::invalid_argument("icosphere radius must be positive");

  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> tris;
  icosahedron(verts, tris);

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int id = static_cast<int>(verts.size());
      verts.push_back((verts[a] + verts[b]).normalized());
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(tris.size() * 4);
    for (const auto& t : tris) {
      const int a = mid(t[0], t[1]), b = mid(t[1], t[2]), c = mid(t[2], t[0]);
      next.push_back({t[0], a, c});
      next.push_back({t[1], b, a});
      next.push_back({t[2], c, b});
      next.push_back({a, b, c});
    }
    tris = std::move(next);
  }
  for (auto& v : verts) v *= radius;
  return Mesh::from_triangles(std::move(verts), tris);
}

double spheroid_gaussian_curvature(double aspect, double scale, const Vec3& x) {
  const double a2 = scale * scale;
  const double c2 = aspect * aspect * a2;
  const double q = (x.x() * x.x() + x.y() * x.y()) / (a2 * a2) + x.z() * x.z() / (c2 * c2);
  return 1.0 / (a2 * a2 * c2 * q * q);
}

Ellipsoid build_ellipsoid(double aspect, int level, bool normalize) {
  if (!(aspect >= 1.0)) throw std::invalid_argument("ellipsoid aspect must be >= 1");
  if (aspect > 2.0) throw std::invalid_argument("ellipsoid aspect > 2 rejected");
  const Mesh sphere = build_icosphere(level, 1.0);

  auto min_curvature = [&](double scale) {
    double k = std::numeric_limits<double>::infinity();
    for (const Vec3& u : sphere.vertices()) {
      const Vec3 x(scale * u.x(), scale * u.y(), aspect * scale * u.z());
      k = std::min(k, spheroid_gaussian_curvature(aspect, scale, x));
    }
    return k;
  };

  Ellipsoid out;
  out.aspect = aspect;
  out.scale = 1.0;
  if (normalize) {
    // Curvature scales as 1/scale^2.
    out.scale = std::sqrt(min_curvature(1.0));
  }
  std::vector<Vec3> verts;
  verts.reserve(sphere.vertex_count());
  for (const Vec3& u : sphere.vertices()) {
    verts.emplace_back(out.scale * u.x(), out.scale * u.y(), aspect * out.scale * u.z());
  }
  std::vector<std::array<int, 3>> tris;
  tris.reserve(sphere.cell_count());
  for (std::size_t c = 0; c < sphere.cell_count(); ++c) {
    auto idx = sphere.cell(c);
    tris.push_back({idx[0], idx[1], idx[2]});
  }
  out.mesh = Mesh::from_triangles(std::move(verts), tris);
  out.min_curvature = min_curvature(out.scale);
  return out;
}

Mesh build_circle(int segments, double radius) {
  if (segments < 3) throw std::invalid_argument("circle needs at least 3 segments");
  if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
  std::vector<Vec3> verts;
  std::vector<std::array<int, 2>> segs;
  for (int i = 0; i < segments; ++i) {
    const double a = 2.0 * kPi * i / segments;
    verts.emplace_back(radius * std::cos(a), radius * std::sin(a), 0.0);
    segs.push_back({i, (i + 1) % segments});
  }
  return Mesh::from_segments(std::move(verts), segs);
}

Mesh build_interval(int segments, double length) {
  if (segments < 1) throw std::invalid_argument("interval needs at least 1 segment");
  if (!(length > 0.0)) throw std::invalid_argument("interval length must be positive");
  std::vector<Vec3> verts;
  std::vector<std::array<int, 2>> segs;
  for (int i = 0; i <= segments; ++i) {
    verts.emplace_back(length * i / segments, 0.0, 0.0);
    if (i < segments) segs.push_back({i, i + 1});
  }
  return Mesh::from_segments(std::move(verts), segs);
}

}  // namespace pspec
