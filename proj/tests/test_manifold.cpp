#include "pspec/cap.hpp"
#include "pspec/domain.hpp"
#include "pspec/mesh.hpp"
#include "pspec/mesh_io.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

using namespace pspec;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("icosphere combinatorics and area") {
  const Mesh m0 = build_icosphere(0);
  CHECK(m0.vertex_count() == 12);
  CHECK(m0.cell_count() == 20);
  CHECK(m0.closed());

  const Mesh m4 = build_icosphere(4);
  CHECK(rel(m4.total_measure(), 4.0 * kPi) < 0.01);
  const Mesh m4r2 = build_icosphere(4, 2.0);
  CHECK(m4r2.total_measure() == 4.0 * m4.total_measure());
  for (const Vec3& x : m4r2.vertices()) CHECK(x.norm() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(build_icosphere(5).vertex_count() == 10242);
}

TEST_CASE("icosphere argument guards") {
  CHECK_THROWS_AS(build_icosphere(9), std::invalid_argument);
  CHECK_THROWS_AS(build_icosphere(-1), std::invalid_argument);
  CHECK_THROWS_AS(build_icosphere(2, 0.0), std::invalid_argument);
}

TEST_CASE("icosphere has no vertex on a coordinate plane") {
  const Mesh m = build_icosphere(5);
  for (const Vec3& x : m.vertices()) {
    for (int k = 0; k < 3; ++k) CHECK(std::abs(x[k]) > 1e-9);
  }
}

TEST_CASE("ellipsoid curvature normalization") {
  const Ellipsoid round = build_ellipsoid(1.0, 4, true);
  CHECK(round.scale == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(round.min_curvature == doctest::Approx(1.0).epsilon(1e-12));

  const Ellipsoid e = build_ellipsoid(1.2, 4, true);
  CHECK(e.min_curvature >= 0.99);
  CHECK(e.min_curvature <= 1.01);
  for (const Vec3& x : e.mesh.vertices()) {
    CHECK(spheroid_gaussian_curvature(1.2, e.scale, x) >= e.min_curvature * (1.0 - 1e-12));
  }

  const Ellipsoid raw = build_ellipsoid(1.2, 4, false);
  CHECK(raw.min_curvature < 1.0);
  // Points satisfy x^2 + y^2 + z^2 / a^2 = scale^2.
  for (const Vec3& x : e.mesh.vertices()) {
    const double q = x.x() * x.x() + x.y() * x.y() + x.z() * x.z() / (1.2 * 1.2);
    CHECK(q == doctest::Approx(e.scale * e.scale).epsilon(1e-12));
  }
}

TEST_CASE("ellipsoid argument guards") {
  CHECK_THROWS_AS(build_ellipsoid(2.5, 3, true), std::invalid_argument);
  CHECK_THROWS_AS(build_ellipsoid(0.9, 3, true), std::invalid_argument);
}

TEST_CASE("total measure of model meshes") {
  CHECK(std::abs(total_measure(build_circle(1000)) - 2.0 * kPi) < 1e-4);
  CHECK(total_measure(build_interval(100)) == doctest::Approx(1.0).epsilon(1e-14));
  const Mesh m = build_icosphere(3);
  const double cells = std::accumulate(m.cell_measure().begin(), m.cell_measure().end(), 0.0);
  const double verts = std::accumulate(m.vertex_measure().begin(), m.vertex_measure().end(), 0.0);
  CHECK(rel(verts, cells) < 1e-12);
  CHECK(rel(total_measure(m), cells) < 1e-12);
  for (double a : m.cell_measure()) CHECK(a > 0.0);
}

TEST_CASE("total measure is additive over a partition of cells") {
  const Mesh m = build_icosphere(3);
  double upper = 0.0, lower = 0.0;
  for (std::size_t c = 0; c < m.cell_count(); ++c) {
    const auto idx = m.cell(c);
    const double z = (m.vertex(idx[0]).z() + m.vertex(idx[1]).z() + m.vertex(idx[2]).z()) / 3.0;
    (z > 0.0 ? upper : lower) += m.cell_measure()[c];
  }
  CHECK(rel(upper + lower, m.total_measure()) < 1e-14);
}

TEST_CASE("beta") {
  CHECK(rel(beta(build_icosphere(4)), 1.0) < 0.01);
  CHECK(rel(beta(build_icosphere(4, 0.5)), 0.25) < 0.01);
  CHECK(beta(build_ellipsoid(1.2, 4, true).mesh) < 1.0);
  CHECK(rel(beta(build_circle(1000)), 1.0) < 1e-4);
  CHECK_THROWS_AS(beta(build_interval(10)), std::invalid_argument);

  const Mesh m = build_ellipsoid(1.1, 3, true).mesh;
  for (double c : {0.5, 1.7, 3.0}) CHECK(rel(beta(m.scaled(c)), c * c * beta(m)) < 1e-12);
}

TEST_CASE("diameter of spheres") {
  CHECK(rel(diameter(build_icosphere(5)), kPi) < 0.02);
  const double d1 = diameter(build_icosphere(3));
  CHECK(diameter(build_icosphere(3, 2.0)) == 2.0 * d1);
  const Mesh m = build_icosphere(3);
  CHECK(diameter(m.scaled(4.0)) == 4.0 * d1);
}

TEST_CASE("diameter of the normalized ellipsoid matches half the meridian") {
  const Ellipsoid e = build_ellipsoid(1.2, 5, true);
  // Half perimeter of the meridian ellipse with semi-axes scale and 1.2 * scale.
  const double a = e.scale, c = 1.2 * e.scale;
  const int n = 20000;
  double half = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = kPi * (i + 0.5) / n;
    half += std::hypot(a * std::cos(t), c * std::sin(t)) * kPi / n;
  }
  CHECK(rel(diameter(e.mesh), half) < 0.02);
}

TEST_CASE("diameter rejects a disconnected graph through the exact path") {
  const Mesh m = build_circle(8);
  CHECK(diameter(m) > 0.0);
  CHECK(edge_graph_distances(m, 0)[4] == doctest::Approx(4.0 * 2.0 * std::sin(kPi / 8)));
  CHECK_THROWS(edge_graph_distances(m, 100));
}

TEST_CASE("cap geometry") {
  CHECK(cap_volume(kPi / 2, 2) == doctest::Approx(2.0 * kPi));
  CHECK(cap_volume(kPi, 2) == doctest::Approx(4.0 * kPi));
  CHECK(cap_volume(0.0, 2) == 0.0);
  CHECK(cap_volume(0.7, 1) == doctest::Approx(1.4));
  for (int n : {1, 2, 3, 4}) {
    CHECK(cap_volume(kPi, n) == doctest::Approx(sphere_measure(n)).epsilon(1e-12));
    for (double r : {0.3, 1.0, 2.5}) CHECK(std::abs(cap_radius(cap_volume(r, n), n) - r) < 1e-10);
  }
  CHECK(cap_boundary(kPi / 2, 2) == doctest::Approx(2.0 * kPi));
  CHECK(std::abs(cap_boundary(kPi, 2)) < 1e-12);
  CHECK(cap_boundary(0.5, 1) == 2.0);
  CHECK_THROWS_AS(cap_volume(-0.1, 2), std::out_of_range);
  CHECK_THROWS_AS(cap_volume(3.2, 2), std::out_of_range);
  CHECK_THROWS_AS(cap_radius(13.0, 2), std::out_of_range);
}

TEST_CASE("cap volume is increasing with the boundary as derivative") {
  for (int n : {1, 2, 3, 5}) {
    double prev = -1.0;
    for (int i = 0; i <= 200; ++i) {
      const double r = kPi * i / 200;
      const double v = cap_volume(r, n);
      CHECK(v > prev);
      prev = v;
    }
    for (double r : {0.2, 1.1, 2.9}) {
      const double h = 1e-5;
      const double d = (cap_volume(r + h, n) - cap_volume(r - h, n)) / (2 * h);
      CHECK(std::abs(d - cap_boundary(r, n)) < 1e-6);
    }
  }
}

TEST_CASE("mesh validation") {
  std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  CHECK_THROWS_AS(Mesh::from_triangles(v, {{0, 1, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Mesh::from_triangles(v, {{0, 1, 1}}), std::invalid_argument);
  std::vector<Vec3> line{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  CHECK_THROWS_AS(Mesh::from_triangles(line, {{0, 1, 2}}), std::invalid_argument);
  std::vector<Vec3> four{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {5, 5, 5}};
  CHECK_THROWS_AS(Mesh::from_triangles(four, {{0, 1, 2}}), std::invalid_argument);
  const Mesh tri = Mesh::from_triangles(v, {{0, 1, 2}});
  CHECK_FALSE(tri.closed());
  CHECK(tri.total_measure() == doctest::Approx(0.5));
}

TEST_CASE("hat gradients reproduce linear fields") {
  const Mesh m = build_icosphere(2);
  std::vector<double> f(m.vertex_count(), 3.0);
  for (std::size_t c = 0; c < m.cell_count(); ++c) CHECK(m.cell_gradient(c, f).norm() < 1e-12);
  const Mesh seg = build_interval(4, 2.0);
  std::vector<double> x(seg.vertex_count());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 3.0 * seg.vertex(i).x();
  for (std::size_t c = 0; c < seg.cell_count(); ++c) CHECK(seg.cell_gradient(c, x).x() == doctest::Approx(3.0));
}

TEST_CASE("OFF round trip") {
  const Mesh m = build_icosphere(2);
  std::stringstream ss;
  write_off(ss, m);
  CHECK(ss.str().rfind("OFF", 0) == 0);
  const Mesh back = read_off(ss);
  REQUIRE(back.vertex_count() == m.vertex_count());
  REQUIRE(back.cell_count() == m.cell_count());
  for (std::size_t v = 0; v < m.vertex_count(); ++v) CHECK((back.vertex(v) - m.vertex(v)).norm() == 0.0);
  CHECK(back.total_measure() == m.total_measure());

  const Mesh c = build_circle(12);
  std::stringstream s1;
  write_off(s1, c);
  CHECK(s1.str().find("DIM 1") != std::string::npos);
  const Mesh cb = read_off(s1);
  CHECK(cb.dimension() == 1);
  CHECK(cb.closed());
  CHECK(cb.total_measure() == doctest::Approx(c.total_measure()).epsilon(1e-15));
}

TEST_CASE("OFF parse errors") {
  std::stringstream a("PLY\n");
  CHECK_THROWS(read_off(a));
  std::stringstream b("OFF\n3 1 0\n0 0 0\n1 0 0\n");
  CHECK_THROWS(read_off(b));
  std::stringstream c("OFF\n# comment\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n");
  CHECK(read_off(c).cell_count() == 1);
}

TEST_CASE("field CSV round trip") {
  std::vector<double> u{0.1, -2.5, 1e-300, 3.0};
  std::stringstream ss;
  write_field_csv(ss, u);
  CHECK(ss.str().rfind("vertex,value\n", 0) == 0);
  CHECK(read_field_csv(ss) == u);
}

TEST_CASE("hemisphere domain") {
  const Mesh s = build_icosphere(4);
  const Domain h = superlevel_domain(s, coordinate_field(s, 2), 0.0);
  CHECK_FALSE(h.is_whole());
  CHECK(rel(h.boundary_measure, 2.0 * kPi) < 0.01);
  CHECK(rel(h.mesh.total_measure(), 2.0 * kPi) < 0.01);
  CHECK(rel(h.ambient_beta(), beta(s)) < 1e-14);
  for (std::size_t v = 0; v < h.mesh.vertex_count(); ++v) {
    if (h.pinned[v]) {
      CHECK(std::abs(h.mesh.vertex(v).z()) < 0.05);
    } else {
      CHECK(h.mesh.vertex(v).z() > 0.0);
    }
  }
  std::vector<char> mask(h.mesh.vertex_count());
  for (std::size_t v = 0; v < mask.size(); ++v) mask[v] = !h.pinned[v];
  std::vector<int> labels;
  CHECK(connected_components(h.mesh, mask, labels) == 1);
}

TEST_CASE("superlevel domains reject empty and disconnected interiors") {
  const Mesh s = build_icosphere(3);
  const auto z = coordinate_field(s, 2);
  std::vector<double> band(z.size());
  for (std::size_t v = 0; v < z.size(); ++v) band[v] = std::abs(z[v]);
  CHECK_THROWS_AS(superlevel_domain(s, band, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(superlevel_domain(s, z, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(superlevel_domain(build_circle(10), std::vector<double>(10, 0.0), 0.0), std::invalid_argument);
}

TEST_CASE("interval and whole domains") {
  const Domain d = interval_domain(10, 2.0);
  CHECK(d.pinned.front());
  CHECK(d.pinned.back());
  CHECK(d.boundary_measure == 2.0);
  CHECK(d.interior_vertices().size() == 9);
  const Domain w = whole_domain(build_icosphere(1));
  CHECK(w.is_whole());
  CHECK(w.interior_vertices().size() == w.mesh.vertex_count());
  CHECK_THROWS_AS(whole_domain(build_interval(3)), std::invalid_argument);
}
