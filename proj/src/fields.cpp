#include "pspec/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pspec {
namespace {

struct Frame {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

Frame frame_of(const Mesh& mesh) {
  Frame f;
  for (const Vec3& x : mesh.vertices()) f.center += x;
  f.center /= static_cast<double>(mesh.vertex_count());
  f.radius = 0.0;
  for (const Vec3& x : mesh.vertices()) f.radius = std::max(f.radius, (x - f.center).norm());
  if (!(f.radius > 0.0)) throw std::invalid_argument("degenerate mesh extent");
  return f;
}

}  // namespace

Vec3 FieldRng::direction() {
  for (;;) {
    Vec3 v;
    for (int i = 0; i < 3; ++i) v[i] = uniform(-1.0, 1.0);
    const double r = v.norm();
    if (r > 1e-3 && r <= 1.0) return v / r;
  }
}

std::vector<double> random_smooth_field(const Mesh& mesh, FieldRng& rng) {
  const Frame frame = frame_of(mesh);
  // Monomials x^i y^j z^k with 1 <= i + j + k <= 3.
  struct Term {
    int i, j, k;
    double c;
  };
  std::vector<Term> terms;
  for (int d = 1; d <= 3; ++d) {
    for (int i = 0; i <= d; ++i) {
      for (int j = 0; i + j <= d; ++j) {
        terms.push_back({i, j, d - i - j, rng.uniform(-1.0, 1.0) / d});
      }
    }
  }
  const int bumps = 1 + static_cast<int>(rng.uniform() * 3.0);
  struct Bump {
    Vec3 center;
    double height, width;
  };
  std::vector<Bump> centers;
  for (int b = 0; b < bumps; ++b) {
    const Vec3 c = rng.direction();
    const double h = rng.uniform(-1.0, 1.0);
    centers.push_back({c, h, rng.uniform(0.3, 0.7)});
  }
  std::vector<double> u(mesh.vertex_count());
  for (std::size_t v = 0; v < u.size(); ++v) {
    const Vec3 x = (mesh.vertex(v) - frame.center) / frame.radius;
    double s = 0.0;
    for (const Term& t : terms) {
      s += t.c * std::pow(x.x(), t.i) * std::pow(x.y(), t.j) * std::pow(x.z(), t.k);
    }
    for (const Bump& b : centers) {
      s += b.height * std::exp(-(x - b.center).squaredNorm() / (2.0 * b.width * b.width));
    }
    u[v] = s;
  }
  return u;
}

std::vector<double> random_bump_field(const Mesh& mesh, std::span<const char> pinned,
                                      FieldRng& rng) {
  const Frame frame = frame_of(mesh);
  std::vector<int> interior;
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    if (!pinned[v]) interior.push_back(static_cast<int>(v));
  }
  if (interior.empty()) throw std::invalid_argument("no interior vertices for bumps");
  std::vector<double> u(mesh.vertex_count(), 0.0);
  const int bumps = 1 + static_cast<int>(rng.uniform() * 4.0);
  for (int b = 0; b < bumps; ++b) {
    const int pick = interior[static_cast<std::size_t>(rng.uniform() * interior.size())];
    const Vec3 c = mesh.vertex(pick);
    const double width = frame.radius * rng.uniform(0.3, 1.2);
    const double height = rng.uniform(0.2, 1.0);
    for (int v : interior) {
      const double s = (mesh.vertex(v) - c).norm() / width;
      if (s < 1.0) u[v] += height * (1.0 - s * s) * (1.0 - s * s);
    }
  }
  return u;
}

std::vector<double> positive_part(std::span<const double> u) {
  std::vector<double> out(u.begin(), u.end());
  for (double& x : out) x = std::max(x, 0.0);
  return out;
}

double measure_quantile(const Mesh& mesh, std::span<const double> u, double fraction) {
  std::vector<int> order(u.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return u[a] < u[b]; });
  const double target = fraction * mesh.total_measure();
  double acc = 0.0;
  for (int v : order) {
    acc += mesh.vertex_measure()[v];
    if (acc >= target) return u[v];
  }
  return u[order.back()];
}

}  // namespace pspec
