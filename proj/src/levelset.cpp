#include "pspec/isoperim.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace pspec {
namespace {

void check_size(const Mesh& mesh, std::span<const double> f) {
  if (f.size() != mesh.vertex_count()) {
    throw std::invalid_argument("field size does not match vertex count");
  }
}

// Area fraction of {f > t} on a cell with linear f and sorted vertex values.
double cell_fraction(int dim, double a, double b, double c, double t) {
  if (dim == 1) {
    // a <= c are the two endpoint values; b is unused.
    if (t >= c) return 0.0;
    if (t < a) return 1.0;
    return (c - t) / (c - a);
  }
  if (t >= c) return 0.0;
  if (t < a) return 1.0;
  if (t >= b) return (c - t) * (c - t) / ((c - a) * (c - b));
  return 1.0 - (t - a) * (t - a) / ((b - a) * (c - a));
}

struct Sorted {
  double a, b, c;
};

Sorted sorted_values(const Mesh& mesh, std::size_t cell, std::span<const double> f) {
  const auto idx = mesh.cell(cell);
  if (mesh.dimension() == 1) {
    const double x = f[idx[0]], y = f[idx[1]];
    return {std::min(x, y), 0.0, std::max(x, y)};
  }
  double v[3] = {f[idx[0]], f[idx[1]], f[idx[2]]};
  std::sort(v, v + 3);
  return {v[0], v[1], v[2]};
}

// Crossing parameter and edge for the level through cell c, in cell order.
template <typename Visit>
void for_each_crossing(const Mesh& mesh, std::span<const double> f, double t, Visit visit) {
  const auto& x = mesh.vertices();
  std::map<std::pair<int, int>, int> edge_id;
  if (mesh.dimension() == 2) {
    for (std::size_t e = 0; e < mesh.edges().size(); ++e) {
      edge_id.emplace(std::pair{mesh.edges()[e][0], mesh.edges()[e][1]}, static_cast<int>(e));
    }
  }
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    const auto idx = mesh.cell(c);
    if (mesh.dimension() == 1) {
      const int a = idx[0], b = idx[1];
      const bool above_a = f[a] > t, above_b = f[b] > t;
      if (above_a == above_b) continue;
      const double s = (f[a] - t) / (f[a] - f[b]);
      const Vec3 p = x[a] + s * (x[b] - x[a]);
      visit(c, std::array<Vec3, 2>{p, p}, std::array<int, 2>{static_cast<int>(c), static_cast<int>(c)});
      continue;
    }
    Vec3 pts[2];
    int eids[2];
    int found = 0;
    for (int i = 0; i < 3; ++i) {
      const int a = idx[i], b = idx[(i + 1) % 3];
      if ((f[a] > t) == (f[b] > t)) continue;
      const double s = (f[a] - t) / (f[a] - f[b]);
      if (found < 2) {
        pts[found] = x[a] + s * (x[b] - x[a]);
        eids[found] = edge_id.at(std::minmax(a, b));
      }
      ++found;
    }
    if (found == 2) visit(c, std::array<Vec3, 2>{pts[0], pts[1]}, std::array<int, 2>{eids[0], eids[1]});
  }
}

void check_open_range(std::span<const double> f, double t) {
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  if (!(t > *lo && t < *hi)) {
    throw std::out_of_range("level " + std::to_string(t) + " outside the open field range (" +
                            std::to_string(*lo) + ", " + std::to_string(*hi) + ")");
  }
}

}  // namespace

LevelSetCurve level_set(const Mesh& mesh, std::span<const double> f, double t) {
  check_size(mesh, f);
  LevelSetCurve curve;
  curve.threshold = t;
  for_each_crossing(mesh, f, t, [&](std::size_t, const std::array<Vec3, 2>& seg,
                                    const std::array<int, 2>& edges) {
    curve.segments.push_back(seg);
    curve.endpoint_edges.push_back(edges);
    curve.measure += mesh.dimension() == 1 ? 1.0 : (seg[0] - seg[1]).norm();
  });
  return curve;
}

double level_boundary_measure(const Mesh& mesh, std::span<const double> f, double t) {
  check_size(mesh, f);
  check_open_range(f, t);
  return level_set(mesh, f, t).measure;
}

double level_gradient_integral(const Mesh& mesh, std::span<const double> f, double t,
                               double q) {
  check_size(mesh, f);
  double sum = 0.0;
  for_each_crossing(mesh, f, t, [&](std::size_t c, const std::array<Vec3, 2>& seg,
                                    const std::array<int, 2>&) {
    const double len = mesh.dimension() == 1 ? 1.0 : (seg[0] - seg[1]).norm();
    sum += len * std::pow(mesh.cell_gradient(c, f).norm(), q);
  });
  return sum;
}

double superlevel_measure(const Mesh& mesh, std::span<const double> f, double t) {
  check_size(mesh, f);
  double sum = 0.0;
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    const auto s = sorted_values(mesh, c, f);
    sum += mesh.cell_measure()[c] * cell_fraction(mesh.dimension(), s.a, s.b, s.c, t);
  }
  return sum;
}

double superlevel_energy(const Mesh& mesh, std::span<const double> f, double t, double p) {
  check_size(mesh, f);
  double sum = 0.0;
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    const auto s = sorted_values(mesh, c, f);
    const double frac = cell_fraction(mesh.dimension(), s.a, s.b, s.c, t);
    if (frac <= 0.0) continue;
    sum += mesh.cell_measure()[c] * frac * std::pow(mesh.cell_gradient(c, f).norm(), p);
  }
  return sum;
}

double superlevel_integral(const Mesh& mesh, std::span<const double> f, double t,
                           const std::function<double(double)>& phi) {
  check_size(mesh, f);
  using Rule = boost::math::quadrature::gauss<double, 10>;
  double sum = 0.0;
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    const auto s = sorted_values(mesh, c, f);
    const double area = mesh.cell_measure()[c];
    if (t >= s.c) continue;
    const double span = s.c - s.a;
    if (span <= 1e-14 * std::max(1.0, std::abs(s.c))) {
      sum += area * phi(s.c);
      continue;
    }
    if (mesh.dimension() == 1) {
      const double lo = std::max(s.a, t);
      sum += area / span * Rule::integrate(phi, lo, s.c);
      continue;
    }
    // Value density on the cell: rising on [a, b], falling on [b, c].
    if (s.b - s.a > 1e-14 * span && t < s.b) {
      const double lo = std::max(s.a, t);
      auto rising = [&](double v) { return phi(v) * 2.0 * (v - s.a) / (span * (s.b - s.a)); };
      sum += area * Rule::integrate(rising, lo, s.b);
    }
    if (s.c - s.b > 1e-14 * span) {
      const double lo = std::max(s.b, t);
      auto falling = [&](double v) { return phi(v) * 2.0 * (s.c - v) / (span * (s.c - s.b)); };
      sum += area * Rule::integrate(falling, lo, s.c);
    }
  }
  return sum;
}

}  // namespace pspec
