#include "pspec/rearrange.hpp"

#include "pspec/cap.hpp"
#include "pspec/isoperim.hpp"
#include "pspec/spectral.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace pspec {
namespace {

void check_size(const Mesh& mesh, std::span<const double> u) {
  if (u.size() != mesh.vertex_count()) throw std::invalid_argument("field size does not match vertex count");
  for (double x : u) {
    if (!std::isfinite(x)) throw std::invalid_argument("field has non-finite values");
  }
}

void check_beta(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (beta > 1.0) std::cerr << "warning: beta = " << beta << " exceeds 1\n";
}

// Vertex order by tie-broken value, largest first.
std::vector<int> descending_order(const std::vector<double>& key) {
  std::vector<int> order(key.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key[a] > key[b]; });
  return order;
}

double radius_for(double measure, double beta, int n) {
  const double v = measure / beta;
  const double whole = sphere_measure(n);
  if (v > whole * (1.0 + 1e-9)) {
    throw std::domain_error("measure / beta exceeds the model sphere; beta is inconsistent");
  }
  return cap_radius(std::min(v, whole), n);
}

}  // namespace

double DistributionProfile::measure_above(double t) const {
  const auto it = std::upper_bound(thresholds.begin(), thresholds.end(), t);
  if (it == thresholds.begin()) return total;
  return measures[static_cast<std::size_t>(it - thresholds.begin()) - 1];
}

double RadialProfile::evaluate(double r) const {
  if (r <= knots.front()) return values.front();
  if (r >= knots.back()) return values.back();
  const auto it = std::upper_bound(knots.begin(), knots.end(), r);
  const std::size_t j = static_cast<std::size_t>(it - knots.begin());
  const double r0 = knots[j - 1], r1 = knots[j];
  if (r1 <= r0) return values[j];
  const double s = (r - r0) / (r1 - r0);
  return values[j - 1] + s * (values[j] - values[j - 1]);
}

std::vector<double> tie_broken(std::span<const double> u) {
  const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
  const double step = 1e-13 * (*hi - *lo);
  std::vector<double> key(u.begin(), u.end());
  for (std::size_t i = 0; i < key.size(); ++i) key[i] -= static_cast<double>(i) * step;
  return key;
}

DistributionProfile distribution(const Mesh& mesh, std::span<const double> u) {
  check_size(mesh, u);
  const std::vector<double> key = tie_broken(u);
  const std::vector<int> order = descending_order(key);
  DistributionProfile out;
  double above = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    // Vertices sharing a value form one level.
    const double t = key[order[k]];
    out.thresholds.push_back(t);
    out.measures.push_back(above);
    for (; k < order.size() && key[order[k]] == t; ++k) above += mesh.vertex_measure()[order[k]];
  }
  out.total = above;
  std::reverse(out.thresholds.begin(), out.thresholds.end());
  std::reverse(out.measures.begin(), out.measures.end());
  for (std::size_t i = 1; i < out.measures.size(); ++i) {
    if (out.measures[i] > out.measures[i - 1] || out.thresholds[i] <= out.thresholds[i - 1]) {
      throw std::logic_error("distribution is not monotone");
    }
  }
  return out;
}

RadialProfile symmetrize(const Mesh& mesh, std::span<const double> u, double beta) {
  check_size(mesh, u);
  check_beta(beta);
  const std::vector<int> order = descending_order(tie_broken(u));
  RadialProfile out;
  out.n = mesh.dimension();
  double above = 0.0;
  for (int v : order) {
    out.knots.push_back(radius_for(above, beta, out.n));
    const double value = out.values.empty() ? u[v] : std::min(out.values.back(), u[v]);
    out.values.push_back(value);
    above += mesh.vertex_measure()[v];
  }
  out.knots.push_back(radius_for(above, beta, out.n));
  out.values.push_back(out.values.back());
  return out;
}

RadialProfile symmetrize_on_grid(const Mesh& mesh, std::span<const double> u, double beta,
                                 int levels) {
  check_size(mesh, u);
  check_beta(beta);
  if (levels < 2) throw std::invalid_argument("at least two levels required");
  const auto [lo_it, hi_it] = std::minmax_element(u.begin(), u.end());
  const double lo = *lo_it, hi = *hi_it;
  RadialProfile out;
  out.n = mesh.dimension();
  if (!(hi > lo)) {
    out.knots = {0.0, radius_for(mesh.total_measure(), beta, out.n)};
    out.values = {hi, hi};
    return out;
  }
  for (int j = levels - 1; j >= 0; --j) {
    const double t = lo + (hi - lo) * j / (levels - 1);
    const double mu = j == levels - 1 ? 0.0 : superlevel_measure(mesh, u, t);
    const double r = radius_for(mu, beta, out.n);
    out.knots.push_back(out.knots.empty() ? r : std::max(r, out.knots.back()));
    out.values.push_back(t);
  }
  // The whole support, including the zero-measure set at the minimum.
  out.knots.back() = std::max(out.knots.back(), radius_for(mesh.total_measure(), beta, out.n));
  return out;
}

double profile_lp(const RadialProfile& profile, double beta, double p, double upto) {
  using Gauss = boost::math::quadrature::gauss<double, 10>;
  double sum = 0.0;
  for (std::size_t j = 1; j < profile.knots.size(); ++j) {
    const double r0 = profile.knots[j - 1], r1 = profile.knots[j];
    const double end = std::min(r1, upto);
    if (end <= r0) continue;
    const double v0 = profile.values[j - 1], v1 = profile.values[j];
    sum += Gauss::integrate(
        [&](double r) {
          const double s = (r - r0) / (r1 - r0);
          return std::pow(std::abs(v0 + s * (v1 - v0)), p) * cap_boundary(r, profile.n);
        },
        r0, end);
  }
  return beta * sum;
}

double profile_energy(const RadialProfile& profile, double beta, double p, double upto) {
  double sum = 0.0;
  for (std::size_t j = 1; j < profile.knots.size(); ++j) {
    const double r0 = profile.knots[j - 1];
    const double r1 = std::min(profile.knots[j], upto);
    if (r1 <= r0) continue;
    const double slope = (profile.values[j] - profile.values[j - 1]) /
                         (profile.knots[j] - profile.knots[j - 1]);
    sum += std::pow(std::abs(slope), p) * cap_shell(r0, r1, profile.n);
  }
  return beta * sum;
}

CheckValues lp_equimeasurability(const Mesh& mesh, std::span<const double> u,
                                 const RadialProfile& profile, double beta, PExponent p) {
  check_size(mesh, u);
  CheckValues out;
  out.lhs = p_mass(mesh, u, p);
  if (!(out.lhs > 0.0)) throw std::domain_error("zero L^p norm");
  out.rhs = profile_lp(profile, beta, p);
  out.relative = std::abs(out.lhs - out.rhs) / out.lhs;
  return out;
}

CheckValues polya_szego_check(const Mesh& mesh, std::span<const double> u, double beta,
                              PExponent p, int levels) {
  check_size(mesh, u);
  if (*std::min_element(u.begin(), u.end()) < 0.0) {
    throw std::invalid_argument("Polya-Szego check requires a nonnegative field");
  }
  CheckValues out;
  out.lhs = p_energy(mesh, u, p);
  if (!(out.lhs > 0.0)) throw std::domain_error("zero energy");
  out.rhs = profile_energy(symmetrize_on_grid(mesh, u, beta, levels), beta, p);
  out.relative = (out.lhs - out.rhs) / out.lhs;
  return out;
}

CheckValues coarea_check(const Mesh& mesh, std::span<const double> u, int levels) {
  check_size(mesh, u);
  const auto [lo_it, hi_it] = std::minmax_element(u.begin(), u.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) throw std::invalid_argument("coarea check of a constant field");
  if (levels < 2) throw std::invalid_argument("at least two levels required");
  CheckValues out;
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    out.lhs += mesh.cell_measure()[c] * mesh.cell_gradient(c, u).norm();
  }
  const double h = (hi - lo) / (levels - 1);
  const double inset = 1e-9 * (hi - lo);
  for (int j = 0; j < levels; ++j) {
    const double t = std::clamp(lo + j * h, lo + inset, hi - inset);
    const double w = (j == 0 || j == levels - 1) ? 0.5 : 1.0;
    out.rhs += w * h * level_boundary_measure(mesh, u, t);
  }
  out.relative = std::abs(out.lhs - out.rhs) / out.lhs;
  return out;
}

}  // namespace pspec
