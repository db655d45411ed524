#pragma once

#include "pspec/mesh.hpp"
#include "pspec/types.hpp"

#include <span>
#include <vector>

namespace pspec {

/// Lumped distribution function t -> H^n({u > t}).
struct DistributionProfile {
  /// Tie-broken vertex values, strictly increasing.
  std::vector<double> thresholds;
  /// measures[i] is the lumped measure of the vertices above thresholds[i].
  std::vector<double> measures;
  /// Measure of the whole support (the value below the smallest threshold).
  double total = 0.0;

  /// Right-continuous step function; total below the smallest threshold.
  double measure_above(double t) const;
};

/// Radial, non-increasing function on the model sphere S^n, linear in the
/// colatitude between knots and constant past the last knot.
struct RadialProfile {
  int n = 2;
  std::vector<double> knots;
  std::vector<double> values;

  double evaluate(double r) const;
  double max() const { return values.front(); }
  double min() const { return values.back(); }
};

/// Vertex values after the deterministic tie-breaking shift (index times
/// 1e-13 times the value range).
std::vector<double> tie_broken(std::span<const double> u);

DistributionProfile distribution(const Mesh& mesh, std::span<const double> u);

/// Symmetrization with the lumped distribution: the knot of each vertex value
/// sits at the radius of the cap whose volume times beta equals the measure
/// above that value. Warns when beta > 1; rejects measures the sphere
/// cannot hold.
RadialProfile symmetrize(const Mesh& mesh, std::span<const double> u, double beta);

/// Symmetrization with the exact piecewise-linear distribution sampled on a
/// uniform grid of levels between min u and max u.
RadialProfile symmetrize_on_grid(const Mesh& mesh, std::span<const double> u, double beta,
                                 int levels = 256);

/// beta * \int profile^p over the model sphere, by Gauss-Legendre quadrature
/// on every knot interval; with an upper radius, over the cap of that radius.
double profile_lp(const RadialProfile& profile, double beta, double p, double upto = 1e300);

/// beta * \int |profile'|^p over the model sphere (exact for piecewise-linear
/// profiles); with an upper radius, restricted to the cap of that radius.
double profile_energy(const RadialProfile& profile, double beta, double p,
                      double upto = 1e300);

struct CheckValues {
  double lhs = 0.0;
  double rhs = 0.0;
  /// lp_equimeasurability and coarea: |lhs - rhs| / lhs.
  /// polya_szego: (lhs - rhs) / lhs.
  double relative = 0.0;
};

/// Lumped \int |u|^p against beta * \int profile^p.
CheckValues lp_equimeasurability(const Mesh& mesh, std::span<const double> u,
                                 const RadialProfile& profile, double beta, PExponent p);

/// \int |grad u|^p against beta * \int |grad u_*|^p, with u_* from
/// symmetrize_on_grid. Requires a nonnegative field.
CheckValues polya_szego_check(const Mesh& mesh, std::span<const double> u, double beta,
                              PExponent p, int levels = 256);

/// \int |grad u| against the trapezoid integral of level-set measures over a
/// uniform grid of levels. Rejects constant fields.
CheckValues coarea_check(const Mesh& mesh, std::span<const double> u, int levels = 256);

}  // namespace pspec
