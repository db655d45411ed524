#pragma once

#include "pspec/mesh.hpp"

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace pspec {

// Level-set geometry of the piecewise-linear interpolant of a vertex field.
// A point is above level t when the interpolant exceeds t strictly.

/// Polyline {f = t}: one segment per triangle the level crosses (n = 2), or
/// one crossing point per segment (n = 1, where the measure counts points).
struct LevelSetCurve {
  double threshold = 0.0;
  std::vector<std::array<Vec3, 2>> segments;
  /// Mesh edges carrying each segment's endpoints (indices into edges()).
  std::vector<std::array<int, 2>> endpoint_edges;
  double measure = 0.0;
};

LevelSetCurve level_set(const Mesh& mesh, std::span<const double> f, double t);

/// H^{n-1}({f = t}). Rejects t outside the open range (min f, max f).
double level_boundary_measure(const Mesh& mesh, std::span<const double> f, double t);

/// \int_{f = t} |grad f|^q dH^{n-1}, cellwise constant gradients. q = -1
/// gives the coarea density of the distribution function.
double level_gradient_integral(const Mesh& mesh, std::span<const double> f, double t,
                               double q);

/// Exact H^n({f > t}) for the linear interpolant.
double superlevel_measure(const Mesh& mesh, std::span<const double> f, double t);

/// \int_{f > t} |grad f|^p dH^n.
double superlevel_energy(const Mesh& mesh, std::span<const double> f, double t, double p);

/// \int_{f > t} phi(f) dH^n, using the exact value distribution of a linear
/// function on each cell and Gauss-Legendre quadrature in the value variable.
double superlevel_integral(const Mesh& mesh, std::span<const double> f, double t,
                           const std::function<double(double)>& phi);

/// Boundary measure of {f > t} against beta times the boundary of the cap
/// with the matching volume. Values >= 1 are consistent with the Gromov
/// isoperimetric inequality.
double gromov_ratio(const Mesh& mesh, std::span<const double> f, double t, double beta);

/// Empirical lower envelope of gromov_ratio over a battery of superlevel sets.
struct CrokeProfile {
  double diameter = 0.0;
  double min_ratio = 0.0;
  std::vector<double> ratios;
  double histogram_lo = 0.0;
  double histogram_hi = 0.0;
  std::vector<int> histogram;
};

/// thresholds[i] lists the levels used with fields[i]. Rejects an empty battery.
CrokeProfile croke_profile(const Mesh& mesh, const std::vector<std::vector<double>>& fields,
                           const std::vector<std::vector<double>>& thresholds, double beta,
                           double diameter, int bins = 10);

}  // namespace pspec
