#pragma once

#include "pspec/domain.hpp"
#include "pspec/mesh.hpp"
#include "pspec/types.hpp"

#include <span>
#include <utility>
#include <vector>

namespace pspec {

/// Settings for the constrained Rayleigh-quotient descent.
struct SolverSettings {
  /// Relative Rayleigh-quotient change regarded as stationary.
  double tolerance = 1e-9;
  /// Consecutive stationary iterations required to stop.
  int patience = 10;
  /// Cap on descent iterations per continuation stage.
  int max_iterations = 50000;
  /// Largest step in p between continuation stages.
  double continuation_step = 0.25;
  /// Tolerance used on the intermediate continuation stages.
  double stage_tolerance = 1e-7;
  /// Armijo sufficient-decrease constant.
  double armijo = 1e-4;
  /// Gradient regularization for p < 2, relative to the rms cell gradient.
  /// Decreases linearly over the continuation and is zero on the last stage.
  double smoothing = 1e-9;
  /// Shift of the descent preconditioner relative to the current quotient.
  double preconditioner_shift = 0.1;
  /// Allowed |d log(lambda) / dp| between adjacent continuation stages.
  double lipschitz_budget = 2.0;
};

struct EigenResult {
  double lambda = 0.0;
  /// Eigenfunction with unit lumped L^p norm; pinned vertices hold zero.
  std::vector<double> field;
  /// Relative quotient change of the last accepted step.
  double residual = 0.0;
  /// |\int |u|^{p-2} u| for closed problems, 0 for Dirichlet problems.
  double constraint_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Quotient after each accepted step of the final stage.
  std::vector<double> trace;
  /// (p, lambda) at the end of every continuation stage, starting at p = 2.
  std::vector<std::pair<double, double>> continuation;
  /// True when every adjacent continuation pair respects the Lipschitz budget.
  bool continuation_ok = true;
};

/// \int |grad u|^p with cellwise constant gradients.
double p_energy(const Mesh& mesh, std::span<const double> u, double p);
/// \int |u|^p with the lumped vertex measure.
double p_mass(const Mesh& mesh, std::span<const double> u, double p);

/// Energy over mass. Rejects fields with zero mass.
double rayleigh_quotient(const Mesh& mesh, std::span<const double> u, PExponent p);

/// First Dirichlet eigenpair of the domain (pinned vertices held at zero).
/// The returned eigenfunction is nonnegative.
EigenResult dirichlet_eigen(const Domain& domain, PExponent p, const SolverSettings& opts = {});

/// First nonzero eigenpair of a closed mesh under \int |u|^{p-2} u = 0. The
/// eigenfunction is positive at its vertex of largest magnitude.
EigenResult closed_eigen(const Mesh& mesh, PExponent p, const SolverSettings& opts = {});

/// The shift c with \int |u - c|^{p-2} (u - c) = 0, by bisection.
double constraint_shift(const Mesh& mesh, std::span<const double> u, double p);

/// u - constraint_shift(u). Rejects constant fields.
std::vector<double> project_constraint(const Mesh& mesh, std::span<const double> u, PExponent p);

/// |\int |u|^{p-2} u| with the lumped measure.
double constraint_residual(const Mesh& mesh, std::span<const double> u, double p);

struct NodalDomains {
  int count = 0;
  /// Component id per vertex, -1 on zeros.
  std::vector<int> labels;
};

/// Connected components of {u > 0} and {u < 0} in the vertex graph.
NodalDomains nodal_domains(const Mesh& mesh, std::span<const double> u);

enum class RadialProblem {
  /// Unit interval, Dirichlet at both ends.
  Interval,
  /// Geodesic hemisphere of S^n: weight sin^{n-1}(r) on [0, pi/2], regular
  /// at the pole, Dirichlet on the equator.
  Hemisphere,
};

struct ShootingSettings {
  double ode_tolerance = 1e-13;
  double lambda_max = 1e8;
  int bisections = 200;
};

/// First eigenvalue of the one-dimensional p-Laplacian problem by shooting
/// and bisection on lambda.
double solve_radial_1d(PExponent p, int n, RadialProblem problem,
                       const ShootingSettings& opts = {});

}  // namespace pspec
