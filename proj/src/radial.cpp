#include "pspec/spectral.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pspec {
namespace {

using State = std::array<double, 2>;  // u and phi = |u'|^{p-2} u'

struct Crossed {};

// True when the solution started with eigenvalue guess lambda reaches zero
// before the outer endpoint.
bool crosses(double p, int n, RadialProblem problem, double lambda, const ShootingSettings& opts) {
  namespace ode = boost::numeric::odeint;
  const double q = 1.0 / (p - 1.0);
  const bool hemisphere = problem == RadialProblem::Hemisphere;
  const double end = hemisphere ? 0.5 * std::numbers::pi : 1.0;

  auto rhs = [&](const State& s, State& ds, double r) {
    ds[0] = std::copysign(std::pow(std::abs(s[1]), q), s[1]);
    ds[1] = -lambda * std::copysign(std::pow(std::abs(s[0]), p - 1.0), s[0]);
    if (hemisphere && n > 1) ds[1] -= (n - 1) * std::cos(r) / std::sin(r) * s[1];
  };

  State s;
  double r0 = 0.0;
  if (hemisphere) {
    // Regular series at the pole.
    r0 = 1e-6;
    s[0] = 1.0 - (p - 1.0) / p * std::pow(lambda / n, q) * std::pow(r0, p * q);
    s[1] = -lambda * r0 / n;
  } else {
    s = {0.0, 1.0};
  }

  auto stepper = ode::make_dense_output(opts.ode_tolerance, opts.ode_tolerance,
                                        ode::runge_kutta_dopri5<State>());
  auto observe = [&](const State& x, double r) {
    if (r > r0 && x[0] <= 0.0) throw Crossed{};
  };
  try {
    ode::integrate_adaptive(stepper, rhs, s, r0, end, 1e-4, observe);
  } catch (const Crossed&) {
    return true;
  }
  return s[0] <= 0.0;
}

}  // namespace

double solve_radial_1d(PExponent p, int n, RadialProblem problem, const ShootingSettings& opts) {
  if (n < 1) throw std::invalid_argument("dimension must be at least 1");
  double lo = 0.0, hi = 1.0;
  while (!crosses(p, n, problem, hi, opts)) {
    lo = hi;
    hi *= 2.0;
    if (hi > opts.lambda_max) throw std::runtime_error("no eigenvalue below the shooting bound");
  }
  for (int it = 0; it < opts.bisections && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (crosses(p, n, problem, mid, opts)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace pspec
