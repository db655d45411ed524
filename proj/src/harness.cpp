#include "pspec/harness.hpp"

#include "pspec/cap.hpp"
#include "pspec/fields.hpp"
#include "pspec/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace pspec {

double sphere_reference(PExponent p, int n) {
  return solve_radial_1d(p, n, RadialProblem::Hemisphere);
}

SweepRecord matei_check(const Mesh& mesh, PExponent p, double aspect, double min_curvature,
                        int level, const SolverSettings& opts) {
  SweepRecord rec;
  rec.aspect = aspect;
  rec.p = p;
  rec.level = level;
  rec.min_curvature = min_curvature;
  rec.beta = beta(mesh);
  rec.diameter = diameter(mesh);
  const EigenResult eig = closed_eigen(mesh, p, opts);
  rec.lambda = eig.lambda;
  rec.iterations = eig.iterations;
  rec.converged = eig.converged;
  rec.lambda_sphere = sphere_reference(p, mesh.dimension());
  rec.ratio = rec.lambda / rec.lambda_sphere;
  return rec;
}

bool matei_pass(const SweepRecord& rec) {
  return !rec.failed && rec.ratio >= 1.0 - kMateiTolerance;
}

std::vector<SweepRecord> pinching_sweep(const std::vector<double>& aspects,
                                        const std::vector<double>& ps, int level,
                                        const SolverSettings& opts) {
  std::vector<SweepRecord> out;
  for (double a : aspects) {
    Ellipsoid e;
    std::string build_error;
    try {
      e = build_ellipsoid(a, level, true);
    } catch (const std::exception& ex) {
      build_error = ex.what();
    }
    for (double p : ps) {
      SweepRecord rec;
      rec.aspect = a;
      rec.p = p;
      rec.level = level;
      if (!build_error.empty()) {
        rec.failed = true;
        rec.error = build_error;
        out.push_back(rec);
        continue;
      }
      try {
        rec = matei_check(e.mesh, PExponent(p), a, e.min_curvature, level, opts);
      } catch (const std::exception& ex) {
        rec.failed = true;
        rec.error = ex.what();
      }
      out.push_back(rec);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const SweepRecord& x, const SweepRecord& y) {
    if (x.diameter != y.diameter) return x.diameter < y.diameter;
    return x.p < y.p;
  });
  return out;
}

TrendCheck pinching_trend(const std::vector<SweepRecord>& records, double p, double noise) {
  TrendCheck out;
  const SweepRecord* prev = nullptr;
  bool any_failed = false;
  for (const SweepRecord& r : records) {
    if (r.p != p) continue;
    if (r.failed) {
      any_failed = true;
      continue;
    }
    if (prev) out.worst_increase = std::max(out.worst_increase, r.ratio / prev->ratio - 1.0);
    prev = &r;
  }
  out.pass = !any_failed && prev && out.worst_increase <= noise;
  return out;
}

LemmaAudit lemma_chain_audit(const Domain& domain, const EigenResult& eigen, PExponent p,
                             int grid) {
  if (!eigen.converged) throw std::invalid_argument("audit requires a converged eigenfunction");
  if (grid < 4) throw std::invalid_argument("audit grid too coarse");
  const Mesh& mesh = domain.mesh;
  const std::vector<double>& u = eigen.field;
  if (u.size() != mesh.vertex_count()) throw std::invalid_argument("field does not match domain");
  const double top = *std::max_element(u.begin(), u.end());
  const double b = domain.ambient_beta();
  const int n = mesh.dimension();
  // Profile levels on a grid that contains every audit level.
  const RadialProfile prof = symmetrize_on_grid(mesh, u, b, 16 * grid + 1);
  const double h = top / grid;

  LemmaAudit out;
  out.lambda = eigen.lambda;
  for (const auto& [name, two_sided] : {std::pair{"distribution_derivative", true},
                                        {"lp_equimeasurability", true},
                                        {"holder_step", false},
                                        {"radial_holder_equality", true},
                                        {"integrated_energy", false}}) {
    AuditStep s;
    s.name = name;
    s.two_sided = two_sided;
    out.steps.push_back(std::move(s));
  }
  auto record = [](AuditStep& s, double t, double lhs, double rhs) {
    const double v = s.two_sided ? std::abs(lhs - rhs) / std::abs(lhs) : (rhs - lhs) / lhs;
    s.thresholds.push_back(t);
    s.lhs.push_back(lhs);
    s.rhs.push_back(rhs);
    s.violation.push_back(v);
    s.worst = s.violation.size() == 1 ? v : std::max(s.worst, v);
  };

  for (int k = 1; k < grid; ++k) {
    const double t = k * h;
    const double mu = superlevel_measure(mesh, u, t);
    const double r = cap_radius(std::min(mu / b, sphere_measure(n)), n);
    const double inv_grad = level_gradient_integral(mesh, u, t, -1.0);
    const double length = level_boundary_measure(mesh, u, t);
    const double dmu = (superlevel_measure(mesh, u, t + 0.5 * h) -
                        superlevel_measure(mesh, u, t - 0.5 * h)) / h;
    const double de = (superlevel_energy(mesh, u, t + 0.5 * h, p) -
                       superlevel_energy(mesh, u, t - 0.5 * h, p)) / h;

    record(out.steps[0], t, -dmu, inv_grad);

    const double mass = superlevel_integral(mesh, u, t, [&](double s) { return std::pow(s, p.value()); });
    record(out.steps[1], t, mass, profile_lp(prof, b, p, r));

    record(out.steps[2], t, -de, std::pow(length, p) / std::pow(inv_grad, p - 1.0));

    // On the profile every quantity on the level sphere is a power of one slope.
    const auto it = std::lower_bound(prof.knots.begin(), prof.knots.end(), r);
    const std::size_t j = std::clamp<std::size_t>(it - prof.knots.begin(), 1, prof.knots.size() - 1);
    const double slope = std::abs((prof.values[j] - prof.values[j - 1]) /
                                  (prof.knots[j] - prof.knots[j - 1]));
    const double g = cap_boundary(r, n);
    if (slope > 0.0 && std::isfinite(slope) && g > 0.0) {
      const double l_star = std::pow(slope, p - 1.0) * g;
      const double d_star = g / slope;
      record(out.steps[3], t, g, std::pow(l_star, 1.0 / p) * std::pow(d_star, (p - 1.0) / p));
    }

    record(out.steps[4], t, superlevel_energy(mesh, u, t, p), profile_energy(prof, b, p, r));
  }
  return out;
}

SuperlevelBattery superlevel_battery(const Mesh& mesh, int count, std::uint64_t seed, bool caps) {
  SuperlevelBattery out;
  if (caps) {
    for (int axis = 0; axis < 3; ++axis) {
      std::vector<double> f = coordinate_field(mesh, axis);
      const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
      const double mid = 0.5 * (*lo + *hi), half = 0.5 * (*hi - *lo);
      out.thresholds.push_back({mid - 0.5 * half, mid, mid + 0.5 * half});
      out.fields.push_back(std::move(f));
    }
  }
  FieldRng rng(seed);
  for (int i = 0; i < count; ++i) {
    std::vector<double> f = random_smooth_field(mesh, rng);
    const double q = rng.uniform(0.15, 0.85);
    out.thresholds.push_back({measure_quantile(mesh, f, q)});
    out.fields.push_back(std::move(f));
  }
  return out;
}

}  // namespace pspec
