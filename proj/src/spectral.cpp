#include "pspec/spectral.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pspec {
namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Vector = Eigen::VectorXd;

double signed_pow(double x, double e) { return std::copysign(std::pow(std::abs(x), e), x); }

// Discrete Rayleigh-quotient problem on the free vertices of a mesh. Pinned
// vertices stay at zero; closed problems keep iterates on the constraint set.
class QuotientProblem {
 public:
  QuotientProblem(const Mesh& mesh, std::vector<char> pinned, bool closed)
      : mesh_(mesh), closed_(closed), slot_(mesh.vertex_count(), -1) {
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
      if (!pinned[v]) {
        slot_[v] = static_cast<int>(free_.size());
        free_.push_back(static_cast<int>(v));
      }
    }
    if (free_.empty()) throw std::invalid_argument("problem has no free vertices");
  }

  std::size_t free_count() const { return free_.size(); }

  std::vector<double> expand(const Vector& x) const {
    std::vector<double> u(mesh_.vertex_count(), 0.0);
    for (std::size_t i = 0; i < free_.size(); ++i) u[free_[i]] = x[i];
    return u;
  }
  Vector restrict(std::span<const double> u) const {
    Vector x(free_.size());
    for (std::size_t i = 0; i < free_.size(); ++i) x[i] = u[free_[i]];
    return x;
  }

  // Energy with regularized gradient norms; fills the gradient on free slots.
  double energy(std::span<const double> u, double p, double eps, Vector* grad) const {
    if (grad) grad->setZero(free_.size());
    double e = 0.0;
    const double eps2 = eps * eps;
    for (std::size_t c = 0; c < mesh_.cell_count(); ++c) {
      const Vec3 g = mesh_.cell_gradient(c, u);
      const double s = g.squaredNorm() + eps2;
      const double area = mesh_.cell_measure()[c];
      e += area * std::pow(s, 0.5 * p);
      if (!grad || s == 0.0) continue;
      const double w = area * p * std::pow(s, 0.5 * (p - 2.0));
      const auto idx = mesh_.cell(c);
      const auto gr = mesh_.basis_gradients(c);
      for (int i = 0; i < mesh_.cell_size(); ++i) {
        const int k = slot_[idx[i]];
        if (k >= 0) (*grad)[k] += w * g.dot(gr[i]);
      }
    }
    return e;
  }

  double mass(std::span<const double> u, double p, Vector* grad) const {
    double m = 0.0;
    if (grad) grad->setZero(free_.size());
    for (std::size_t i = 0; i < free_.size(); ++i) {
      const int v = free_[i];
      const double w = mesh_.vertex_measure()[v];
      m += w * std::pow(std::abs(u[v]), p);
      if (grad) (*grad)[i] = p * w * signed_pow(u[v], p - 1.0);
    }
    return m;
  }

  // Weighted stiffness plus a mass shift, on free slots. Sparsity pattern is
  // independent of u.
  SparseMatrix preconditioner(std::span<const double> u, double p, double energy,
                              double shift) const {
    const double n = static_cast<double>(mesh_.cell_count());
    double rms = 0.0;
    for (std::size_t c = 0; c < mesh_.cell_count(); ++c) {
      rms += mesh_.cell_gradient(c, u).squaredNorm() / n;
    }
    const double delta2 = 1e-6 * rms + 1e-300;
    std::vector<Triplet> trip;
    trip.reserve(mesh_.cell_count() * mesh_.cell_size() * mesh_.cell_size() + free_.size());
    for (std::size_t c = 0; c < mesh_.cell_count(); ++c) {
      const Vec3 g = mesh_.cell_gradient(c, u);
      const double w = mesh_.cell_measure()[c] * p *
                       std::pow(g.squaredNorm() + delta2, 0.5 * (p - 2.0)) / energy;
      const auto idx = mesh_.cell(c);
      const auto gr = mesh_.basis_gradients(c);
      for (int i = 0; i < mesh_.cell_size(); ++i) {
        const int ki = slot_[idx[i]];
        if (ki < 0) continue;
        for (int j = 0; j < mesh_.cell_size(); ++j) {
          const int kj = slot_[idx[j]];
          if (kj >= 0) trip.emplace_back(ki, kj, w * gr[i].dot(gr[j]));
        }
      }
    }
    double l2 = 0.0;
    for (int v : free_) l2 += mesh_.vertex_measure()[v] * u[v] * u[v];
    for (std::size_t i = 0; i < free_.size(); ++i) {
      trip.emplace_back(i, i, shift * p * mesh_.vertex_measure()[free_[i]] / l2);
    }
    SparseMatrix a(free_.size(), free_.size());
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
  }

  // Linear stiffness and lumped mass on free slots.
  void linear_pair(SparseMatrix& k, Vector& m) const {
    std::vector<Triplet> trip;
    for (std::size_t c = 0; c < mesh_.cell_count(); ++c) {
      const auto idx = mesh_.cell(c);
      const auto gr = mesh_.basis_gradients(c);
      const double area = mesh_.cell_measure()[c];
      for (int i = 0; i < mesh_.cell_size(); ++i) {
        const int ki = slot_[idx[i]];
        if (ki < 0) continue;
        for (int j = 0; j < mesh_.cell_size(); ++j) {
          const int kj = slot_[idx[j]];
          if (kj >= 0) trip.emplace_back(ki, kj, area * gr[i].dot(gr[j]));
        }
      }
    }
    k.resize(free_.size(), free_.size());
    k.setFromTriplets(trip.begin(), trip.end());
    m.resize(free_.size());
    for (std::size_t i = 0; i < free_.size(); ++i) m[i] = mesh_.vertex_measure()[free_[i]];
  }

  // Scale to unit L^p norm and, for closed problems, shift onto the
  // constraint set first.
  void normalize(std::vector<double>& u, double p) const {
    if (closed_) {
      const double c = constraint_shift(mesh_, u, p);
      for (double& x : u) x -= c;
    }
    const double m = mass(u, p, nullptr);
    if (!(m > 0.0)) throw std::runtime_error("iterate collapsed to zero");
    const double s = std::pow(m, -1.0 / p);
    for (double& x : u) x *= s;
  }

  double quotient(std::span<const double> u, double p, double eps) const {
    return energy(u, p, eps, nullptr) / mass(u, p, nullptr);
  }

  const Mesh& mesh() const { return mesh_; }
  bool closed() const { return closed_; }

 private:
  const Mesh& mesh_;
  bool closed_;
  std::vector<int> free_;
  std::vector<int> slot_;
};

constexpr int kRefactorEvery = 4;

struct StageOutcome {
  double quotient = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

// Preconditioned descent on log(energy) - log(mass) with backtracking.
StageOutcome descend(const QuotientProblem& prob, std::vector<double>& u, double p, double eps,
                     double tol, const SolverSettings& opts) {
  StageOutcome out;
  prob.normalize(u, p);
  double f = prob.quotient(u, p, eps);

  Eigen::SimplicialLDLT<SparseMatrix> solver;
  bool analyzed = false;
  int quiet = 0;
  Vector ge, gm;
  for (int it = 0; it < opts.max_iterations; ++it) {
    out.iterations = it + 1;
    const double e = prob.energy(u, p, eps, &ge);
    const double m = prob.mass(u, p, &gm);
    const Vector grad = ge / e - gm / m;

    // The preconditioner is refreshed every few iterations only; a stale
    // factorization still gives a descent direction.
    if (it % kRefactorEvery == 0) {
      const SparseMatrix pc = prob.preconditioner(u, p, e, opts.preconditioner_shift);
      if (!analyzed) {
        solver.analyzePattern(pc);
        analyzed = true;
      }
      solver.factorize(pc);
      if (solver.info() != Eigen::Success) throw std::runtime_error("preconditioner factorization failed");
    }
    const Vector dir = -solver.solve(grad);
    const double slope = grad.dot(dir);

    double rel = 0.0;
    if (slope < 0.0) {
      const Vector x = prob.restrict(u);
      double alpha = 1.0;
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        std::vector<double> trial = prob.expand(x + alpha * dir);
        if (prob.closed()) {
          const double c = constraint_shift(prob.mesh(), trial, p);
          for (double& t : trial) t -= c;
        }
        const double ft = prob.quotient(trial, p, eps);
        if (ft <= f + opts.armijo * alpha * slope) {
          // Renormalizing can move the quotient by rounding; such a step
          // counts as stationary so the recorded trace never increases.
          prob.normalize(trial, p);
          const double fn = prob.quotient(trial, p, eps);
          if (fn < f) {
            rel = (f - fn) / f;
            u = std::move(trial);
            f = fn;
            out.trace.push_back(f);
          }
          break;
        }
      }
    }
    out.residual = rel;
    quiet = rel < tol ? quiet + 1 : 0;
    if (quiet >= opts.patience) {
      out.converged = true;
      break;
    }
  }
  out.quotient = f;
  return out;
}

// First eigenvector of the linear pair (p = 2) by inverse iteration.
std::vector<double> linear_start(const QuotientProblem& prob) {
  SparseMatrix k;
  Vector m;
  prob.linear_pair(k, m);
  const std::size_t n = prob.free_count();
  const Mesh& mesh = prob.mesh();

  Vector x(n);
  double shift = 0.0;
  if (prob.closed()) {
    // Shifted to make the singular stiffness definite; constants are
    // deflated every step.
    shift = 1e-6 * k.diagonal().sum() / m.sum();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3& p = mesh.vertex(i);
      const double jitter = std::sin(12.9898 * static_cast<double>(i) + 1.0);
      x[i] = p.x() + p.y() + p.z() + 0.05 * jitter;
    }
  } else {
    x.setOnes();
  }
  SparseMatrix a = k;
  if (shift > 0.0) {
    for (std::size_t i = 0; i < n; ++i) a.coeffRef(i, i) += shift * m[i];
  }
  Eigen::SimplicialLDLT<SparseMatrix> solver(a);
  if (solver.info() != Eigen::Success) throw std::runtime_error("stiffness factorization failed");

  auto deflate = [&](Vector& y) {
    if (prob.closed()) y.array() -= m.dot(y) / m.sum();
  };
  deflate(x);
  double prev = 0.0;
  int quiet = 0;
  for (int it = 0; it < 2000; ++it) {
    Vector y = solver.solve(m.cwiseProduct(x));
    deflate(y);
    y /= std::sqrt(y.dot(m.cwiseProduct(y)));
    const double rq = y.dot(k * y);
    x = std::move(y);
    quiet = (it > 0 && std::abs(prev - rq) <= 1e-13 * rq) ? quiet + 1 : 0;
    prev = rq;
    if (quiet >= 3) break;
  }
  return prob.expand(x);
}

std::vector<double> continuation_path(double target, double step) {
  std::vector<double> path{2.0};
  if (std::abs(target - 2.0) < 1e-15) return path;
  int stages = static_cast<int>(std::ceil(std::abs(target - 2.0) / step));
  for (;; ++stages) {
    double worst = 0.0;
    for (int k = 1; k <= stages; ++k) {
      const double a = 2.0 * std::pow(target / 2.0, static_cast<double>(k - 1) / stages);
      const double b = 2.0 * std::pow(target / 2.0, static_cast<double>(k) / stages);
      worst = std::max(worst, std::abs(b - a));
    }
    if (worst <= step + 1e-12) break;
  }
  for (int k = 1; k <= stages; ++k) {
    path.push_back(k == stages ? target : 2.0 * std::pow(target / 2.0, static_cast<double>(k) / stages));
  }
  return path;
}

EigenResult solve(const QuotientProblem& prob, double p, const SolverSettings& opts) {
  std::vector<double> u = linear_start(prob);
  const auto path = continuation_path(p, opts.continuation_step);

  EigenResult res;
  int total_iterations = 0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const bool last = k + 1 == path.size();
    const double q = path[k];
    double eps = 0.0;
    if (!last && q < 2.0) {
      const double frac = 1.0 - static_cast<double>(k) / static_cast<double>(path.size() - 1);
      double rms = 0.0;
      for (std::size_t c = 0; c < prob.mesh().cell_count(); ++c) {
        rms += prob.mesh().cell_gradient(c, u).squaredNorm();
      }
      eps = opts.smoothing * frac * std::sqrt(rms / static_cast<double>(prob.mesh().cell_count()));
    }
    StageOutcome st = descend(prob, u, q, eps, last ? opts.tolerance : opts.stage_tolerance, opts);
    total_iterations += st.iterations;
    res.continuation.emplace_back(q, prob.quotient(u, q, 0.0));
    if (last) {
      res.trace = std::move(st.trace);
      res.residual = st.residual;
      res.converged = st.converged;
    }
  }
  for (std::size_t k = 1; k < res.continuation.size(); ++k) {
    const auto [p0, l0] = res.continuation[k - 1];
    const auto [p1, l1] = res.continuation[k];
    if (std::abs(std::log(l1 / l0)) > opts.lipschitz_budget * std::abs(p1 - p0)) {
      res.continuation_ok = false;
    }
  }
  res.iterations = total_iterations;
  res.field = std::move(u);
  res.lambda = prob.quotient(res.field, p, 0.0);
  return res;
}

}  // namespace

double p_energy(const Mesh& mesh, std::span<const double> u, double p) {
  double e = 0.0;
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    e += mesh.cell_measure()[c] * std::pow(mesh.cell_gradient(c, u).norm(), p);
  }
  return e;
}

double p_mass(const Mesh& mesh, std::span<const double> u, double p) {
  double m = 0.0;
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    m += mesh.vertex_measure()[v] * std::pow(std::abs(u[v]), p);
  }
  return m;
}

double rayleigh_quotient(const Mesh& mesh, std::span<const double> u, PExponent p) {
  if (u.size() != mesh.vertex_count()) throw std::invalid_argument("field size does not match vertex count");
  const double m = p_mass(mesh, u, p);
  if (!(m > 0.0)) throw std::domain_error("Rayleigh quotient of a zero field");
  return p_energy(mesh, u, p) / m;
}

double constraint_residual(const Mesh& mesh, std::span<const double> u, double p) {
  double s = 0.0;
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    s += mesh.vertex_measure()[v] * signed_pow(u[v], p - 1.0);
  }
  return std::abs(s);
}

double constraint_shift(const Mesh& mesh, std::span<const double> u, double p) {
  if (u.size() != mesh.vertex_count()) throw std::invalid_argument("field size does not match vertex count");
  const auto [lo_it, hi_it] = std::minmax_element(u.begin(), u.end());
  double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) throw std::invalid_argument("constraint projection of a constant field");
  const auto& w = mesh.vertex_measure();
  // h is strictly decreasing in c, positive at min(u) and negative at max(u).
  // Newton steps are kept inside the bracket, with bisection as fallback.
  auto eval = [&](double c, double& slope) {
    double s = 0.0, d = 0.0;
    for (std::size_t v = 0; v < u.size(); ++v) {
      const double a = std::abs(u[v] - c);
      const double t = w[v] * std::pow(a, p - 2.0);
      if (std::isfinite(t)) {
        s += t * (u[v] - c);
        d += t;
      }
    }
    slope = -(p - 1.0) * d;
    return s;
  };
  double c = 0.0, total = 0.0;
  for (std::size_t v = 0; v < u.size(); ++v) {
    c += w[v] * u[v];
    total += w[v];
  }
  c /= total;
  double best = c, best_h = INFINITY;
  for (int it = 0; it < 200; ++it) {
    double slope = 0.0;
    const double h = eval(c, slope);
    if (std::abs(h) < best_h) {
      best = c;
      best_h = std::abs(h);
    }
    if (h == 0.0) break;
    if (h > 0.0) {
      lo = c;
    } else {
      hi = c;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) break;
    double next = slope < 0.0 ? c - h / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == c) break;
    c = next;
  }
  return best;
}

std::vector<double> project_constraint(const Mesh& mesh, std::span<const double> u, PExponent p) {
  const double c = constraint_shift(mesh, u, p);
  std::vector<double> out(u.begin(), u.end());
  for (double& x : out) x -= c;
  return out;
}

NodalDomains nodal_domains(const Mesh& mesh, std::span<const double> u) {
  const std::size_t nv = mesh.vertex_count();
  std::vector<char> pos(nv), neg(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    pos[v] = u[v] > 0.0;
    neg[v] = u[v] < 0.0;
  }
  NodalDomains out;
  std::vector<int> lp, ln;
  const int np = connected_components(mesh, pos, lp);
  const int nn = connected_components(mesh, neg, ln);
  out.count = np + nn;
  out.labels.assign(nv, -1);
  for (std::size_t v = 0; v < nv; ++v) {
    if (lp[v] >= 0) out.labels[v] = lp[v];
    if (ln[v] >= 0) out.labels[v] = np + ln[v];
  }
  return out;
}

EigenResult dirichlet_eigen(const Domain& domain, PExponent p, const SolverSettings& opts) {
  if (domain.is_whole()) throw std::invalid_argument("dirichlet_eigen requires a domain with boundary");
  QuotientProblem prob(domain.mesh, domain.pinned, false);
  EigenResult res = solve(prob, p, opts);
  double sum = std::accumulate(res.field.begin(), res.field.end(), 0.0);
  if (sum < 0.0) {
    for (double& x : res.field) x = -x;
  }
  return res;
}

EigenResult closed_eigen(const Mesh& mesh, PExponent p, const SolverSettings& opts) {
  if (!mesh.closed()) throw std::invalid_argument("closed_eigen requires a closed mesh");
  QuotientProblem prob(mesh, std::vector<char>(mesh.vertex_count(), 0), true);
  EigenResult res = solve(prob, p, opts);
  const auto top = std::max_element(res.field.begin(), res.field.end(),
                                    [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (*top < 0.0) {
    for (double& x : res.field) x = -x;
  }
  res.constraint_residual = constraint_residual(mesh, res.field, p);
  return res;
}

}  // namespace pspec
