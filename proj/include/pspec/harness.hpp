#pragma once

#include "pspec/domain.hpp"
#include "pspec/isoperim.hpp"
#include "pspec/mesh.hpp"
#include "pspec/spectral.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pspec {

/// lambda_{1,p}(S^n) from the hemisphere shooting problem.
double sphere_reference(PExponent p, int n = 2);

/// One closed eigenvalue compared against the model sphere.
struct SweepRecord {
  double aspect = 1.0;
  double p = 2.0;
  int level = 0;
  double lambda = 0.0;
  double lambda_sphere = 0.0;
  double ratio = 0.0;
  double diameter = 0.0;
  double beta = 0.0;
  double min_curvature = 0.0;
  int iterations = 0;
  bool converged = false;
  bool failed = false;
  std::string error;
};

/// Closed eigenvalue of a curvature-normalized mesh against lambda_{1,p}(S^2).
SweepRecord matei_check(const Mesh& mesh, PExponent p, double aspect, double min_curvature,
                        int level, const SolverSettings& opts = {});

/// Ratio lower bound for curvature-normalized meshes.
inline constexpr double kMateiTolerance = 0.02;
bool matei_pass(const SweepRecord& rec);

/// One record per (aspect, p) on normalized ellipsoids, sorted by diameter
/// and then p. Failed rows are kept and marked.
std::vector<SweepRecord> pinching_sweep(const std::vector<double>& aspects,
                                        const std::vector<double>& ps, int level,
                                        const SolverSettings& opts = {});

struct TrendCheck {
  /// Largest relative increase of the ratio between consecutive rows of
  /// increasing diameter (0 when the sequence is non-increasing).
  double worst_increase = 0.0;
  bool pass = false;
};

/// Ratio non-increasing in diameter for one p, up to the relative noise.
TrendCheck pinching_trend(const std::vector<SweepRecord>& records, double p,
                          double noise = 0.01);

struct AuditStep {
  std::string name;
  /// Two-sided steps compare |lhs - rhs|; one-sided steps report
  /// (rhs - lhs) / lhs, positive when the inequality is violated.
  bool two_sided = false;
  std::vector<double> thresholds;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> violation;
  double worst = 0.0;
};

struct LemmaAudit {
  int level = 0;
  double lambda = 0.0;
  std::vector<AuditStep> steps;
};

/// Evaluates, on a converged Dirichlet eigenfunction, the chain of level-set
/// identities and inequalities comparing u with its symmetrization:
///   distribution derivative, L^p equimeasurability, Holder step, radial
///   Holder equality, integrated energy comparison.
LemmaAudit lemma_chain_audit(const Domain& domain, const EigenResult& eigen, PExponent p,
                             int grid = 64);

/// A battery of superlevel sets: fields with one threshold each.
struct SuperlevelBattery {
  std::vector<std::vector<double>> fields;
  std::vector<std::vector<double>> thresholds;
};

/// Random smooth fields cut at random measure quantiles in [0.15, 0.85]. With
/// caps set, the coordinate fields cut at several levels are prepended.
SuperlevelBattery superlevel_battery(const Mesh& mesh, int count, std::uint64_t seed,
                                     bool caps);

}  // namespace pspec
