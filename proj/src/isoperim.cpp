#include "pspec/isoperim.hpp"

#include "pspec/cap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pspec {

double gromov_ratio(const Mesh& mesh, std::span<const double> f, double t, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const double volume = superlevel_measure(mesh, f, t);
  const double total = mesh.total_measure();
  if (!(volume > 1e-12 * total && volume < total * (1.0 - 1e-12))) {
    throw std::invalid_argument("degenerate superlevel set at t = " + std::to_string(t));
  }
  const int n = mesh.dimension();
  const double r = cap_radius(std::min(volume / beta, sphere_measure(n)), n);
  const double model = beta * cap_boundary(r, n);
  return level_boundary_measure(mesh, f, t) / model;
}

CrokeProfile croke_profile(const Mesh& mesh, const std::vector<std::vector<double>>& fields,
                           const std::vector<std::vector<double>>& thresholds, double beta,
                           double diameter, int bins) {
  if (fields.empty()) throw std::invalid_argument("croke_profile: empty battery");
  if (fields.size() != thresholds.size()) {
    throw std::invalid_argument("croke_profile: one threshold list per field required");
  }
  if (bins < 1) throw std::invalid_argument("croke_profile: bins must be >= 1");
  CrokeProfile out;
  out.diameter = diameter;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    for (double t : thresholds[i]) out.ratios.push_back(gromov_ratio(mesh, fields[i], t, beta));
  }
  if (out.ratios.empty()) throw std::invalid_argument("croke_profile: empty battery");
  const auto [lo, hi] = std::minmax_element(out.ratios.begin(), out.ratios.end());
  out.min_ratio = *lo;
  out.histogram_lo = *lo;
  out.histogram_hi = *hi;
  out.histogram.assign(bins, 0);
  const double width = (*hi - *lo) / bins;
  for (double r : out.ratios) {
    int b = width > 0.0 ? static_cast<int>((r - *lo) / width) : 0;
    out.histogram[std::clamp(b, 0, bins - 1)] += 1;
  }
  return out;
}

}  // namespace pspec
