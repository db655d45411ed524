#pragma once

#include "pspec/mesh.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace pspec {

/// Platform-independent random stream: raw 64-bit engine output mapped to
/// doubles by hand, so batteries are reproducible across standard libraries.
class FieldRng {
 public:
  explicit FieldRng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform direction in R^3.
  Vec3 direction();

 private:
  std::mt19937_64 engine_;
};

/// Cubic polynomial in the normalized vertex positions plus a few Gaussian
/// bumps; smooth at mesh scale with varied superlevel topology.
std::vector<double> random_smooth_field(const Mesh& mesh, FieldRng& rng);

/// Sum of compactly supported bumps with random centers on the mesh, zero on
/// pinned vertices. Nonnegative and not identically zero.
std::vector<double> random_bump_field(const Mesh& mesh, std::span<const char> pinned,
                                      FieldRng& rng);

std::vector<double> positive_part(std::span<const double> u);

/// Value below which the given fraction of the lumped measure lies.
double measure_quantile(const Mesh& mesh, std::span<const double> u, double fraction);

}  // namespace pspec
