#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace pspec {

using Vec3 = Eigen::Vector3d;

/// Exponent of the p-Laplacian. Construction enforces the supported range.
class PExponent {
 public:
  static constexpr double kMin = 1.1;
  static constexpr double kMax = 10.0;

  explicit PExponent(double p) : p_(p) {
    if (!(p >= kMin && p <= kMax)) {
      throw std::out_of_range("p = " + std::to_string(p) +
                              " outside supported range [1.1, 10]");
    }
  }

  double value() const { return p_; }
  operator double() const { return p_; }

 private:
  double p_;
};

}  // namespace pspec
