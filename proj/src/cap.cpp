#include "pspec/cap.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pspec {
namespace {

constexpr double kPi = std::numbers::pi;

void check_dimension(int n) {
  if (n < 1) throw std::invalid_argument("model dimension must be >= 1");
}

// \int_0^r sin^k(s) ds by the standard reduction formula.
double sin_power_integral(int k, double r) {
  if (k == 0) return r;
  if (k == 1) return 1.0 - std::cos(r);
  const double s = std::sin(r);
  return -std::pow(s, k - 1) * std::cos(r) / k +
         (static_cast<double>(k - 1) / k) * sin_power_integral(k - 2, r);
}

}  // namespace

double sphere_measure(int n) {
  check_dimension(n);
  const double h = 0.5 * (n + 1);
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

double equator_measure(int n) {
  check_dimension(n);
  if (n == 1) return 2.0;
  const double h = 0.5 * n;
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

double cap_volume(double r, int n) {
  check_dimension(n);
  if (!(r >= 0.0 && r <= kPi)) {
    throw std::out_of_range("cap colatitude " + std::to_string(r) + " outside [0, pi]");
  }
  if (n == 1) return 2.0 * r;
  if (n == 2) return 2.0 * kPi * (1.0 - std::cos(r));
  return equator_measure(n) * sin_power_integral(n - 1, r);
}

double cap_radius(double v, int n) {
  const double total = sphere_measure(n);
  const double slack = 1e-12 * total;
  if (!(v >= -slack && v <= total + slack)) {
    throw std::out_of_range("cap volume " + std::to_string(v) + " outside [0, " +
                            std::to_string(total) + "]");
  }
  if (v <= 0.0) return 0.0;
  if (v >= total) return kPi;
  double lo = 0.0, hi = kPi;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cap_volume(mid, n) < v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double cap_boundary(double r, int n) {
  check_dimension(n);
  if (!(r >= 0.0 && r <= kPi)) {
    throw std::out_of_range("cap colatitude " + std::to_string(r) + " outside [0, pi]");
  }
  if (n == 1) return 2.0;
  return equator_measure(n) * std::pow(std::sin(r), n - 1);
}

}  // namespace pspec
