#pragma once

// Geodesic caps about the north pole of the unit model sphere S^n.

namespace pspec {

/// H^n of the unit sphere S^n (2*pi for n = 1, 4*pi for n = 2).
double sphere_measure(int n);

/// H^{n-1} of the unit sphere S^{n-1}; equals 2 for n = 1 (two points).
double equator_measure(int n);

/// H^n of the cap of colatitude r in S^n. Requires r in [0, pi].
double cap_volume(double r, int n);

/// Inverse of cap_volume by monotone bisection. Requires v in [0, H^n(S^n)].
double cap_radius(double v, int n);

/// H^{n-1} of the boundary of the cap of colatitude r.
double cap_boundary(double r, int n);

/// H^n of the shell between colatitudes r0 <= r1.
inline double cap_shell(double r0, double r1, int n) {
  return cap_volume(r1, n) - cap_volume(r0, n);
}

}  // namespace pspec
