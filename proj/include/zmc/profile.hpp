#pragma once

#include <vector>

#include "zmc/families.hpp"
#include "zmc/quadrature.hpp"

namespace zmc::detail {

/// Delta(s)^2 = A s^4 + B s^2 + C for the integral families, together with
/// its real roots, the domain components and the cumulative-integral cache
/// on the component containing r0.
struct ProfileData {
  double A = 0.0, B = 0.0, C = 0.0;
  double a = 0.0, b = 0.0;  // weights of the s^2/Delta integrals

  // Real roots in x = s^2 (any sign), with multiplicity.
  std::vector<double> xroots;
  std::vector<int> xmult;

  std::vector<Interval> components;
  int active = -1;
  double r0 = 0.0;
  bool lo_simple = false;  // active component ends at a simple root of Delta^2
  bool hi_simple = false;

  std::vector<double> checkpoints;
  std::vector<Vec3> cumulative;  // (int 1/Delta, int s^2/Delta, 0) from r0

  double delta2(double s) const;
  double delta(double s) const;
  double ddelta(double s) const;  // d Delta / ds

  /// (int 1/Delta, int s^2/Delta) over [s1, s2] inside the active component.
  Vec3 segment(double s1, double s2, double tol) const;
  Vec3 cumulative_at(double s, double tol) const;

  static ProfileData build(double A, double B, double C, double a, double b);
  void activate(double r0_in);
};

}  // namespace zmc::detail
