#pragma once

#include <array>
#include <functional>

namespace zmc {

using Vec3 = std::array<double, 3>;

struct QuadResult {
  Vec3 value{};
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (7, 15) for a 3-vector integrand on a
/// finite interval. Stops when the summed error estimate is below
/// max(abs_tol, rel_tol * |I|) (max-norm over components) or when the number
/// of subintervals reaches max_intervals.
QuadResult integrate_gk15(const std::function<Vec3(double)>& f, double a, double b,
                          double rel_tol, double abs_tol, int max_intervals = 4000);

}  // namespace zmc
