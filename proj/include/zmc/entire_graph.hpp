#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zmc/families.hpp"

namespace zmc {

/// First and second partials of a height function t = f(x, y).
struct GraphJet {
  double fx = 0, fy = 0;
  double fxx = 0, fxy = 0, fyy = 0;
};

struct GraphFunction {
  std::string name;
  std::function<double(double, double)> value;
  /// Analytic partials when known; central differences otherwise.
  std::function<GraphJet(double, double)> jet;
};

Vector3L eval_graph_param(const EntireGraphParams& g, double u, double v);

/// Height t(x, y) of the entire graph. The parameter u is bisected down to
/// adjacent doubles; tol only bounds the accepted residual of phi(u) - target.
double solve_height(const EntireGraphParams& g, double x, double y, double tol = 1e-12);

GraphFunction entire_graph_function(const EntireGraphParams& g);
/// x tanh y, ruled.
GraphFunction helicoid_second_kind();
/// log cosh x - log cosh y.
GraphFunction scherk_graph();
/// The plane t = x.
GraphFunction plane_graph();

/// Analytic partials if available, else central differences with step h.
GraphJet graph_jet(const GraphFunction& f, double x, double y, double h = 1e-4);

/// |(1 - f_y^2) f_xx + 2 f_x f_y f_xy + (1 - f_x^2) f_yy|.
double graph_zmc_residual(const GraphFunction& f, double x, double y);

/// 1 - f_x^2 - f_y^2: positive where the graph is spacelike.
double graph_causal_indicator(const GraphFunction& f, double x, double y);

struct LightlikeCurvePoints {
  Vector3L cplus, cminus;
};

LightlikeCurvePoints lightlike_curves(const EntireGraphParams& g, double u);
/// Tangents c+'(u) and c-'(u).
LightlikeCurvePoints lightlike_curve_tangents(const EntireGraphParams& g, double u);

struct RuledPoint {
  double x = 0, y = 0;
  double min_deviation = 0;     // over candidate directions
  Vector3L best_direction;      // (w_x, w_y, w_t) attaining the minimum
  bool used_fallback = false;   // second fundamental form definite: uniform directions
  bool ruled = false;           // min_deviation < 1e-8
};

/// For each point, the smallest deviation of the graph from a straight
/// segment of half-length `half_length` through it, over the asymptotic
/// directions (or 36 uniform directions where there are none).
std::vector<RuledPoint> ruled_line_test(const GraphFunction& f, const std::vector<std::pair<double, double>>& points,
                                        double half_length = 1.0);

}  // namespace zmc
