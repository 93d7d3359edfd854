#include "zmc/entire_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "zmc/error.hpp"

namespace zmc {

namespace {

constexpr double kRuledTol = 1e-8;
constexpr int kFallbackDirections = 36;
constexpr int kSegmentSamples = 41;

struct GraphConsts {
  double k;  // sqrt(-2a)
  double q;  // sqrt(-a/2)
};

GraphConsts consts(const EntireGraphParams& g) {
  if (!(g.a < 0.0) || !(g.p < 0.0)) throw Error(ErrorCode::InvalidParams, "entire graph requires a < 0 and p < 0");
  return {std::sqrt(-2.0 * g.a), std::sqrt(-0.5 * g.a)};
}

}  // namespace

Vector3L eval_graph_param(const EntireGraphParams& g, double u, double v) {
  const auto [k, q] = consts(g);
  const double pe = g.p * std::exp(-2.0 * k * u);
  const double h = 0.5 * q * v * v;
  return {v, pe + u + h, pe - u + h};
}

double solve_height(const EntireGraphParams& g, double x, double y, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParams, "tol must be positive");
  if (!std::isfinite(x) || !std::isfinite(y)) throw Error(ErrorCode::OutOfDomain, "non-finite graph point");
  const auto [k, q] = consts(g);
  const double target = y - 0.5 * q * x * x;
  auto phi = [&](double u) { return g.p * std::exp(-2.0 * k * u) + u - target; };

  // phi is strictly increasing with slope >= 1.
  double lo = -1.0, hi = 1.0;
  int doublings = 0;
  while (!(phi(lo) < 0.0 && phi(hi) > 0.0)) {
    if (++doublings > 1000) throw Error(ErrorCode::BracketFailure, "could not bracket the height root");
    const double w = hi - lo;
    if (phi(lo) >= 0.0) lo -= w;
    if (phi(hi) <= 0.0) hi += w;
  }
  double u = 0.5 * (lo + hi);
  for (;;) {
    u = 0.5 * (lo + hi);
    if (u <= lo || u >= hi) break;
    const double fu = phi(u);
    if (fu == 0.0) break;
    (fu < 0.0 ? lo : hi) = u;
  }
  // Rounding floor of phi at adjacent doubles, summed over its terms.
  const double scale = std::abs(g.p * std::exp(-2.0 * k * u)) * (1.0 + 2.0 * k * std::abs(u)) + std::abs(u) + std::abs(target);
  if (!(std::abs(phi(u)) <= std::max(tol, 8.0 * std::numeric_limits<double>::epsilon() * scale)))
    throw Error(ErrorCode::BracketFailure, "height root not resolved to tolerance");
  return g.p * std::exp(-2.0 * k * u) - u + 0.5 * q * x * x;
}

GraphFunction entire_graph_function(const EntireGraphParams& g) {
  consts(g);
  return {"entire-graph", [g](double x, double y) { return solve_height(g, x, y); }, {}};
}

GraphFunction helicoid_second_kind() {
  GraphFunction f;
  f.name = "helicoid";
  f.value = [](double x, double y) { return x * std::tanh(y); };
  f.jet = [](double x, double y) {
    const double th = std::tanh(y), s2 = 1.0 - th * th;
    return GraphJet{th, x * s2, 0.0, s2, -2.0 * x * th * s2};
  };
  return f;
}

GraphFunction scherk_graph() {
  GraphFunction f;
  f.name = "scherk";
  // log cosh without overflow for large arguments.
  auto lc = [](double s) {
    const double a = std::abs(s);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
  };
  f.value = [lc](double x, double y) { return lc(x) - lc(y); };
  f.jet = [](double x, double y) {
    const double tx = std::tanh(x), ty = std::tanh(y);
    return GraphJet{tx, -ty, 1.0 - tx * tx, 0.0, -(1.0 - ty * ty)};
  };
  return f;
}

GraphFunction plane_graph() {
  GraphFunction f;
  f.name = "plane";
  f.value = [](double x, double) { return x; };
  f.jet = [](double, double) { return GraphJet{1.0, 0.0, 0.0, 0.0, 0.0}; };
  return f;
}

GraphJet graph_jet(const GraphFunction& f, double x, double y, double h) {
  if (f.jet) return f.jet(x, y);
  const auto& F = f.value;
  const double c = F(x, y);
  const double xp = F(x + h, y), xm = F(x - h, y), yp = F(x, y + h), ym = F(x, y - h);
  GraphJet j;
  j.fx = (xp - xm) / (2.0 * h);
  j.fy = (yp - ym) / (2.0 * h);
  j.fxx = (xp - 2.0 * c + xm) / (h * h);
  j.fyy = (yp - 2.0 * c + ym) / (h * h);
  j.fxy = (F(x + h, y + h) - F(x + h, y - h) - F(x - h, y + h) + F(x - h, y - h)) / (4.0 * h * h);
  return j;
}

double graph_zmc_residual(const GraphFunction& f, double x, double y) {
  const GraphJet j = graph_jet(f, x, y);
  return std::abs((1.0 - j.fy * j.fy) * j.fxx + 2.0 * j.fx * j.fy * j.fxy + (1.0 - j.fx * j.fx) * j.fyy);
}

double graph_causal_indicator(const GraphFunction& f, double x, double y) {
  const GraphJet j = graph_jet(f, x, y);
  return 1.0 - j.fx * j.fx - j.fy * j.fy;
}

LightlikeCurvePoints lightlike_curves(const EntireGraphParams& g, double u) {
  const auto [k, q] = consts(g);
  const double pe = g.p * std::exp(-2.0 * k * u);
  const double w = std::sqrt(-8.0 * pe / k);
  return {{w, -pe + u, -pe - u}, {-w, -pe + u, -pe - u}};
}

LightlikeCurvePoints lightlike_curve_tangents(const EntireGraphParams& g, double u) {
  const auto [k, q] = consts(g);
  const double pe = g.p * std::exp(-2.0 * k * u);
  const double w = std::sqrt(-8.0 * pe / k);
  const double yt = 2.0 * k * pe + 1.0, tt = 2.0 * k * pe - 1.0;
  return {{-k * w, yt, tt}, {k * w, yt, tt}};
}

std::vector<RuledPoint> ruled_line_test(const GraphFunction& f, const std::vector<std::pair<double, double>>& points,
                                        double half_length) {
  if (!(half_length > 0.0)) throw Error(ErrorCode::InvalidParams, "half_length must be positive");
  std::vector<RuledPoint> out;
  out.reserve(points.size());
  for (const auto& [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y)) throw Error(ErrorCode::OutOfDomain, "non-finite test point");
    RuledPoint rp;
    rp.x = x;
    rp.y = y;
    const double t0 = f.value(x, y);
    const GraphJet j = graph_jet(f, x, y);

    // Asymptotic directions: null directions of f_xx dx^2 + 2 f_xy dx dy + f_yy dy^2.
    std::vector<std::pair<double, double>> dirs;
    const double A = j.fxx, B = j.fxy, C = j.fyy;
    const double disc = B * B - A * C;
    const double scale = std::max({std::abs(A), std::abs(B), std::abs(C)});
    if (scale == 0.0) {
      dirs = {{1.0, 0.0}};  // planar point: every direction is asymptotic
    } else if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      if (std::abs(A) >= std::abs(C)) {
        // A dx^2 + 2B dx dy + C dy^2 = 0 with dy = 1.
        if (A == 0.0)
          dirs = {{1.0, 0.0}, {-C, 2.0 * B}};
        else
          dirs = {{(-B + sq) / A, 1.0}, {(-B - sq) / A, 1.0}};
      } else {
        dirs = {{1.0, (-B + sq) / C}, {1.0, (-B - sq) / C}};
      }
    }
    if (dirs.empty() || scale == 0.0) {
      if (dirs.empty()) rp.used_fallback = true;
      for (int i = 0; i < kFallbackDirections; ++i) {
        const double th = std::numbers::pi * i / kFallbackDirections;
        dirs.emplace_back(std::cos(th), std::sin(th));
      }
    }

    rp.min_deviation = std::numeric_limits<double>::infinity();
    for (auto [wx, wy] : dirs) {
      const double n = std::hypot(wx, wy);
      if (n == 0.0) continue;
      wx /= n;
      wy /= n;
      const double wt = j.fx * wx + j.fy * wy;
      double dev = 0.0;
      for (int i = 0; i < kSegmentSamples; ++i) {
        const double s = half_length * (2.0 * i / (kSegmentSamples - 1) - 1.0);
        dev = std::max(dev, std::abs(f.value(x + s * wx, y + s * wy) - (t0 + s * wt)));
      }
      if (dev < rp.min_deviation) {
        rp.min_deviation = dev;
        rp.best_direction = {wx, wy, wt};
      }
    }
    rp.ruled = rp.min_deviation < kRuledTol;
    out.push_back(rp);
  }
  return out;
}

}  // namespace zmc
