#include <doctest.h>

#include <cmath>
#include <random>

#include "zmc/classify.hpp"
#include "zmc/entire_graph.hpp"
#include "zmc/error.hpp"

using namespace zmc;

namespace {

const EntireGraphParams kG{-2.0, -1.0};

}  // namespace

TEST_CASE("graph parametrization") {
  const Vector3L o = eval_graph_param(kG, 0, 0);
  CHECK(o.x == 0.0);
  CHECK(o.y == doctest::Approx(-1.0));
  CHECK(o.t == doctest::Approx(-1.0));
  const Vector3L p = eval_graph_param(kG, 0, 1);
  CHECK(p.x == 1.0);
  CHECK(p.y == doctest::Approx(-0.5));
  CHECK(p.t == doctest::Approx(-0.5));
  for (double u : {-1.3, 0.2, 2.0}) {
    const Vector3L q = eval_graph_param({-0.7, -2.5}, u, 0.8);
    CHECK(q.y - q.t == doctest::Approx(2.0 * u).epsilon(1e-14));
  }
  // Agrees with the singular parabola family it belongs to.
  const auto fam = SurfaceFamily::entire_graph(kG);
  const Vector3L a = eval_graph_param(kG, 0.3, -1.2), b = evaluate(fam, 0.3, -1.2);
  CHECK(euclid_norm(a - b) < 1e-14);
}

TEST_CASE("height function") {
  CHECK(solve_height(kG, 0.0, -1.0) == doctest::Approx(-1.0).epsilon(1e-14));
  // u solves u = exp(-4u); t = -2u. Reference from a 30-digit root.
  CHECK(solve_height(kG, 0.0, 0.0) == doctest::Approx(-0.601083936598521469606).epsilon(1e-14));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-3, 3);
  for (const EntireGraphParams g : {kG, EntireGraphParams{-0.5, -3.0}}) {
    for (int i = 0; i < 100; ++i) {
      const Vector3L X = eval_graph_param(g, U(rng), U(rng));
      CHECK(solve_height(g, X.x, X.y) == doctest::Approx(X.t).epsilon(1e-10).scale(1.0));
    }
  }
  CHECK_THROWS_AS(solve_height(kG, 0, 0, 0.0), Error);
}

TEST_CASE("graph ZMC residual") {
  CHECK(graph_zmc_residual(entire_graph_function(kG), 0.5, 0.5) < 1e-5);
  CHECK(graph_zmc_residual(helicoid_second_kind(), 1.0, 1.0) < 1e-8);
  CHECK(graph_zmc_residual(scherk_graph(), 0.3, 0.7) < 1e-8);
  // Central differences reproduce the analytic jets of the controls.
  GraphFunction fd = scherk_graph();
  fd.jet = nullptr;
  const GraphJet a = graph_jet(scherk_graph(), 0.3, 0.7), b = graph_jet(fd, 0.3, 0.7);
  CHECK(a.fxx == doctest::Approx(b.fxx).epsilon(1e-6));
  CHECK(a.fyy == doctest::Approx(b.fyy).epsilon(1e-6));
  CHECK(std::abs(b.fxy) < 1e-7);
  // A non-ZMC graph is caught.
  const GraphFunction bowl{"bowl", [](double x, double y) { return 0.1 * (x * x + y * y); }, {}};
  CHECK(graph_zmc_residual(bowl, 0.2, 0.1) > 0.1);
}

TEST_CASE("lightlike curves of the entire graph") {
  const auto c0 = lightlike_curves(kG, 0.0);
  CHECK(c0.cplus.x == doctest::Approx(2.0));
  CHECK(c0.cplus.y == doctest::Approx(1.0));
  CHECK(c0.cplus.t == doctest::Approx(1.0));
  CHECK(c0.cminus.x == doctest::Approx(-2.0));
  const auto fam = SurfaceFamily::entire_graph(kG);
  const GraphFunction g = entire_graph_function(kG);
  for (int i = 0; i < 50; ++i) {
    const double u = -1.0 + 2.0 * i / 49.0;
    const auto c = lightlike_curves(kG, u);
    CHECK(c.cplus.x > 0);
    CHECK(c.cminus.x == -c.cplus.x);
    const auto d = lightlike_curve_tangents(kG, u);
    CHECK(std::abs(lorentz_dot(d.cplus, d.cplus)) < 1e-8 * euclid_dot(d.cplus, d.cplus));
    CHECK(std::abs(lorentz_dot(d.cminus, d.cminus)) < 1e-8 * euclid_dot(d.cminus, d.cminus));
    // Tangent against a central difference of the curve.
    const double h = 1e-6;
    const Vector3L fd = (lightlike_curves(kG, u + h).cplus - lightlike_curves(kG, u - h).cplus) / (2 * h);
    CHECK(euclid_norm(fd - d.cplus) < 1e-6 * euclid_norm(d.cplus));
    // On the surface, and on the lightlike part of it.
    double band = 0;
    CHECK(std::abs(metric_det(fam, u, c.cplus.x, &band)) <= band);
    CHECK(euclid_norm(evaluate(fam, u, c.cplus.x) - c.cplus) < 1e-12);
    CHECK(std::abs(graph_causal_indicator(g, c.cplus.x, c.cplus.y)) < 1e-6);
  }
}

TEST_CASE("ruled line test") {
  const auto h = ruled_line_test(helicoid_second_kind(), {{1.0, 1.0}, {-0.5, 0.3}});
  for (const auto& p : h) CHECK(p.ruled);
  CHECK(h[0].best_direction.t == doctest::Approx(std::tanh(1.0)).epsilon(1e-12));
  const auto plane = ruled_line_test(plane_graph(), {{0.0, 0.0}, {2.0, -1.0}});
  for (const auto& p : plane) CHECK(p.min_deviation < 1e-14);
  std::vector<std::pair<double, double>> pts;
  // The graph flattens exponentially in |x|; the check is run where it bends.
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) pts.emplace_back(-1.0 + 0.5 * i, -1.0 + 0.5 * j);
  for (const auto& p : ruled_line_test(entire_graph_function(kG), pts)) {
    CAPTURE(p.x);
    CAPTURE(p.y);
    CHECK(p.min_deviation > 1e-3);
  }
}
