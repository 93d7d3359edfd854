#include <doctest.h>

#include <cmath>

#include "zmc/quadrature.hpp"

using namespace zmc;

TEST_CASE("smooth integrands against closed forms") {
  const auto r = integrate_gk15([](double x) { return Vec3{std::exp(x), std::cos(x), x * x}; }, 0.0, 2.0, 1e-13, 0.0);
  CHECK(r.converged);
  CHECK(r.value[0] == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-13));
  CHECK(r.value[1] == doctest::Approx(std::sin(2.0)).epsilon(1e-13));
  CHECK(r.value[2] == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("reversed limits flip the sign") {
  const auto f = [](double x) { return Vec3{1.0 / (1.0 + x * x), 0.0, 0.0}; };
  const auto a = integrate_gk15(f, 0.0, 1.0, 1e-12, 0.0);
  const auto b = integrate_gk15(f, 1.0, 0.0, 1e-12, 0.0);
  CHECK(a.value[0] == doctest::Approx(std::atan(1.0)).epsilon(1e-12));
  CHECK(b.value[0] == doctest::Approx(-a.value[0]).epsilon(1e-14));
}

TEST_CASE("integrable endpoint singularity after substitution") {
  // int_0^1 dx / sqrt(1 - x^2) with x = 1 - w^2 becomes int 2 / sqrt(2 - w^2) dw.
  const auto r = integrate_gk15([](double w) { return Vec3{2.0 / std::sqrt(2.0 - w * w), 0.0, 0.0}; }, 0.0, 1.0,
                                1e-13, 0.0);
  CHECK(r.value[0] == doctest::Approx(std::acos(-1.0) / 2.0).epsilon(1e-13));
}

TEST_CASE("adaptive refinement near a sharp peak") {
  const double eps = 1e-3;
  const auto r = integrate_gk15([&](double x) { return Vec3{eps / (x * x + eps * eps), 0.0, 0.0}; }, -1.0, 1.0,
                                1e-11, 0.0);
  CHECK(r.converged);
  CHECK(r.intervals > 10);
  CHECK(r.value[0] == doctest::Approx(2.0 * std::atan(1.0 / eps)).epsilon(1e-11));
}
