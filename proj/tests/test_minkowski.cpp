#include <doctest.h>

#include <random>

#include "zmc/error.hpp"
#include "zmc/minkowski.hpp"

using namespace zmc;

namespace {

bool near(const Vector3L& a, const Vector3L& b, double tol) { return euclid_norm(a - b) <= tol; }

}  // namespace

TEST_CASE("inner product on the basis") {
  CHECK(lorentz_dot({1, 0, 0}, {1, 0, 0}) == 1.0);
  CHECK(lorentz_dot({0, 0, 1}, {0, 0, 1}) == -1.0);
  CHECK(lorentz_dot({0, 1, 1}, {0, 1, 1}) == 0.0);
}

TEST_CASE("causal character") {
  CHECK(causal_character({1, 0, 0}) == CausalCharacter::Spacelike);
  CHECK(causal_character({0, 0, 1}) == CausalCharacter::Timelike);
  CHECK(causal_character({0, 1, 1}) == CausalCharacter::Lightlike);
  CHECK(causal_character({0, 0, 0}) == CausalCharacter::Spacelike);
  CHECK(causal_character({0, 1, 1 + 1e-12}, 1e-9) == CausalCharacter::Lightlike);
  CHECK(causal_character({0, 1, 1 + 1e-6}, 1e-9) == CausalCharacter::Timelike);
  CHECK(to_string(CausalCharacter::Lightlike) == "lightlike");
}

TEST_CASE("Lorentz cross product") {
  CHECK(near(lorentz_cross({1, 0, 0}, {0, 1, 0}), {0, 0, -1}, 0));
  CHECK(near(lorentz_cross({0, 1, 0}, {0, 0, 1}), {1, 0, 0}, 0));
  const Vector3L v{0.3, -2, 5};
  CHECK(near(lorentz_cross(v, v), {0, 0, 0}, 0));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const Vector3L a{U(rng), U(rng), U(rng)}, b{U(rng), U(rng), U(rng)}, c{U(rng), U(rng), U(rng)};
    CHECK(std::abs(lorentz_dot(lorentz_cross(a, b), c) - det3(a, b, c)) < 1e-12 * 100);
  }
}

TEST_CASE("one-parameter isometries") {
  const Isometry half = one_parameter_isometry(AxisKind::TimelikeAxis, std::acos(-1.0));
  CHECK(near(half.apply({1, 0, 0}), {-1, 0, 0}, 1e-15));
  const Isometry id = one_parameter_isometry(AxisKind::SpacelikeAxis, 0.0);
  CHECK(near(id.apply({0.2, 0.3, 0.4}), {0.2, 0.3, 0.4}, 0));
  const Isometry nr = one_parameter_isometry(AxisKind::LightlikeAxis, 1.0);
  CHECK(near(nr.apply({0, 1, 1}), {0, 1, 1}, 1e-15));

  for (auto k : {AxisKind::TimelikeAxis, AxisKind::SpacelikeAxis, AxisKind::LightlikeAxis}) {
    for (double a : {-1.3, 0.2, 0.9}) {
      for (double b : {-0.4, 0.7}) {
        const Mat3 ab = one_parameter_isometry(k, a).linear * one_parameter_isometry(k, b).linear;
        const Mat3 sum = one_parameter_isometry(k, a + b).linear;
        for (int i = 0; i < 9; ++i) CHECK(std::abs(ab.m[static_cast<std::size_t>(i)] - sum.m[static_cast<std::size_t>(i)]) < 1e-12);
      }
      CHECK(lorentz_defect(one_parameter_isometry(k, a).linear) < 1e-12);
    }
  }
}

TEST_CASE("null-normalizing isometry") {
  SUBCASE("identity for e2 + e3 through the origin") {
    const Isometry A = null_normalizing_isometry({0, 1, 1}, {0, 0, 0});
    for (int i = 0; i < 9; ++i) CHECK(A.linear.m[static_cast<std::size_t>(i)] == doctest::Approx(Mat3::identity().m[static_cast<std::size_t>(i)]));
  }
  SUBCASE("quarter turn for (-1, 0, 1)") {
    const Isometry A = null_normalizing_isometry({-1, 0, 1}, {0, 0, 0});
    const Mat3 expect = Mat3::from_rows({0, 1, 0}, {-1, 0, 0}, {0, 0, 1});
    for (int i = 0; i < 9; ++i) CHECK(A.linear.m[static_cast<std::size_t>(i)] == doctest::Approx(expect.m[static_cast<std::size_t>(i)]).epsilon(1e-15));
  }
  SUBCASE("random lightlike lines land in {x = 0, y = t}") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-2, 2);
    for (int i = 0; i < 100; ++i) {
      const double phi = U(rng) * 3, s = (i % 2 ? 1.0 : -1.0) * (0.5 + std::abs(U(rng)));
      const Vector3L d{s * std::cos(phi), s * std::sin(phi), s};
      const Vector3L p0{U(rng), U(rng), U(rng)};
      const Isometry A = null_normalizing_isometry(d, p0);
      CHECK(lorentz_defect(A.linear) < 1e-12);
      const Vector3L Ad = A.apply_linear(d);
      CHECK(std::abs(Ad.x) < 1e-12);
      CHECK(Ad.y > 0);
      CHECK(std::abs(Ad.y - Ad.t) < 1e-12);
      for (double t : {-3.0, 0.0, 2.5}) {
        const Vector3L q = A.apply(p0 + t * d);
        CHECK(std::abs(q.x) < 1e-10 * (1 + std::abs(t)));
        CHECK(std::abs(q.y - q.t) < 1e-10 * (1 + std::abs(t)));
      }
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(null_normalizing_isometry({1, 0, 0.5}, {}), Error);
    try {
      null_normalizing_isometry({0, 0, 0}, {});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateDirection);
    }
  }
}
