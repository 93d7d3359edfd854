#pragma once

#include <array>
#include <cmath>
#include <string_view>

namespace zmc {

/// Point or vector of Lorentz-Minkowski 3-space, metric dx^2 + dy^2 - dt^2.
struct Vector3L {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;

  constexpr Vector3L() = default;
  constexpr Vector3L(double x_, double y_, double t_) : x(x_), y(y_), t(t_) {}

  constexpr Vector3L operator+(const Vector3L& o) const { return {x + o.x, y + o.y, t + o.t}; }
  constexpr Vector3L operator-(const Vector3L& o) const { return {x - o.x, y - o.y, t - o.t}; }
  constexpr Vector3L operator-() const { return {-x, -y, -t}; }
  constexpr Vector3L operator*(double s) const { return {x * s, y * s, t * s}; }
  constexpr Vector3L operator/(double s) const { return {x / s, y / s, t / s}; }
  Vector3L& operator+=(const Vector3L& o) {
    x += o.x;
    y += o.y;
    t += o.t;
    return *this;
  }

  bool is_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(t); }
};

constexpr Vector3L operator*(double s, const Vector3L& v) { return v * s; }

enum class CausalCharacter { Spacelike, Timelike, Lightlike };

std::string_view to_string(CausalCharacter c);

/// Relative lightlike threshold used by the tolerant classifier.
inline constexpr double kLightlikeTolerance = 1e-9;

constexpr double lorentz_dot(const Vector3L& u, const Vector3L& v) {
  return u.x * v.x + u.y * v.y - u.t * v.t;
}

constexpr double euclid_dot(const Vector3L& u, const Vector3L& v) {
  return u.x * v.x + u.y * v.y + u.t * v.t;
}

inline double euclid_norm(const Vector3L& v) { return std::sqrt(euclid_dot(v, v)); }

/// Exact classification: spacelike for <v,v> > 0 or v = 0.
CausalCharacter causal_character(const Vector3L& v);

/// Lightlike when |<v,v>| <= tau * |v|^2 (Euclidean norm); v = 0 stays spacelike.
CausalCharacter causal_character(const Vector3L& v, double tau);

/// The unique w with <w, z> = det(u, v, z) for every z.
constexpr Vector3L lorentz_cross(const Vector3L& u, const Vector3L& v) {
  return {u.y * v.t - u.t * v.y, u.t * v.x - u.x * v.t, -(u.x * v.y - u.y * v.x)};
}

double det3(const Vector3L& u, const Vector3L& v, const Vector3L& w);

/// Row-major 3x3 matrix acting on (x, y, t) column vectors.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return {}; }
  static Mat3 from_rows(const Vector3L& r0, const Vector3L& r1, const Vector3L& r2) {
    return Mat3{{r0.x, r0.y, r0.t, r1.x, r1.y, r1.t, r2.x, r2.y, r2.t}};
  }

  double operator()(int i, int j) const { return m[static_cast<std::size_t>(3 * i + j)]; }
  double& operator()(int i, int j) { return m[static_cast<std::size_t>(3 * i + j)]; }

  Vector3L operator*(const Vector3L& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.t, m[3] * v.x + m[4] * v.y + m[5] * v.t,
            m[6] * v.x + m[7] * v.y + m[8] * v.t};
  }
  Mat3 operator*(const Mat3& o) const;
  Mat3 transposed() const;
};

/// Max-abs deviation of M^T diag(1,1,-1) M from diag(1,1,-1).
double lorentz_defect(const Mat3& m);

/// Affine isometry p -> linear * p + translation.
struct Isometry {
  Mat3 linear;
  Vector3L translation;

  Vector3L apply(const Vector3L& p) const { return linear * p + translation; }
  Vector3L apply_linear(const Vector3L& v) const { return linear * v; }
  Isometry then(const Isometry& next) const;
};

enum class AxisKind { TimelikeAxis, SpacelikeAxis, LightlikeAxis };

/// Identity-component isometries fixing span{e3}, span{e1} or span{e2 + e3}.
Isometry one_parameter_isometry(AxisKind kind, double theta);

/// Isometry mapping the line {p0 + s d} into {(0, t, t)} with A d a positive
/// multiple of (0, 1, 1) and A p0 = 0. Composed of a rotation about the t-axis
/// and, when d.t < 0, the reflection (x, y, t) -> (x, -y, -t).
Isometry null_normalizing_isometry(const Vector3L& d, const Vector3L& p0);

}  // namespace zmc
