#include "zmc/minkowski.hpp"

#include <algorithm>

#include "zmc/error.hpp"

namespace zmc {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::ZeroRadius: return "ZeroRadius";
    case ErrorCode::NotLightlike: return "NotLightlike";
    case ErrorCode::DegenerateDirection: return "DegenerateDirection";
    case ErrorCode::LightlikePoint: return "LightlikePoint";
    case ErrorCode::NoLightlikePart: return "NoLightlikePart";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NotALine: return "NotALine";
    case ErrorCode::DegenerateTransverse: return "DegenerateTransverse";
    case ErrorCode::NonMonotoneY: return "NonMonotoneY";
    case ErrorCode::Inconsistent: return "Inconsistent";
    case ErrorCode::NoClosedForm: return "NoClosedForm";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

std::string_view to_string(CausalCharacter c) {
  switch (c) {
    case CausalCharacter::Spacelike: return "spacelike";
    case CausalCharacter::Timelike: return "timelike";
    case CausalCharacter::Lightlike: return "lightlike";
  }
  return "unknown";
}

CausalCharacter causal_character(const Vector3L& v) {
  const double q = lorentz_dot(v, v);
  if (q > 0.0 || (v.x == 0.0 && v.y == 0.0 && v.t == 0.0)) return CausalCharacter::Spacelike;
  if (q < 0.0) return CausalCharacter::Timelike;
  return CausalCharacter::Lightlike;
}

CausalCharacter causal_character(const Vector3L& v, double tau) {
  const double n2 = euclid_dot(v, v);
  if (n2 == 0.0) return CausalCharacter::Spacelike;
  const double q = lorentz_dot(v, v);
  if (std::abs(q) <= tau * n2) return CausalCharacter::Lightlike;
  return q > 0.0 ? CausalCharacter::Spacelike : CausalCharacter::Timelike;
}

double det3(const Vector3L& u, const Vector3L& v, const Vector3L& w) {
  return u.x * (v.y * w.t - v.t * w.y) - u.y * (v.x * w.t - v.t * w.x) +
         u.t * (v.x * w.y - v.y * w.x);
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  return r;
}

Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
  return r;
}

double lorentz_defect(const Mat3& m) {
  static constexpr double g[3] = {1.0, 1.0, -1.0};
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += m(k, i) * g[k] * m(k, j);
      const double expect = (i == j) ? g[i] : 0.0;
      worst = std::max(worst, std::abs(s - expect));
    }
  return worst;
}

Isometry Isometry::then(const Isometry& next) const {
  return {next.linear * linear, next.linear * translation + next.translation};
}

Isometry one_parameter_isometry(AxisKind kind, double theta) {
  Isometry iso;
  switch (kind) {
    case AxisKind::TimelikeAxis: {
      const double c = std::cos(theta), s = std::sin(theta);
      iso.linear = Mat3{{c, -s, 0, s, c, 0, 0, 0, 1}};
      break;
    }
    case AxisKind::SpacelikeAxis: {
      const double ch = std::cosh(theta), sh = std::sinh(theta);
      iso.linear = Mat3{{1, 0, 0, 0, ch, sh, 0, sh, ch}};
      break;
    }
    case AxisKind::LightlikeAxis: {
      const double h = 0.5 * theta * theta;
      iso.linear = Mat3{{1, theta, -theta, -theta, 1 - h, h, -theta, -h, 1 + h}};
      break;
    }
  }
  return iso;
}

Isometry null_normalizing_isometry(const Vector3L& d, const Vector3L& p0) {
  const double n2 = euclid_dot(d, d);
  if (std::abs(lorentz_dot(d, d)) > 1e-10 * n2)
    throw Error(ErrorCode::NotLightlike, "direction is not lightlike");
  if (d.t == 0.0) throw Error(ErrorCode::DegenerateDirection, "direction has zero t-component");

  // Rotation about the t-axis sending (d.x, d.y) to (0, +rho) or (0, -rho).
  const double rho = std::hypot(d.x, d.y);
  const double sign = d.t > 0.0 ? 1.0 : -1.0;
  const double sn = sign * d.x / rho;
  const double cs = sign * d.y / rho;
  Mat3 lin{{cs, -sn, 0, sn, cs, 0, 0, 0, 1}};
  if (d.t < 0.0) lin = Mat3{{1, 0, 0, 0, -1, 0, 0, 0, -1}} * lin;

  Isometry iso;
  iso.linear = lin;
  iso.translation = -(lin * p0);
  return iso;
}

}  // namespace zmc
