#pragma once

#include <set>
#include <string>
#include <vector>

#include "zmc/families.hpp"

namespace zmc {

struct FundamentalForms {
  double E = 0, F = 0, G = 0;
  double L = 0, M = 0, N = 0;
  Vector3L normal;
  int epsilon = 0;  // +1 spacelike, -1 timelike, 0 lightlike band
  double det = 0;   // EG - F^2
  double band = 0;  // lightlike band threshold at this point
};

enum class LocusKind { StraightLine, NullCurve, Indeterminate };

const char* to_string(LocusKind k);

struct LocusPoint {
  double p1 = 0, p2 = 0;
  Vector3L X;
};

struct LightlikeLocus {
  LocusKind kind = LocusKind::StraightLine;
  std::vector<LocusPoint> param_curve;
  Vector3L direction;  // chord direction oriented with t >= 0
  double straightness_residual = 0;
  std::string label;
};

using CausalSet = std::set<CausalCharacter>;

struct ClassReport {
  CausalSet predicted;
  CausalSet sampled;
  std::vector<LightlikeLocus> lightlike_loci;
  bool agreement = false;
  std::string notes;
};

/// Scale-aware band |EG - F^2| <= 1e-9 max(1, |X1|^2 |X2|^2), Euclidean norms.
double band_threshold(const Vector3L& X1, const Vector3L& X2);

/// EG - F^2 from the analytic first partials.
double metric_det(const SurfaceFamily& f, double p1, double p2, double* band = nullptr);

FundamentalForms fundamental_forms(const SurfaceFamily& f, double p1, double p2);

/// |EN - 2FM + GL| / (|EG - F^2| + 1); throws LightlikePoint inside the band.
double mean_curvature_residual(const SurfaceFamily& f, double p1, double p2);

/// Closed-form causal-character set of the surface on its chart (predicted side).
ClassReport predict_class(const SurfaceFamily& f);

/// Zeros of EG - F^2 found along one grid row.
struct RowZero {
  double p2 = 0;
  bool tangency = false;  // EG - F^2 touches zero without changing sign
};

struct RowScan {
  std::vector<int> signs;  // +1, -1, 0 per grid vertex
  std::vector<RowZero> zeros;
};

/// Sign scan of EG - F^2 along p2 at fixed p1, with sign changes refined by
/// bisection and tangential zeros refined on the derivative.
RowScan scan_row(const SurfaceFamily& f, double p1, const Window& p2);

/// Grid classification plus lightlike-locus extraction; `predicted` and
/// `agreement` are filled from predict_class.
ClassReport sample_class(const SurfaceFamily& f, const ParamWindow& grid, int threads = 1);

/// Closed-form lightlike loci sampled at n points of the p1 window.
std::vector<LightlikeLocus> lightlike_locus_analytic(const SurfaceFamily& f, const Window& p1);
std::vector<LightlikeLocus> lightlike_locus_analytic(const SurfaceFamily& f, const std::vector<double>& p1);
std::vector<LightlikeLocus> lightlike_locus_analytic(const SurfaceFamily& f);

double straightness_residual(const LightlikeLocus& locus);

/// Fills direction, residual and kind from the sampled curve.
void finalize_locus(LightlikeLocus& locus);

struct RotationalResult {
  bool rotational = false;
  double max_deviation = 0;
};

/// Applies null rotations about span{e2 + e3} to sampled surface points and
/// measures the distance back to the surface.
RotationalResult rotational_check(const ParabolaTriple& t, int samples);

std::string to_json_name(CausalCharacter c);

}  // namespace zmc
