#include "zmc/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "zmc/error.hpp"
#include "zmc/profile.hpp"

namespace zmc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBand = 1e-9;

const CausalSet kS{CausalCharacter::Spacelike};
const CausalSet kT{CausalCharacter::Timelike};
const CausalSet kSL{CausalCharacter::Spacelike, CausalCharacter::Lightlike};
const CausalSet kTL{CausalCharacter::Timelike, CausalCharacter::Lightlike};
const CausalSet kAll{CausalCharacter::Spacelike, CausalCharacter::Timelike, CausalCharacter::Lightlike};

bool near_eq(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)}); }

struct Prediction {
  CausalSet set;
  std::string clause;
  std::string notes;
};

Prediction predict_euclidean(const SurfaceFamily& f) {
  const auto& p = std::get<EuclideanGeneralParams>(f.params());
  const double a = p.a, b = p.b;
  const bool inner = f.active_component().bounded();
  if (near_eq(b, 2.0 * a)) return {kSL, "b = 2a", ""};
  if (b > 2.0 * a) return {kS, "b > 2a", ""};
  if (near_eq(b, -2.0 * a)) return inner ? Prediction{kTL, "b = -2a, bounded component", ""} : Prediction{kAll, "mixed", ""};
  if (b < -2.0 * a) return inner ? Prediction{kT, "b < -2a, bounded component", ""} : Prediction{kAll, "mixed", ""};
  return {kAll, "mixed", ""};
}

Prediction predict_hyperbola_ii(const SurfaceFamily& f) {
  const auto& hp = std::get<HyperbolaParams>(f.params());
  const double a = hp.a, b = hp.b, d = hp.delta;
  const bool outer = !f.active_component().bounded();
  double c2 = b * b - a * a;
  if (std::abs(c2) <= 1e-12 * std::max(a * a, b * b)) c2 = 0.0;
  if (near_eq(a, b)) {
    if (a > 0.0 && (d <= 0.0 || near_eq(d, 0.0))) return {kT, "a = b > 0, delta <= 0", ""};
    return {kAll, "mixed", ""};
  }
  if (c2 < 0.0) return {kAll, "mixed", ""};
  const double c = std::sqrt(c2);
  if (a < b) {
    if (std::abs(d) < c && !near_eq(std::abs(d), c)) return {kT, "a < b, timelike", ""};
    if (c <= -d || near_eq(c, -d)) return {kT, "a < b, timelike", ""};
    if (c > 0.0 && near_eq(c, d))
      return outer ? Prediction{kT, "a < b, timelike", ""} : Prediction{kTL, "a < b, delta = c, bounded component", ""};
    if (c > 0.0 && c < d) return outer ? Prediction{kT, "a < b, timelike", ""} : Prediction{kAll, "mixed", ""};
    return {kAll, "mixed", ""};
  }
  // a > b
  if (c > 0.0 && near_eq(c, d))
    return outer ? Prediction{kTL, "a > b, delta = c, unbounded component", ""} : Prediction{kAll, "mixed", ""};
  if (c > 0.0 && c < d)
    return outer ? Prediction{kT, "a > b, c < delta, unbounded component", ""} : Prediction{kAll, "mixed", ""};
  return {kAll, "mixed", ""};
}

Prediction predict_parabola(const ParabolaTriple& t, bool entire) {
  const double p = t.p;
  const bool pz = p == 0.0;
  switch (t.kase) {
    case ParabolaCase::GenZero:
      return {kAll, "a = 0", "EG - F^2 is linear in v with slope -4b/r, so the character changes"};
    case ParabolaCase::GenPos: {
      const std::string n =
          "for a > 0 the sign of EG - F^2 follows the discriminant -2ap cos^2, so the surface is "
          "spacelike iff p > 0";
      if (pz) return {kSL, "a > 0, p = 0", n};
      return p > 0.0 ? Prediction{kS, "a > 0, p > 0", n} : Prediction{kAll, "a > 0, p < 0", n};
    }
    case ParabolaCase::GenNeg:
      if (pz) return {kTL, "a < 0, p = 0", ""};
      return p < 0.0 ? Prediction{kT, "a < 0, p < 0", ""} : Prediction{kAll, "a < 0, p > 0", ""};
    case ParabolaCase::Singular:
      if (pz) return {kTL, "singular, p = 0", ""};
      if (p > 0.0) return {kT, "singular, p > 0", ""};
      return {kAll, entire ? "entire graph" : "singular, p < 0", ""};
  }
  return {kAll, "", ""};
}

Prediction predict(const SurfaceFamily& f) {
  switch (f.kind()) {
    case FamilyKind::EuclideanGeneral: return predict_euclidean(f);
    case FamilyKind::EuclideanSingular: return {kTL, "singular", ""};
    case FamilyKind::HyperbolaGeneral:
      if (std::get<HyperbolaParams>(f.params()).variant == HyperbolaVariant::TypeI) return {kT, "type I", ""};
      return predict_hyperbola_ii(f);
    case FamilyKind::HyperbolaSingular:
      if (std::get<HyperbolaSingularParams>(f.params()).variant == HyperbolaVariant::TypeI)
        return {kT, "singular type I", ""};
      return {kTL, "singular type II", ""};
    case FamilyKind::Parabola: return predict_parabola(std::get<ParabolaTriple>(f.params()), false);
    case FamilyKind::EntireGraph:
      return predict_parabola(as_parabola(std::get<EntireGraphParams>(f.params())), true);
  }
  return {};
}

}  // namespace

const char* to_string(LocusKind k) {
  switch (k) {
    case LocusKind::StraightLine: return "line";
    case LocusKind::NullCurve: return "null_curve";
    case LocusKind::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

std::string to_json_name(CausalCharacter c) { return std::string(to_string(c)); }

double band_threshold(const Vector3L& X1, const Vector3L& X2) {
  return kBand * std::max(1.0, euclid_dot(X1, X1) * euclid_dot(X2, X2));
}

double metric_det(const SurfaceFamily& f, double p1, double p2, double* band) {
  const Partials P = partials(f, p1, p2, 1);
  const double E = lorentz_dot(P.X1, P.X1), F = lorentz_dot(P.X1, P.X2), G = lorentz_dot(P.X2, P.X2);
  if (band) *band = band_threshold(P.X1, P.X2);
  return E * G - F * F;
}

FundamentalForms fundamental_forms(const SurfaceFamily& f, double p1, double p2) {
  const Partials P = partials(f, p1, p2, 2);
  FundamentalForms ff;
  ff.E = lorentz_dot(P.X1, P.X1);
  ff.F = lorentz_dot(P.X1, P.X2);
  ff.G = lorentz_dot(P.X2, P.X2);
  ff.det = ff.E * ff.G - ff.F * ff.F;
  ff.band = band_threshold(P.X1, P.X2);
  const Vector3L n = lorentz_cross(P.X1, P.X2);
  if (std::abs(ff.det) <= ff.band) {
    ff.epsilon = 0;
    ff.normal = n;
  } else {
    ff.epsilon = ff.det > 0.0 ? 1 : -1;
    ff.normal = n / std::sqrt(std::abs(ff.det));
  }
  ff.L = lorentz_dot(P.X11, ff.normal);
  ff.M = lorentz_dot(P.X12, ff.normal);
  ff.N = lorentz_dot(P.X22, ff.normal);
  return ff;
}

double mean_curvature_residual(const SurfaceFamily& f, double p1, double p2) {
  const FundamentalForms ff = fundamental_forms(f, p1, p2);
  if (ff.epsilon == 0) throw Error(ErrorCode::LightlikePoint, "mean curvature is undefined on the lightlike band");
  return std::abs(ff.E * ff.N - 2.0 * ff.F * ff.M + ff.G * ff.L) / (std::abs(ff.det) + 1.0);
}

ClassReport predict_class(const SurfaceFamily& f) {
  const Prediction p = predict(f);
  ClassReport rep;
  rep.predicted = p.set;
  rep.notes = "case: " + p.clause;
  if (!p.notes.empty()) rep.notes += "; " + p.notes;
  return rep;
}

// ---------------------------------------------------------------------------
// Loci

double straightness_residual(const LightlikeLocus& locus) {
  const auto& pts = locus.param_curve;
  if (pts.size() < 3) throw Error(ErrorCode::TooFewSamples, "straightness needs at least 3 samples");
  const Vector3L p0 = pts.front().X;
  const Vector3L chord = pts.back().X - p0;
  const double len = euclid_norm(chord);
  if (len == 0.0) return std::numeric_limits<double>::infinity();
  const Vector3L u = chord / len;
  double worst = 0.0;
  for (const auto& q : pts) {
    const Vector3L d = q.X - p0;
    const Vector3L perp = d - u * euclid_dot(d, u);
    worst = std::max(worst, euclid_norm(perp));
  }
  return worst / len;
}

void finalize_locus(LightlikeLocus& locus) {
  const Vector3L chord = locus.param_curve.back().X - locus.param_curve.front().X;
  const double len = euclid_norm(chord);
  Vector3L dir = len > 0.0 ? chord / len : Vector3L{};
  if (dir.t < 0.0 || (dir.t == 0.0 && dir.x < 0.0)) dir = -dir;
  locus.direction = dir;
  locus.straightness_residual = straightness_residual(locus);
  if (locus.straightness_residual < 1e-8)
    locus.kind = LocusKind::StraightLine;
  else if (locus.straightness_residual > 1e-4)
    locus.kind = LocusKind::NullCurve;
  else
    locus.kind = LocusKind::Indeterminate;
}

namespace {

template <class P2>
LightlikeLocus sample_locus(const SurfaceFamily& f, const std::vector<double>& w, P2 p2_of,
                            const std::string& label) {
  LightlikeLocus loc;
  loc.label = label;
  for (const double p1 : w) {
    const double p2 = p2_of(p1);
    loc.param_curve.push_back({p1, p2, evaluate(f, p1, p2)});
  }
  finalize_locus(loc);
  return loc;
}

}  // namespace

std::vector<LightlikeLocus> lightlike_locus_analytic(const SurfaceFamily& f, const std::vector<double>& w) {
  const Prediction pr = predict(f);
  if (!pr.set.count(CausalCharacter::Lightlike) && f.kind() != FamilyKind::EntireGraph &&
      !(f.kind() == FamilyKind::EuclideanGeneral && pr.clause == "mixed"))
    throw Error(ErrorCode::NoLightlikePart, "the surface has no lightlike part");
  std::vector<LightlikeLocus> out;
  auto constant = [](double v) { return [v](double) { return v; }; };
  switch (f.kind()) {
    case FamilyKind::EuclideanGeneral: {
      const auto& p = std::get<EuclideanGeneralParams>(f.params());
      if (pr.clause == "b = 2a") {
        out.push_back(sample_locus(f, w, constant(kPi), "theta=pi"));
      } else if (pr.clause == "b = -2a, bounded component") {
        out.push_back(sample_locus(f, w, constant(0.0), "theta=0"));
      } else if (near_eq(p.b, -2.0 * p.a)) {
        const double a = p.a;
        out.push_back(sample_locus(f, w, constant(kPi), "theta=pi"));
        auto th = [a](double r) {
          const double c = std::clamp((2.0 - a * r * r) / (a * r * r), -1.0, 1.0);
          return std::acos(c);
        };
        out.push_back(sample_locus(f, w, th, "eta=0 (+)"));
        out.push_back(sample_locus(f, w, [th](double r) { return 2.0 * kPi - th(r); }, "eta=0 (-)"));
      }
      break;
    }
    case FamilyKind::EuclideanSingular:
      out.push_back(sample_locus(f, w, constant(kPi), "theta=pi"));
      out.push_back(sample_locus(f, w, constant(0.0), "theta=0"));
      break;
    case FamilyKind::HyperbolaGeneral: {
      const auto& hp = std::get<HyperbolaParams>(f.params());
      if (pr.clause == "a < b, delta = c, bounded component")
        out.push_back(sample_locus(f, w, constant(std::log(hp.c / (hp.b - hp.a))), "theta=theta1"));
      else if (pr.clause == "a > b, delta = c, unbounded component")
        out.push_back(sample_locus(f, w, constant(std::log(hp.c / (hp.a - hp.b))), "theta=theta2"));
      break;
    }
    case FamilyKind::HyperbolaSingular: {
      const auto& hp = std::get<HyperbolaSingularParams>(f.params());
      out.push_back(
          sample_locus(f, w, constant(0.5 * std::log((hp.a + hp.b) / (hp.b - hp.a))), "theta=theta0"));
      break;
    }
    case FamilyKind::Parabola: {
      const auto& t = std::get<ParabolaTriple>(f.params());
      if (t.p == 0.0 && t.a != 0.0) {
        auto v = [t](double u) { return t.b / (t.a * parabola_jet(t, u).r); };
        out.push_back(sample_locus(f, w, v, "v=b/(a r(u))"));
      }
      break;
    }
    case FamilyKind::EntireGraph: {
      const auto& g = std::get<EntireGraphParams>(f.params());
      const double k = std::sqrt(-2.0 * g.a);
      auto vplus = [g, k](double u) { return std::sqrt(-8.0 * g.p * std::exp(-2.0 * k * u) / k); };
      out.push_back(sample_locus(f, w, vplus, "c+"));
      out.push_back(sample_locus(f, w, [vplus](double u) { return -vplus(u); }, "c-"));
      break;
    }
  }
  return out;
}

std::vector<LightlikeLocus> lightlike_locus_analytic(const SurfaceFamily& f, const Window& w) {
  std::vector<double> p1(static_cast<std::size_t>(std::max(w.n, 0)));
  for (int i = 0; i < w.n; ++i) p1[static_cast<std::size_t>(i)] = w.at(i);
  return lightlike_locus_analytic(f, p1);
}

std::vector<LightlikeLocus> lightlike_locus_analytic(const SurfaceFamily& f) {
  Window w = default_window(f).p1;
  w.n = 41;
  return lightlike_locus_analytic(f, w);
}

// ---------------------------------------------------------------------------
// Rotational test under null rotations

RotationalResult rotational_check(const ParabolaTriple& t, int samples) {
  if (samples < 2) throw Error(ErrorCode::TooFewSamples, "rotational_check needs at least 2 samples per axis");
  double ulo = -1.0, uhi = 1.0;
  switch (t.kase) {
    case ParabolaCase::GenZero:
      ulo = 0.5 * t.c - 2.0;
      uhi = 0.5 * t.c - 0.1;
      break;
    case ParabolaCase::GenNeg:
      ulo = t.c - 2.0;
      uhi = t.c - 0.1;
      break;
    case ParabolaCase::GenPos: {
      const double w = kPi / (2.0 * std::sqrt(2.0 * t.a));
      ulo = -t.c + 0.1 * w;
      uhi = -t.c + 0.9 * w;
      break;
    }
    case ParabolaCase::Singular: break;
  }
  const Window wu{ulo, uhi, samples}, wv{-2.0, 2.0, samples}, wt{-1.0, 1.0, samples};
  auto X = [&](double u, double v) {
    const ParabolaJet j = parabola_jet(t, u);
    const double q = 0.5 * j.r * v * v;
    return Vector3L{j.f + v, j.g + u + q, j.g - u + q};
  };
  RotationalResult res;
  for (int k = 0; k < samples; ++k) {
    const Isometry A = one_parameter_isometry(AxisKind::LightlikeAxis, wt.at(k));
    for (int i = 0; i < samples; ++i)
      for (int j = 0; j < samples; ++j) {
        const Vector3L P = A.apply(X(wu.at(i), wv.at(j)));
        const double u = 0.5 * (P.y - P.t);  // the null rotation preserves y - t
        const double v = P.x - parabola_jet(t, u).f;
        const Vector3L Q = X(u, v);
        res.max_deviation = std::max(res.max_deviation, euclid_norm(P - Q));
      }
  }
  res.rotational = res.max_deviation < 1e-8;
  return res;
}

}  // namespace zmc
