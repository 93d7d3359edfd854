#include "zmc/characteristic.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>

#include "zmc/error.hpp"

namespace zmc {

namespace {

constexpr double kConstSpread = 1e-6;
constexpr double kMuZero = 1e-6;

// Derivative weights at nodes[i] of the Lagrange interpolant through all nodes.
std::array<double, 5> derivative_weights(const std::array<double, 5>& x, int i) {
  std::array<double, 5> w{};
  for (int j = 0; j < 5; ++j) {
    if (j == i) {
      for (int k = 0; k < 5; ++k)
        if (k != i) w[static_cast<std::size_t>(i)] += 1.0 / (x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(k)]);
      continue;
    }
    double num = 1.0, den = 1.0;
    for (int k = 0; k < 5; ++k) {
      if (k == j) continue;
      den *= x[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(k)];
      if (k != i) num *= x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(k)];
    }
    w[static_cast<std::size_t>(j)] = num / den;
  }
  return w;
}

double median(std::vector<double> v) {
  const std::size_t m = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
  const double hi = v[m];
  if (v.size() % 2) return hi;
  return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m)));
}

const LightlikeLocus& pick_line(const std::vector<LightlikeLocus>& loci) {
  if (loci.empty()) throw Error(ErrorCode::NoLightlikePart, "no closed-form lightlike locus for these parameters");
  for (const auto& l : loci)
    if (l.kind == LocusKind::StraightLine) return l;
  throw Error(ErrorCode::NotALine, "the lightlike locus is not a straight line");
}

}  // namespace

const char* to_string(AlphaType t) {
  switch (t) {
    case AlphaType::AlphaPlus: return "alpha_plus";
    case AlphaType::Alpha0I: return "alpha0_I";
    case AlphaType::Alpha0II: return "alpha0_II";
    case AlphaType::AlphaMinusI: return "alpha_minus_I";
    case AlphaType::AlphaMinusII: return "alpha_minus_II";
    case AlphaType::AlphaMinusIII: return "alpha_minus_III";
  }
  return "?";
}

std::vector<AlphaSample> alpha_along_line(const SurfaceFamily& f, const LightlikeLocus& locus, int n) {
  if (locus.kind != LocusKind::StraightLine) throw Error(ErrorCode::NotALine, "locus is not a straight line");
  if (locus.param_curve.empty() || !(std::abs(locus.direction.t) > 0.0))
    throw Error(ErrorCode::NotALine, "locus has no lightlike direction");
  const Isometry A = null_normalizing_isometry(locus.direction, locus.param_curve.front().X);

  const std::size_t m = locus.param_curve.size();
  std::vector<std::size_t> idx;
  if (n <= 0 || static_cast<std::size_t>(n) >= m) {
    for (std::size_t i = 0; i < m; ++i) idx.push_back(i);
  } else if (n == 1) {
    idx.push_back(0);
  } else {
    for (int i = 0; i < n; ++i)
      idx.push_back(static_cast<std::size_t>(std::llround(static_cast<double>(i) * (m - 1) / (n - 1))));
  }

  std::vector<AlphaSample> out;
  for (std::size_t i : idx) {
    const LocusPoint& q = locus.param_curve[i];
    const Partials P = partials(f, q.p1, q.p2);
    const Vector3L X2 = A.apply_linear(P.X2);
    const Vector3L X22 = A.apply_linear(P.X22);
    if (X2.x == 0.0) continue;
    const double y = A.apply(q.X).y;
    out.push_back({y, (X22.t - X22.y) / (X2.x * X2.x)});
  }
  if (out.empty()) throw Error(ErrorCode::DegenerateTransverse, "x_2 vanishes at every locus sample");
  return out;
}

MuEstimate mu_from_alpha(std::vector<AlphaSample> s) {
  if (s.size() < 5) throw Error(ErrorCode::TooFewSamples, "mu_from_alpha needs at least 5 samples");
  if (s.back().y < s.front().y) std::reverse(s.begin(), s.end());
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i].y > s[i - 1].y)) throw Error(ErrorCode::NonMonotoneY, "y is not strictly monotone along the locus");

  std::vector<double> mus;
  mus.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    // Centred stencil where possible, shifted inward at the two ends.
    const std::size_t lo = std::min(i < 2 ? 0 : i - 2, s.size() - 5);
    std::array<double, 5> x{};
    for (std::size_t k = 0; k < 5; ++k) x[k] = s[lo + k].y;
    const auto w = derivative_weights(x, static_cast<int>(i - lo));
    double d = 0.0;
    for (std::size_t k = 0; k < 5; ++k) d += w[k] * s[lo + k].alpha;
    mus.push_back(-(d + s[i].alpha * s[i].alpha));
  }
  // One-sided end stencils are markedly less accurate; keep them out of the estimate.
  std::vector<double> inner(mus.begin() + 2, mus.end() - 2);
  if (inner.empty()) inner = mus;
  MuEstimate e;
  e.mu = median(inner);
  for (double m : inner) e.constancy_residual = std::max(e.constancy_residual, std::abs(m - e.mu));
  return e;
}

AlphaType classify_alpha_type(const std::vector<AlphaSample>& s, double mu) {
  if (s.empty()) throw Error(ErrorCode::TooFewSamples, "no alpha samples");
  double lo = s.front().alpha, hi = lo, amax = 0.0;
  for (const auto& q : s) {
    lo = std::min(lo, q.alpha);
    hi = std::max(hi, q.alpha);
    amax = std::max(amax, std::abs(q.alpha));
  }
  if (hi - lo < kConstSpread) {
    if (amax < kConstSpread) return AlphaType::Alpha0I;
    if (mu < 0.0) return AlphaType::AlphaMinusIII;
    throw Error(ErrorCode::Inconsistent, "constant nonzero alpha requires mu < 0");
  }
  if (mu > kMuZero) return AlphaType::AlphaPlus;
  if (mu >= -kMuZero) return AlphaType::Alpha0II;
  return amax < std::sqrt(-mu) * (1.0 - 1e-6) ? AlphaType::AlphaMinusI : AlphaType::AlphaMinusII;
}

double closed_form_fit(const std::vector<AlphaSample>& s, double mu, AlphaType type) {
  if (s.empty()) throw Error(ErrorCode::TooFewSamples, "no alpha samples");
  const double k = std::sqrt(std::abs(mu));
  const AlphaSample mid = s[s.size() / 2];
  std::function<double(double)> model;
  switch (type) {
    case AlphaType::Alpha0I: model = [](double) { return 0.0; }; break;
    case AlphaType::AlphaMinusIII: {
      const double v = std::copysign(k, mid.alpha);
      model = [v](double) { return v; };
      break;
    }
    case AlphaType::Alpha0II: {
      const double c = 1.0 / mid.alpha - mid.y;
      model = [c](double y) { return 1.0 / (y + c); };
      break;
    }
    case AlphaType::AlphaPlus: {
      const double z = std::atan(-mid.alpha / k);
      model = [=](double y) { return -k * std::tan(z + k * (y - mid.y)); };
      break;
    }
    case AlphaType::AlphaMinusI: {
      const double z = std::atanh(std::clamp(mid.alpha / k, -1.0, 1.0));
      model = [=](double y) { return k * std::tanh(z + k * (y - mid.y)); };
      break;
    }
    case AlphaType::AlphaMinusII: {
      const double z = std::atanh(std::clamp(k / mid.alpha, -1.0, 1.0));
      model = [=](double y) { return k / std::tanh(z + k * (y - mid.y)); };
      break;
    }
  }
  double dev = 0.0;
  for (const auto& q : s) dev = std::max(dev, std::abs(q.alpha - model(q.y)));
  return dev;
}

Window characteristic_window(const SurfaceFamily& f, int n) {
  const Interval comp = f.active_component();
  switch (f.kind()) {
    case FamilyKind::EuclideanGeneral:
    case FamilyKind::HyperbolaGeneral: {
      // Radial charts: stay clear of r = 0 and of the double root where alpha
      // or y degenerate, while keeping an appreciable y-range.
      if (comp.bounded()) {
        if (comp.lo < 0.0 && comp.hi > 0.0) return {0.2 * comp.hi, 0.9 * comp.hi, n};
        const double L = comp.hi - comp.lo;
        return {comp.lo + 0.2 * L, comp.lo + 0.9 * L, n};
      }
      if (std::isfinite(comp.lo) && comp.lo > 0.0) return {1.1 * comp.lo, 5.0 * comp.lo, n};
      if (std::isfinite(comp.hi) && comp.hi < 0.0) return {5.0 * comp.hi, 1.1 * comp.hi, n};
      double s = 1.0;
      if (f.kind() == FamilyKind::EuclideanGeneral)
        s = 1.0 / std::sqrt(std::get<EuclideanGeneralParams>(f.params()).a);
      return {0.3 * s, 10.0 * s, n};
    }
    case FamilyKind::Parabola: {
      const auto& t = std::get<ParabolaTriple>(f.params());
      if (t.kase == ParabolaCase::GenPos) {
        const double L = comp.hi - comp.lo;
        return {comp.lo + 0.05 * L, comp.hi - 0.2 * L, n};
      }
      if (t.kase == ParabolaCase::GenNeg || t.kase == ParabolaCase::GenZero) {
        const double k = std::sqrt(std::max(std::abs(2.0 * t.a), 1e-12));
        return {comp.hi - 2.5 / k, comp.hi - 0.05 / k, n};
      }
      return {-2.0, 2.0, n};
    }
    default: return {-2.0, 2.0, n};
  }
}

CharacteristicReport characteristic(const SurfaceFamily& f, const LightlikeLocus& line, int n) {
  CharacteristicReport rep;
  rep.locus_label = line.label;
  rep.samples = alpha_along_line(f, line, n);
  const MuEstimate e = mu_from_alpha(rep.samples);
  rep.mu = e.mu;
  rep.mu_constancy_residual = e.constancy_residual;
  rep.alpha_type = classify_alpha_type(rep.samples, rep.mu);
  rep.closed_form_fit_residual = closed_form_fit(rep.samples, rep.mu, rep.alpha_type);
  return rep;
}

CharacteristicReport characteristic(const SurfaceFamily& f, int n) {
  return characteristic(f, characteristic_window(f, 4 * n), n);
}

CharacteristicReport characteristic(const SurfaceFamily& f, const Window& w, int n) {
  if (n < 5) throw Error(ErrorCode::TooFewSamples, "characteristic needs at least 5 samples");
  if (w.n < 5) throw Error(ErrorCode::TooFewSamples, "search window needs at least 5 points");
  const auto coarse = lightlike_locus_analytic(f, w);
  const LightlikeLocus& coarse_line = pick_line(coarse);

  // Resample so the points are close to evenly spaced in y; alpha varies fast
  // where y does not, and the five-point stencil wants a smooth, even grid.
  const Isometry A = null_normalizing_isometry(coarse_line.direction, coarse_line.param_curve.front().X);
  std::vector<double> p1, y;
  for (const auto& q : coarse_line.param_curve) {
    p1.push_back(q.p1);
    y.push_back(A.apply(q.X).y);
  }
  if (y.back() < y.front()) {
    std::reverse(p1.begin(), p1.end());
    std::reverse(y.begin(), y.end());
  }
  for (std::size_t i = 1; i < y.size(); ++i)
    if (!(y[i] > y[i - 1])) throw Error(ErrorCode::NonMonotoneY, "y is not strictly monotone along the locus");
  std::vector<double> warped;
  for (int i = 0; i < n; ++i) {
    const double target = y.front() + (y.back() - y.front()) * i / (n - 1);
    const auto it = std::lower_bound(y.begin(), y.end(), target);
    const std::size_t j = std::clamp<std::size_t>(static_cast<std::size_t>(it - y.begin()), 1, y.size() - 1);
    const double s = (target - y[j - 1]) / (y[j] - y[j - 1]);
    warped.push_back(p1[j - 1] + s * (p1[j] - p1[j - 1]));
  }
  std::vector<LightlikeLocus> loci = lightlike_locus_analytic(f, warped);
  for (auto& l : loci)
    if (l.label == coarse_line.label) {
      // The warped sample is the same line; keep the coarse chord so the
      // normalizing frame is identical.
      l.kind = LocusKind::StraightLine;
      l.direction = coarse_line.direction;
      return characteristic(f, l, n);
    }
  throw Error(ErrorCode::NotALine, "lightlike line lost on resampling");
}

}  // namespace zmc
