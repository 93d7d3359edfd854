#include "zmc/families.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "zmc/error.hpp"
#include "zmc/profile.hpp"

namespace zmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidParams, msg); }

[[noreturn]] void out_of_domain(const char* what, double v) {
  std::ostringstream os;
  os << what << " = " << v << " is outside the maximal domain";
  throw Error(ErrorCode::OutOfDomain, os.str());
}

void require_finite(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) invalid("parameters must be finite");
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

bool Interval::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

namespace detail {

// Factored through the roots in x = s^2 so Delta^2 keeps full relative
// accuracy next to a root.
double ProfileData::delta2(double s) const {
  const double x = s * s;
  if (xroots.empty()) return (A * x + B) * x + C;
  double v = A != 0.0 ? A : B;
  for (std::size_t i = 0; i < xroots.size(); ++i)
    for (int m = 0; m < xmult[i]; ++m) v *= x - xroots[i];
  return v;
}

double ProfileData::delta(double s) const { return std::sqrt(delta2(s)); }

double ProfileData::ddelta(double s) const {
  return (4.0 * A * s * s * s + 2.0 * B * s) / (2.0 * delta(s));
}

ProfileData ProfileData::build(double A, double B, double C, double a, double b) {
  ProfileData pd;
  pd.A = A;
  pd.B = B;
  pd.C = C;
  pd.a = a;
  pd.b = b;

  if (A != 0.0) {
    const double disc = B * B - 4.0 * A * C;
    if (std::abs(disc) <= 1e-12 * std::max(B * B, std::abs(4.0 * A * C))) {
      pd.xroots = {-B / (2.0 * A)};
      pd.xmult = {2};
    } else if (disc > 0.0) {
      const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B == 0.0 ? 1.0 : B));
      double x1 = q / A, x2 = C / q;
      if (x1 > x2) std::swap(x1, x2);
      pd.xroots = {x1, x2};
      pd.xmult = {1, 1};
    }
  } else if (B != 0.0) {
    pd.xroots = {-C / B};
    pd.xmult = {1};
  }

  std::vector<double> edges{-kInf};
  std::vector<double> pos;
  for (double x : pd.xroots)
    if (x > 0.0) pos.push_back(std::sqrt(x));
  std::sort(pos.begin(), pos.end());
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) edges.push_back(-*it);
  for (double s : pos) edges.push_back(s);
  edges.push_back(kInf);

  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double l = edges[i], h = edges[i + 1];
    double probe;
    if (std::isfinite(l) && std::isfinite(h))
      probe = 0.5 * (l + h);
    else if (std::isfinite(l))
      probe = l + 1.0;
    else if (std::isfinite(h))
      probe = h - 1.0;
    else
      probe = 0.0;
    if (pd.delta2(probe) > 0.0) pd.components.push_back(Interval{l, h, false, false});
  }
  return pd;
}

namespace {

int multiplicity_at(const ProfileData& pd, double s) {
  for (std::size_t i = 0; i < pd.xroots.size(); ++i)
    if (pd.xroots[i] > 0.0 && std::abs(std::sqrt(pd.xroots[i]) - std::abs(s)) <= 1e-14 * std::abs(s))
      return pd.xmult[i];
  return 0;
}

// |Delta^2 / d| near the root rho of Delta^2, with d = s - rho supplied exactly
// so the vanishing factor s^2 - rho^2 = d (d + 2 rho) never cancels.
double near_root_factor(const ProfileData& pd, double rho, double d, double s) {
  const double xr = rho * rho;
  double other = 1.0;
  double K = pd.B;
  if (pd.A != 0.0) {
    K = pd.A;
    double xo = pd.xroots[0];
    if (pd.xroots.size() == 2 && std::abs(pd.xroots[0] - xr) < std::abs(pd.xroots[1] - xr))
      xo = pd.xroots[1];
    other = s * s - xo;
  }
  return std::abs(K * (d + 2.0 * rho) * other);
}

}  // namespace

Vec3 ProfileData::segment(double s1, double s2, double tol) const {
  if (s1 == s2) return {0.0, 0.0, 0.0};
  if (s1 > s2) {
    Vec3 v = segment(s2, s1, tol);
    return {-v[0], -v[1], -v[2]};
  }
  const Interval& comp = components[static_cast<std::size_t>(active)];
  const double L = comp.lo, H = comp.hi;
  const double kappa = comp.bounded() ? 0.5 * (H - L) : 1.0;
  const double zl = lo_simple ? L + kappa : -kInf;
  const double zh = hi_simple ? H - kappa : kInf;

  Vec3 total{0.0, 0.0, 0.0};
  auto add = [&](const QuadResult& q) {
    if (!q.converged)
      throw Error(ErrorCode::QuadratureFailure, "profile quadrature did not reach tolerance");
    for (int k = 0; k < 3; ++k) total[k] += q.value[k];
  };
  const double abs_tol = 1e-15;

  if (s1 < zl) {
    const double hi = std::min(s2, zl);
    auto g = [&](double w) -> Vec3 {
      const double d = w * w;
      const double s = L + d;
      const double root = std::sqrt(near_root_factor(*this, L, d, s));
      return {2.0 / root, 2.0 * s * s / root, 0.0};
    };
    add(integrate_gk15(g, std::sqrt(s1 - L), std::sqrt(hi - L), tol, abs_tol));
  }
  {
    const double lo = std::max(s1, zl), hi = std::min(s2, zh);
    if (lo < hi) {
      auto g = [&](double s) -> Vec3 {
        const double dl = delta(s);
        return {1.0 / dl, s * s / dl, 0.0};
      };
      add(integrate_gk15(g, lo, hi, tol, abs_tol));
    }
  }
  if (s2 > zh) {
    const double lo = std::max(s1, zh);
    auto g = [&](double w) -> Vec3 {
      const double d = -w * w;
      const double s = H + d;
      const double root = std::sqrt(near_root_factor(*this, H, d, s));
      return {2.0 / root, 2.0 * s * s / root, 0.0};
    };
    add(integrate_gk15(g, std::sqrt(H - s2), std::sqrt(H - lo), tol, abs_tol));
  }
  return total;
}

Vec3 ProfileData::cumulative_at(double s, double tol) const {
  if (s == r0) return {0.0, 0.0, 0.0};
  auto it = std::lower_bound(checkpoints.begin(), checkpoints.end(), s);
  std::size_t j;
  if (it == checkpoints.end())
    j = checkpoints.size() - 1;
  else if (it == checkpoints.begin())
    j = 0;
  else {
    const std::size_t hi = static_cast<std::size_t>(it - checkpoints.begin());
    j = (s - checkpoints[hi - 1] <= checkpoints[hi] - s) ? hi - 1 : hi;
  }
  Vec3 base = cumulative[j];
  Vec3 rest = segment(checkpoints[j], s, tol);
  return {base[0] + rest[0], base[1] + rest[1], 0.0};
}

void ProfileData::activate(double r0_in) {
  active = -1;
  for (std::size_t i = 0; i < components.size(); ++i)
    if (components[i].contains(r0_in)) active = static_cast<int>(i);
  if (active < 0) invalid("base point r0 = " + num(r0_in) + " is not inside a component of {Delta > 0}");
  r0 = r0_in;
  const Interval& comp = components[static_cast<std::size_t>(active)];
  lo_simple = std::isfinite(comp.lo) && multiplicity_at(*this, comp.lo) == 1;
  hi_simple = std::isfinite(comp.hi) && multiplicity_at(*this, comp.hi) == 1;

  constexpr int kSegments = 64;
  double lo = std::max(comp.lo, r0 - 20.0);
  double hi = std::min(comp.hi, r0 + 20.0);
  const double step = (hi - lo) / kSegments;
  if (lo == comp.lo) lo += 0.5 * step;
  if (hi == comp.hi) hi -= 0.5 * step;
  checkpoints.clear();
  for (int i = 0; i <= kSegments; ++i) checkpoints.push_back(lo + (hi - lo) * i / kSegments);
  checkpoints.push_back(r0);
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

  cumulative.assign(checkpoints.size(), Vec3{0.0, 0.0, 0.0});
  const std::size_t k0 = static_cast<std::size_t>(
      std::find(checkpoints.begin(), checkpoints.end(), r0) - checkpoints.begin());
  constexpr double kCacheTol = 1e-13;
  for (std::size_t i = k0 + 1; i < checkpoints.size(); ++i) {
    const Vec3 d = segment(checkpoints[i - 1], checkpoints[i], kCacheTol);
    cumulative[i] = {cumulative[i - 1][0] + d[0], cumulative[i - 1][1] + d[1], 0.0};
  }
  for (std::size_t i = k0; i-- > 0;) {
    const Vec3 d = segment(checkpoints[i + 1], checkpoints[i], kCacheTol);
    cumulative[i] = {cumulative[i + 1][0] + d[0], cumulative[i + 1][1] + d[1], 0.0};
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Factories

namespace {

double default_r0(const detail::ProfileData& pd) {
  for (const auto& c : pd.components)
    if (c.contains(0.0)) return 0.0;
  for (const auto& c : pd.components) {
    if (c.lo >= 0.0) return c.bounded() ? 0.5 * (c.lo + c.hi) : c.lo + 1.0;
  }
  const auto& c = pd.components.front();
  return c.bounded() ? 0.5 * (c.lo + c.hi) : c.hi - 1.0;
}

std::shared_ptr<const detail::ProfileData> make_profile(double A, double B, double C, double a, double b,
                                                        std::optional<double> r0) {
  auto pd = std::make_shared<detail::ProfileData>(detail::ProfileData::build(A, B, C, a, b));
  if (pd->components.empty()) invalid("Delta^2 is nowhere positive: the maximal domain is empty");
  const double base = r0 ? *r0 : default_r0(*pd);
  if (!std::isfinite(base)) invalid("r0 must be finite");
  pd->activate(base);
  return pd;
}

}  // namespace

SurfaceFamily SurfaceFamily::euclidean_general(double a, double b, std::optional<double> r0) {
  require_finite({a, b});
  if (!(a > 0.0)) invalid("euclidean-general requires a > 0 (got a = " + num(a) + ")");
  SurfaceFamily f(EuclideanGeneralParams{a, b, r0});
  f.profile_ = make_profile(a * a, b, 1.0, a, 0.0, r0);
  std::get<EuclideanGeneralParams>(f.params_).r0 = f.profile_->r0;
  return f;
}

SurfaceFamily SurfaceFamily::euclidean_singular(double a) {
  require_finite({a});
  if (!(a > 0.0)) invalid("euclidean-singular requires a > 0 (got a = " + num(a) + ")");
  return SurfaceFamily(EuclideanSingularParams{a});
}

SurfaceFamily SurfaceFamily::hyperbola(HyperbolaVariant v, double a, double b, double delta,
                                       std::optional<double> r0) {
  require_finite({a, b, delta});
  if (a == 0.0 && b == 0.0) invalid("hyperbola requires (a, b) != (0, 0)");
  HyperbolaParams hp{v, a, b, delta, r0, 0.0};
  if (b * b - a * a > 0.0) hp.c = std::sqrt(b * b - a * a);
  SurfaceFamily f(hp);
  if (v == HyperbolaVariant::TypeI)
    f.profile_ = make_profile(a * a - b * b, 2.0 * delta, -1.0, a, b, r0);
  else
    f.profile_ = make_profile(b * b - a * a, -2.0 * delta, 1.0, a, b, r0);
  std::get<HyperbolaParams>(f.params_).r0 = f.profile_->r0;
  return f;
}

SurfaceFamily SurfaceFamily::hyperbola_singular(HyperbolaVariant v, double a, double b) {
  require_finite({a, b});
  if (!(b * b - a * a > 0.0))
    invalid("hyperbola-singular requires b^2 - a^2 > 0 (got a = " + num(a) + ", b = " + num(b) + ")");
  return SurfaceFamily(HyperbolaSingularParams{v, a, b, std::sqrt(b * b - a * a)});
}

SurfaceFamily SurfaceFamily::parabola(const ParabolaTriple& t) {
  require_finite({t.a, t.b, t.c, t.p});
  switch (t.kase) {
    case ParabolaCase::GenZero:
      if (t.b == 0.0) invalid("parabola-gen-zero requires b != 0 (b = 0 is rotational)");
      break;
    case ParabolaCase::GenPos:
      if (!(t.a > 0.0)) invalid("parabola-gen-pos requires a > 0 (got a = " + num(t.a) + ")");
      break;
    case ParabolaCase::GenNeg:
      if (!(t.a < 0.0)) invalid("parabola-gen-neg requires a < 0 (got a = " + num(t.a) + ")");
      break;
    case ParabolaCase::Singular:
      if (!(t.a < 0.0)) invalid("parabola-singular requires a < 0 (got a = " + num(t.a) + ")");
      break;
  }
  ParabolaTriple tt = t;
  if (tt.kase == ParabolaCase::GenZero) tt.a = 0.0;
  return SurfaceFamily(tt);
}

SurfaceFamily SurfaceFamily::entire_graph(const EntireGraphParams& g) {
  require_finite({g.a, g.p});
  if (!(g.a < 0.0)) invalid("entire-graph requires a < 0 (got a = " + num(g.a) + ")");
  if (!(g.p < 0.0)) invalid("entire-graph requires p < 0 (got p = " + num(g.p) + ")");
  return SurfaceFamily(g);
}

FamilyKind SurfaceFamily::kind() const { return static_cast<FamilyKind>(params_.index()); }

std::string SurfaceFamily::name() const {
  switch (kind()) {
    case FamilyKind::EuclideanGeneral: return "euclidean-general";
    case FamilyKind::EuclideanSingular: return "euclidean-singular";
    case FamilyKind::HyperbolaGeneral:
      return std::get<HyperbolaParams>(params_).variant == HyperbolaVariant::TypeI ? "hyperbola-i"
                                                                                    : "hyperbola-ii";
    case FamilyKind::HyperbolaSingular:
      return std::get<HyperbolaSingularParams>(params_).variant == HyperbolaVariant::TypeI
                 ? "hyperbola-singular-i"
                 : "hyperbola-singular-ii";
    case FamilyKind::Parabola:
      switch (std::get<ParabolaTriple>(params_).kase) {
        case ParabolaCase::GenZero: return "parabola-gen-zero";
        case ParabolaCase::GenPos: return "parabola-gen-pos";
        case ParabolaCase::GenNeg: return "parabola-gen-neg";
        case ParabolaCase::Singular: return "parabola-singular";
      }
      break;
    case FamilyKind::EntireGraph: return "entire-graph";
  }
  return "unknown";
}

double SurfaceFamily::r0() const { return profile_ ? profile_->r0 : 0.0; }

ParabolaTriple as_parabola(const EntireGraphParams& g) {
  return ParabolaTriple{ParabolaCase::Singular, g.a, 0.0, 0.0, g.p};
}

Interval SurfaceFamily::active_component() const {
  if (profile_) return profile_->components[static_cast<std::size_t>(profile_->active)];
  if (kind() == FamilyKind::Parabola) {
    const auto& t = std::get<ParabolaTriple>(params_);
    const auto comps = parabola_domain(t);
    if (t.kase == ParabolaCase::GenZero) return comps.front();  // u < c/2, r > 0
    if (t.kase == ParabolaCase::GenNeg) return comps.front();   // u < c, r > 0
    if (t.kase == ParabolaCase::GenPos) {
      const double k = std::sqrt(2.0 * t.a);
      return Interval{-t.c, -t.c + kPi / (2.0 * k), false, false};  // phi in (0, pi/2)
    }
  }
  return Interval{-kInf, kInf, false, false};
}

bool SurfaceFamily::in_domain(double p1) const {
  if (!std::isfinite(p1)) return false;
  if (profile_) return active_component().contains(p1);
  if (kind() == FamilyKind::Parabola) {
    for (const auto& c : parabola_domain(std::get<ParabolaTriple>(params_)))
      if (c.contains(p1)) return true;
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Domains and profiles

std::vector<Interval> parabola_domain(const ParabolaTriple& t) {
  switch (t.kase) {
    case ParabolaCase::GenZero:
      return {Interval{-kInf, 0.5 * t.c, false, false}, Interval{0.5 * t.c, kInf, false, false}};
    case ParabolaCase::GenNeg:
      return {Interval{-kInf, t.c, false, false}, Interval{t.c, kInf, false, false}};
    case ParabolaCase::Singular: return {Interval{-kInf, kInf, false, false}};
    case ParabolaCase::GenPos: {
      // Components between consecutive zeros/poles of r, listed inside [-20, 20].
      const double k = std::sqrt(2.0 * t.a);
      const double w = kPi / (2.0 * k);
      std::vector<Interval> out;
      const double n0 = std::floor((-20.0 + t.c) / w);
      for (double n = n0;; n += 1.0) {
        const double lo = n * w - t.c;
        const double hi = (n + 1.0) * w - t.c;
        if (lo > 20.0) break;
        if (hi < -20.0) continue;
        out.push_back(Interval{lo, hi, false, false});
        if (out.size() > 100000) break;
      }
      return out;
    }
  }
  return {};
}

std::vector<Interval> maximal_domain(const SurfaceFamily& f) {
  switch (f.kind()) {
    case FamilyKind::EuclideanGeneral:
    case FamilyKind::HyperbolaGeneral: return f.profile().components;
    case FamilyKind::Parabola: return parabola_domain(std::get<ParabolaTriple>(f.params()));
    default: return {Interval{-kInf, kInf, false, false}};
  }
}

double profile_delta(const SurfaceFamily& f, double s) {
  if (!f.has_profile()) throw Error(ErrorCode::InvalidParams, "family has no profile function");
  const auto& pd = f.profile();
  bool inside = false;
  for (const auto& c : pd.components) inside = inside || c.contains(s);
  if (!inside) out_of_domain("s", s);
  const double d2 = pd.delta2(s);
  if (!(d2 > 0.0)) out_of_domain("s", s);
  return std::sqrt(d2);
}

ProfileIntegrals profile_integrals(const SurfaceFamily& f, double r, double tol) {
  if (!f.has_profile()) throw Error(ErrorCode::InvalidParams, "family has no profile integrals");
  if (!f.in_domain(r)) out_of_domain("r", r);
  const auto& pd = f.profile();
  const Vec3 v = pd.cumulative_at(r, tol);
  return {v[0], pd.a * v[1], pd.b * v[1]};
}

ProfileIntegrals profile_segment(const SurfaceFamily& f, double r1, double r2, double tol) {
  if (!f.has_profile()) throw Error(ErrorCode::InvalidParams, "family has no profile integrals");
  if (!f.in_domain(r1)) out_of_domain("r", r1);
  if (!f.in_domain(r2)) out_of_domain("r", r2);
  const auto& pd = f.profile();
  const Vec3 v = pd.segment(r1, r2, tol);
  return {v[0], pd.a * v[1], pd.b * v[1]};
}

// ---------------------------------------------------------------------------
// Parabola profile functions

ParabolaJet parabola_jet(const ParabolaTriple& t, double u) {
  const double a = t.a, b = t.b, c = t.c, p = t.p;
  ParabolaJet j{};
  switch (t.kase) {
    case ParabolaCase::GenZero: {
      const double w = c - 2.0 * u;
      if (w == 0.0) out_of_domain("u", u);
      const double K = p - 0.25 * b * b * c * c;
      j.r = 1.0 / w;
      j.r1 = 2.0 / (w * w);
      j.r2 = 8.0 / (w * w * w);
      j.f = (4.0 * b / 3.0) * u * u * u - 2.0 * b * c * u * u + b * c * c * u;
      j.f1 = b * w * w;
      j.f2 = -4.0 * b * w;
      j.g = -K * (w * w * w - c * c * c) / 6.0 - (b * b / 40.0) * (std::pow(w, 5) - std::pow(c, 5));
      j.g1 = K * w * w + 0.25 * b * b * w * w * w * w;
      j.g2 = -4.0 * K * w - 2.0 * b * b * w * w * w;
      break;
    }
    case ParabolaCase::GenPos: {
      const double k = std::sqrt(2.0 * a);
      const double ph = k * (u + c);
      const double sn = std::sin(ph), cs = std::cos(ph);
      if (cs == 0.0) out_of_domain("u", u);
      if (sn == 0.0) throw Error(ErrorCode::ZeroRadius, "r(u) = 0");
      const double tn = sn / cs, ct = cs / sn;
      const double sec2 = 1.0 / (cs * cs), csc2 = 1.0 / (sn * sn);
      j.r = std::sqrt(a / 2.0) * tn;
      j.r1 = a * sec2;
      j.r2 = 2.0 * a * k * sec2 * tn;
      j.f = -(std::sqrt(2.0) * b / std::pow(a, 1.5)) * ct - (2.0 * b / a) * (u + c);
      j.f1 = (2.0 * b / a) * ct * ct;
      j.f2 = -(4.0 * b * k / a) * ct * csc2;
      j.g = -(b * b / (std::sqrt(2.0) * std::pow(a, 2.5))) * ct + (p / (4.0 * k)) * std::sin(2.0 * ph) +
            (p / 2.0 - b * b / (a * a)) * (u + c);
      j.g1 = (b * b / (a * a)) * ct * ct + p * cs * cs;
      j.g2 = -(2.0 * b * b * k / (a * a)) * ct * csc2 - p * k * std::sin(2.0 * ph);
      break;
    }
    case ParabolaCase::GenNeg: {
      const double k = std::sqrt(-2.0 * a);
      const double ps = k * (c - u);
      if (ps == 0.0) throw Error(ErrorCode::ZeroRadius, "r(u) = 0");
      const double th = std::tanh(ps), cth = 1.0 / th;
      const double ch = std::cosh(ps), sh = std::sinh(ps);
      const double sech2 = 1.0 / (ch * ch), csch2 = 1.0 / (sh * sh);
      j.r = std::sqrt(-a / 2.0) * th;
      j.r1 = a * sech2;
      j.r2 = 2.0 * a * k * sech2 * th;
      j.f = -(std::sqrt(2.0) * b / (a * std::sqrt(-a))) * cth - (2.0 * b / a) * (u + c);
      j.f1 = -(2.0 * b / a) * cth * cth;
      j.f2 = -(4.0 * b * k / a) * cth * csch2;
      j.g = -(b * b / (a * a * k)) * cth - (p / (4.0 * k)) * std::sinh(2.0 * ps) +
            (b * b / (a * a) - p / 2.0) * (c - u);
      j.g1 = -(b * b / (a * a)) * cth * cth + p * ch * ch;
      j.g2 = -(2.0 * b * b * k / (a * a)) * cth * csch2 - p * k * std::sinh(2.0 * ps);
      break;
    }
    case ParabolaCase::Singular: {
      const double k = std::sqrt(-2.0 * a);
      const double e = std::exp(-2.0 * k * u);
      j.r = std::sqrt(-a / 2.0);
      j.r1 = 0.0;
      j.r2 = 0.0;
      j.f = -(2.0 * b / a) * u;
      j.f1 = -2.0 * b / a;
      j.f2 = 0.0;
      j.g = p * e - (b * b / (a * a)) * u;
      j.g1 = -2.0 * k * p * e - b * b / (a * a);
      j.g2 = 4.0 * k * k * p * e;
      break;
    }
  }
  return j;
}

RFG parabola_rfg(const ParabolaTriple& t, double u) {
  if (!std::isfinite(u)) out_of_domain("u", u);
  if (t.kase == ParabolaCase::GenNeg && u == t.c) throw Error(ErrorCode::ZeroRadius, "r(u) = 0 at u = c");
  const ParabolaJet j = parabola_jet(t, u);
  if (j.r == 0.0) throw Error(ErrorCode::ZeroRadius, "r(u) = 0");
  return {j.r, j.f, j.g, j.g1};
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct HypTrig {
  double Y, T;  // (y, t) circle coordinates; dY/dθ = T, dT/dθ = Y
};

HypTrig hyp_trig(HyperbolaVariant v, double th) {
  const double ch = std::cosh(th), sh = std::sinh(th);
  return v == HyperbolaVariant::TypeI ? HypTrig{ch, sh} : HypTrig{sh, ch};
}

const ParabolaTriple& triple_of(const SurfaceFamily& f, ParabolaTriple& scratch) {
  if (f.kind() == FamilyKind::EntireGraph) {
    scratch = as_parabola(std::get<EntireGraphParams>(f.params()));
    return scratch;
  }
  return std::get<ParabolaTriple>(f.params());
}

}  // namespace

Vector3L evaluate(const SurfaceFamily& f, double p1, double p2) {
  if (!std::isfinite(p2)) out_of_domain("second parameter", p2);
  if (!f.in_domain(p1)) out_of_domain("first parameter", p1);
  switch (f.kind()) {
    case FamilyKind::EuclideanGeneral: {
      const auto I = profile_integrals(f, p1);
      return {I.Ia + p1 * std::cos(p2), p1 * std::sin(p2), I.I0};
    }
    case FamilyKind::EuclideanSingular: {
      const double ra = 1.0 / std::sqrt(std::get<EuclideanSingularParams>(f.params()).a);
      return {p1 + ra * std::cos(p2), ra * std::sin(p2), p1};
    }
    case FamilyKind::HyperbolaGeneral: {
      const auto& hp = std::get<HyperbolaParams>(f.params());
      const auto I = profile_integrals(f, p1);
      const HypTrig h = hyp_trig(hp.variant, p2);
      return {I.I0, I.Ia + p1 * h.Y, I.Ib + p1 * h.T};
    }
    case FamilyKind::HyperbolaSingular: {
      const auto& hp = std::get<HyperbolaSingularParams>(f.params());
      const HypTrig h = hyp_trig(hp.variant, p2);
      const double rc = 1.0 / std::sqrt(hp.c);
      return {p1, hp.a / hp.c * p1 + rc * h.Y, hp.b / hp.c * p1 + rc * h.T};
    }
    case FamilyKind::Parabola:
    case FamilyKind::EntireGraph: {
      ParabolaTriple scratch;
      const auto j = parabola_jet(triple_of(f, scratch), p1);
      const double q = 0.5 * j.r * p2 * p2;
      return {j.f + p2, j.g + p1 + q, j.g - p1 + q};
    }
  }
  return {};
}

Partials partials(const SurfaceFamily& f, double p1, double p2, int order) {
  if (!std::isfinite(p2)) out_of_domain("second parameter", p2);
  if (!f.in_domain(p1)) out_of_domain("first parameter", p1);
  Partials P;
  const bool second = order >= 2;
  switch (f.kind()) {
    case FamilyKind::EuclideanGeneral: {
      const auto& pd = f.profile();
      const double a = pd.a, r = p1;
      const double D = pd.delta(r), Dp = pd.ddelta(r);
      const double c = std::cos(p2), s = std::sin(p2);
      P.X1 = {a * r * r / D + c, s, 1.0 / D};
      P.X2 = {-r * s, r * c, 0.0};
      if (second) {
        P.X11 = {(2.0 * a * r * D - a * r * r * Dp) / (D * D), 0.0, -Dp / (D * D)};
        P.X12 = {-s, c, 0.0};
        P.X22 = {-r * c, -r * s, 0.0};
      }
      break;
    }
    case FamilyKind::EuclideanSingular: {
      const double ra = 1.0 / std::sqrt(std::get<EuclideanSingularParams>(f.params()).a);
      const double c = std::cos(p2), s = std::sin(p2);
      P.X1 = {1.0, 0.0, 1.0};
      P.X2 = {-ra * s, ra * c, 0.0};
      if (second) P.X22 = {-ra * c, -ra * s, 0.0};
      break;
    }
    case FamilyKind::HyperbolaGeneral: {
      const auto& hp = std::get<HyperbolaParams>(f.params());
      const auto& pd = f.profile();
      const double a = hp.a, b = hp.b, r = p1;
      const double D = pd.delta(r), Dp = pd.ddelta(r);
      const HypTrig h = hyp_trig(hp.variant, p2);
      P.X1 = {1.0 / D, a * r * r / D + h.Y, b * r * r / D + h.T};
      P.X2 = {0.0, r * h.T, r * h.Y};
      if (second) {
        P.X11 = {-Dp / (D * D), (2.0 * a * r * D - a * r * r * Dp) / (D * D),
                 (2.0 * b * r * D - b * r * r * Dp) / (D * D)};
        P.X12 = {0.0, h.T, h.Y};
        P.X22 = {0.0, r * h.Y, r * h.T};
      }
      break;
    }
    case FamilyKind::HyperbolaSingular: {
      const auto& hp = std::get<HyperbolaSingularParams>(f.params());
      const HypTrig h = hyp_trig(hp.variant, p2);
      const double rc = 1.0 / std::sqrt(hp.c);
      P.X1 = {1.0, hp.a / hp.c, hp.b / hp.c};
      P.X2 = {0.0, rc * h.T, rc * h.Y};
      if (second) P.X22 = {0.0, rc * h.Y, rc * h.T};
      break;
    }
    case FamilyKind::Parabola:
    case FamilyKind::EntireGraph: {
      ParabolaTriple scratch;
      const auto j = parabola_jet(triple_of(f, scratch), p1);
      const double v = p2, h = 0.5 * v * v;
      P.X1 = {j.f1, j.g1 + 1.0 + j.r1 * h, j.g1 - 1.0 + j.r1 * h};
      P.X2 = {1.0, j.r * v, j.r * v};
      if (second) {
        P.X11 = {j.f2, j.g2 + j.r2 * h, j.g2 + j.r2 * h};
        P.X12 = {0.0, j.r1 * v, j.r1 * v};
        P.X22 = {0.0, j.r, j.r};
      }
      break;
    }
  }
  return P;
}

// ---------------------------------------------------------------------------
// ODE residuals

namespace {

// Five-point first and second derivatives at 0 from values at -2h..2h.
struct Diff2 {
  double d1, d2;
};
Diff2 five_point(const std::array<double, 5>& v, double h) {
  return {(v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * h),
          (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h)};
}

}  // namespace

double ode_residual(const SurfaceFamily& f, double at) {
  if (!f.in_domain(at)) out_of_domain("at", at);
  double h = 1e-3;
  if (f.has_profile()) {
    // Stencil small against the distance to a root of Delta^2.
    const Interval c = f.active_component();
    h = std::min(h, 5e-3 * std::min(at - c.lo, c.hi - at));
  }
  if (!f.in_domain(at - 2.0 * h) || !f.in_domain(at + 2.0 * h)) out_of_domain("at", at);
  switch (f.kind()) {
    case FamilyKind::EuclideanGeneral:
    case FamilyKind::HyperbolaGeneral: {
      // r(t) derivatives come from dr/dt = Delta(r). The quadrature enters
      // through first differences of short segments from `at`: dt/dr must be
      // 1/Delta, and df/dt, dg/dt are checked against the ODE system.
      std::array<double, 5> t{}, x{}, y{};
      for (int k = -2; k <= 2; ++k) {
        if (k == 0) continue;
        const ProfileIntegrals I = profile_segment(f, at, at + k * h, 1e-14);
        t[static_cast<std::size_t>(k + 2)] = I.I0;
        x[static_cast<std::size_t>(k + 2)] = I.Ia;
        y[static_cast<std::size_t>(k + 2)] = I.Ib;
      }
      const Diff2 dt = five_point(t, h), dx = five_point(x, h), dy = five_point(y, h);
      const auto& pd = f.profile();
      const double r = at;
      const double r1 = pd.delta(r);
      const double r2 = 0.5 * (4.0 * pd.A * r * r * r + 2.0 * pd.B * r);  // (Delta^2)' / 2
      const double quad = std::abs(dt.d1 * r1 - 1.0);
      const double fp = dx.d1 / dt.d1, gp = dy.d1 / dt.d1;
      if (f.kind() == FamilyKind::EuclideanGeneral) {
        const double a = std::get<EuclideanGeneralParams>(f.params()).a;
        const double main = a * a * r * r * r * r - 1.0 - r * r2 + r1 * r1;
        return std::max({std::abs(main), quad, std::abs(fp - a * r * r)});
      }
      const auto& hp = std::get<HyperbolaParams>(f.params());
      const double q = (hp.a * hp.a - hp.b * hp.b) * r * r * r * r;
      const double main = hp.variant == HyperbolaVariant::TypeI ? 1.0 + q + r1 * r1 - r * r2 : 1.0 + q - r1 * r1 + r * r2;
      return std::max({std::abs(main), quad, std::abs(fp - hp.a * r * r), std::abs(gp - hp.b * r * r)});
    }
    case FamilyKind::EuclideanSingular: {
      const double a = std::get<EuclideanSingularParams>(f.params()).a;
      const double r = 1.0 / std::sqrt(a);
      return std::abs(a * a * r * r * r * r - 1.0);
    }
    case FamilyKind::HyperbolaSingular: {
      const auto& hp = std::get<HyperbolaSingularParams>(f.params());
      const double r = 1.0 / std::sqrt(hp.c);
      // r' = r'' = 0; x is the arc parameter and y' = a/c, t' = b/c play f', g'.
      const double q = (hp.a * hp.a - hp.b * hp.b) * r * r * r * r;
      const double fp = hp.a / hp.c, gp = hp.b / hp.c;
      return std::max({std::abs(1.0 + q), std::abs(fp - hp.a * r * r), std::abs(gp - hp.b * r * r)});
    }
    case FamilyKind::Parabola:
    case FamilyKind::EntireGraph: {
      // Jets are differentiated by hand from the closed forms, not from the ODEs.
      ParabolaTriple scratch;
      const ParabolaTriple& t = triple_of(f, scratch);
      const ParabolaJet j = parabola_jet(t, at);
      const double r = j.r;
      const double e1 = j.r1 - 2.0 * r * r - t.a;
      const double e2 = r * r * j.f1 - t.b;
      const double e3 = t.b * t.b / (r * r * r) + 4.0 * r * j.g1 + j.g2;
      return std::max({std::abs(e1), std::abs(e2), std::abs(e3)});
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Sampling windows

namespace {

Window radial_window(const Interval& comp, int n) {
  if (comp.hi <= 0.0) {
    // Component on the negative axis: mirror the rule below.
    Interval m{-comp.hi, -comp.lo, false, false};
    Window w = radial_window(m, n);
    return Window{-w.hi, -w.lo, n};
  }
  const double lo = std::max(comp.lo, 0.0);
  const double hi = comp.hi;
  const double span = std::isfinite(hi) ? hi - lo : 1.0;
  const double margin = 0.02 * std::min(1.0, span);
  const double start = (lo < 0.05 && comp.lo < 0.05 && (!std::isfinite(hi) || hi > 0.1)) ? 0.05 : lo + margin;
  double end = std::max(3.0, start + 2.0);
  if (std::isfinite(hi)) end = std::min(end, hi - margin);
  return Window{start, end, n};
}

}  // namespace

ParamWindow default_window(const SurfaceFamily& f) {
  ParamWindow w;
  switch (f.kind()) {
    case FamilyKind::EuclideanGeneral:
      w.p1 = radial_window(f.active_component(), 60);
      w.p2 = Window{0.0, 2.0 * kPi, 129};
      break;
    case FamilyKind::EuclideanSingular:
      w.p1 = Window{-2.0, 2.0, 41};
      w.p2 = Window{0.0, 2.0 * kPi, 129};
      break;
    case FamilyKind::HyperbolaGeneral:
      w.p1 = radial_window(f.active_component(), 60);
      w.p2 = Window{-3.0, 3.0, 121};
      break;
    case FamilyKind::HyperbolaSingular:
      w.p1 = Window{-2.0, 2.0, 41};
      w.p2 = Window{-3.0, 3.0, 121};
      break;
    case FamilyKind::Parabola: {
      const auto& t = std::get<ParabolaTriple>(f.params());
      const Interval comp = f.active_component();
      switch (t.kase) {
        case ParabolaCase::GenZero: w.p1 = Window{comp.hi - 3.0, comp.hi - 0.05, 60}; break;
        case ParabolaCase::GenNeg: {
          // Same concern as below: cosh^2 growth sets the usable length, 1/k.
          const double k = std::sqrt(-2.0 * t.a);
          w.p1 = Window{comp.hi - std::min(3.0, 3.0 / k), comp.hi - 0.05 / std::max(1.0, k), 60};
          break;
        }
        case ParabolaCase::GenPos: {
          // Kept away from the pole of r, where |X_1|^2 |X_2|^2 grows until the
          // scale-aware lightlike band swallows a nonzero metric determinant.
          const double L = comp.hi - comp.lo;
          w.p1 = Window{comp.lo + 0.05 * L, comp.hi - 0.2 * L, 60};
          break;
        }
        case ParabolaCase::Singular: w.p1 = Window{-1.0, 1.0, 41}; break;
      }
      // Centre the v-window on the vertex of the quadratic EG - F^2 in v.
      const double um = 0.5 * (w.p1.lo + w.p1.hi);
      const auto j = parabola_jet(t, um);
      double centre = 0.0, half = 3.0;
      if (t.a != 0.0) {
        centre = t.b / (t.a * j.r);
        const double disc = t.b * t.b / (j.r * j.r) - 2.0 * t.a * j.g1;
        half += 2.0 * std::sqrt(std::abs(disc)) / std::abs(t.a);
      } else {
        centre = j.r * j.g1 / t.b;
      }
      w.p2 = Window{centre - half, centre + half, 121};
      break;
    }
    case FamilyKind::EntireGraph:
      w.p1 = Window{-1.0, 1.0, 41};
      w.p2 = Window{-3.0, 3.0, 121};
      break;
  }
  return w;
}

}  // namespace zmc
