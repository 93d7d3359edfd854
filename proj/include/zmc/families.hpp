#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "zmc/minkowski.hpp"

namespace zmc {

enum class HyperbolaVariant { TypeI, TypeII };
enum class ParabolaCase { GenZero, GenPos, GenNeg, Singular };

struct EuclideanGeneralParams {
  double a = 1.0;
  double b = 0.0;
  std::optional<double> r0;
};

struct EuclideanSingularParams {
  double a = 1.0;
};

struct HyperbolaParams {
  HyperbolaVariant variant = HyperbolaVariant::TypeI;
  double a = 0.0;
  double b = 1.0;
  double delta = 0.0;
  std::optional<double> r0;
  double c = 0.0;  // sqrt(b^2 - a^2) when positive, else 0
};

struct HyperbolaSingularParams {
  HyperbolaVariant variant = HyperbolaVariant::TypeI;
  double a = 0.0;
  double b = 1.0;
  double c = 1.0;
};

struct ParabolaTriple {
  ParabolaCase kase = ParabolaCase::Singular;
  double a = -2.0;
  double b = 0.0;
  double c = 0.0;
  double p = 0.0;
};

struct EntireGraphParams {
  double a = -2.0;
  double p = -1.0;
};

enum class FamilyKind {
  EuclideanGeneral,
  EuclideanSingular,
  HyperbolaGeneral,
  HyperbolaSingular,
  Parabola,
  EntireGraph
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;
  bool hi_closed = false;

  bool contains(double s) const {
    return (lo_closed ? s >= lo : s > lo) && (hi_closed ? s <= hi : s < hi);
  }
  bool bounded() const;
};

struct Window {
  double lo = 0.0;
  double hi = 1.0;
  int n = 2;
  double at(int i) const { return n <= 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

struct ParamWindow {
  Window p1;
  Window p2;
};

namespace detail {
struct ProfileData;
}

/// One of the Riemann-type families with validated parameters. Integral
/// families carry an eagerly built cumulative-integral cache, so a constructed
/// value is read-only and may be shared between threads.
class SurfaceFamily {
 public:
  using Params = std::variant<EuclideanGeneralParams, EuclideanSingularParams, HyperbolaParams,
                              HyperbolaSingularParams, ParabolaTriple, EntireGraphParams>;

  static SurfaceFamily euclidean_general(double a, double b, std::optional<double> r0 = {});
  static SurfaceFamily euclidean_singular(double a);
  static SurfaceFamily hyperbola(HyperbolaVariant v, double a, double b, double delta,
                                 std::optional<double> r0 = {});
  static SurfaceFamily hyperbola_singular(HyperbolaVariant v, double a, double b);
  static SurfaceFamily parabola(const ParabolaTriple& t);
  static SurfaceFamily entire_graph(const EntireGraphParams& g);

  FamilyKind kind() const;
  const Params& params() const { return params_; }
  std::string name() const;

  bool has_profile() const { return profile_ != nullptr; }
  const detail::ProfileData& profile() const { return *profile_; }
  /// Base point of the profile integrals (integral families only).
  double r0() const;
  /// Connected component of the maximal domain the surface lives on.
  Interval active_component() const;
  /// Whether p1 is a valid first parameter (strictly inside the active chart).
  bool in_domain(double p1) const;

 private:
  explicit SurfaceFamily(Params p) : params_(std::move(p)) {}
  Params params_;
  std::shared_ptr<const detail::ProfileData> profile_;
};

struct Partials {
  Vector3L X1, X2;
  Vector3L X11, X12, X22;
};

struct ProfileIntegrals {
  double I0 = 0.0;
  double Ia = 0.0;
  double Ib = 0.0;
};

/// Parabola profile with derivatives up to second order.
struct ParabolaJet {
  double r, r1, r2;
  double f, f1, f2;
  double g, g1, g2;
};

struct RFG {
  double r, f, g, gp;
};

std::vector<Interval> maximal_domain(const SurfaceFamily& f);
double profile_delta(const SurfaceFamily& f, double s);
ProfileIntegrals profile_integrals(const SurfaceFamily& f, double r, double tol = 1e-10);
/// Direct quadrature between two points of the active component, no cache.
ProfileIntegrals profile_segment(const SurfaceFamily& f, double r1, double r2, double tol = 1e-10);

Vector3L evaluate(const SurfaceFamily& f, double p1, double p2);
Partials partials(const SurfaceFamily& f, double p1, double p2, int order = 2);

RFG parabola_rfg(const ParabolaTriple& t, double u);
ParabolaJet parabola_jet(const ParabolaTriple& t, double u);
/// Maximal domain of a parabola triple without family validation (b = 0 allowed).
std::vector<Interval> parabola_domain(const ParabolaTriple& t);

double ode_residual(const SurfaceFamily& f, double at);

/// Desk-scale sampling window inside the active chart.
ParamWindow default_window(const SurfaceFamily& f);

/// Parabola triple describing the entire graph as a singular parabola surface.
ParabolaTriple as_parabola(const EntireGraphParams& g);

}  // namespace zmc
