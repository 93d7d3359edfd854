#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zmc/classify.hpp"
#include "zmc/error.hpp"

using namespace zmc;

namespace {

constexpr double kPi = std::numbers::pi;
const CausalSet kS{CausalCharacter::Spacelike};
const CausalSet kT{CausalCharacter::Timelike};
const CausalSet kSL{CausalCharacter::Spacelike, CausalCharacter::Lightlike};
const CausalSet kTL{CausalCharacter::Timelike, CausalCharacter::Lightlike};
const CausalSet kAll{CausalCharacter::Spacelike, CausalCharacter::Timelike, CausalCharacter::Lightlike};

}  // namespace

TEST_CASE("fundamental forms of a known surface") {
  // b = 2a at theta = pi is the lightlike line; at theta = pi/2, r = 1 the
  // metric is E = 1 - 1/Delta^2 ... checked here only through EG - F^2 sign.
  const auto f = SurfaceFamily::euclidean_general(1.0, 2.0);
  const FundamentalForms ff = fundamental_forms(f, 1.0, kPi / 2);
  CHECK(ff.epsilon == 1);
  CHECK(ff.det > 0);
  CHECK(std::abs(metric_det(f, 1.0, kPi)) < 1e-12);
  CHECK_THROWS_AS(mean_curvature_residual(f, 1.0, kPi), Error);
  CHECK(mean_curvature_residual(f, 1.0, 1.0) < 1e-10);
}

TEST_CASE("mean curvature vanishes on every family") {
  std::vector<SurfaceFamily> fs{
      SurfaceFamily::euclidean_general(1.0, 3.0),  SurfaceFamily::euclidean_general(1.0, -3.0),
      SurfaceFamily::euclidean_singular(0.5),      SurfaceFamily::hyperbola(HyperbolaVariant::TypeI, 0.0, 1.0, 2.0),
      SurfaceFamily::hyperbola(HyperbolaVariant::TypeII, 0.0, -1.0, 0.5),
      SurfaceFamily::hyperbola_singular(HyperbolaVariant::TypeII, 0.3, 1.0),
      SurfaceFamily::parabola({ParabolaCase::GenZero, 0.0, 2.0, 0.0, 1.0}),
      SurfaceFamily::parabola({ParabolaCase::GenPos, 1.0, 1.0, 0.2, -0.5}),
      SurfaceFamily::parabola({ParabolaCase::GenNeg, -1.0, 1.0, 0.0, 0.5}),
      SurfaceFamily::entire_graph({-2.0, -1.0})};
  for (const auto& f : fs) {
    CAPTURE(f.name());
    const ParamWindow w = default_window(f);
    double worst = 0.0;
    for (int i = 0; i < w.p1.n; i += 3)
      for (int j = 0; j < w.p2.n; j += 3) {
        try {
          worst = std::max(worst, mean_curvature_residual(f, w.p1.at(i), w.p2.at(j)));
        } catch (const Error& e) {
          CHECK(e.code() == ErrorCode::LightlikePoint);
        }
      }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("predicted causal characters") {
  CHECK(predict_class(SurfaceFamily::euclidean_general(1.0, 3.0)).predicted == kS);
  CHECK(predict_class(SurfaceFamily::euclidean_general(1.0, 2.0)).predicted == kSL);
  CHECK(predict_class(SurfaceFamily::euclidean_general(1.0, -3.0)).predicted == kT);
  CHECK(predict_class(SurfaceFamily::euclidean_general(1.0, -2.0)).predicted == kTL);
  CHECK(predict_class(SurfaceFamily::euclidean_general(1.0, -2.0, 2.0)).predicted == kAll);
  CHECK(predict_class(SurfaceFamily::euclidean_general(1.0, 0.5)).predicted == kAll);
  CHECK(predict_class(SurfaceFamily::euclidean_singular(1.0)).predicted == kTL);
  CHECK(predict_class(SurfaceFamily::hyperbola(HyperbolaVariant::TypeI, 1.0, 0.0, 0.3)).predicted == kT);
  CHECK(predict_class(SurfaceFamily::hyperbola(HyperbolaVariant::TypeII, 0.0, 1.0, 1.0)).predicted == kTL);
  CHECK(predict_class(SurfaceFamily::hyperbola(HyperbolaVariant::TypeII, 0.0, 1.0, 0.5)).predicted == kT);
  CHECK(predict_class(SurfaceFamily::hyperbola(HyperbolaVariant::TypeII, 0.0, -1.0, 0.5)).predicted == kAll);
  CHECK(predict_class(SurfaceFamily::hyperbola_singular(HyperbolaVariant::TypeII, 0.0, 1.0)).predicted == kTL);
  CHECK(predict_class(SurfaceFamily::parabola({ParabolaCase::GenPos, 1.0, 0.0, 0.0, 0.5})).predicted == kS);
  CHECK(predict_class(SurfaceFamily::parabola({ParabolaCase::GenPos, 1.0, 0.0, 0.0, -0.5})).predicted == kAll);
  CHECK(predict_class(SurfaceFamily::parabola({ParabolaCase::GenNeg, -1.0, 0.0, 0.0, -0.5})).predicted == kT);
  CHECK(predict_class(SurfaceFamily::parabola({ParabolaCase::Singular, -2.0, 0.0, 0.0, 0.0})).predicted == kTL);
  CHECK(predict_class(SurfaceFamily::entire_graph({-2.0, -1.0})).predicted == kAll);
  const auto gp = predict_class(SurfaceFamily::parabola({ParabolaCase::GenPos, 1.0, 0.0, 0.0, 0.5}));
  CHECK(gp.notes.find("discriminant") != std::string::npos);
}

TEST_CASE("sampled classes agree with the prediction") {
  std::vector<SurfaceFamily> fs{SurfaceFamily::euclidean_general(1.0, 3.0), SurfaceFamily::euclidean_general(1.0, 2.0),
                                SurfaceFamily::euclidean_general(1.0, -2.0),
                                SurfaceFamily::hyperbola(HyperbolaVariant::TypeII, 0.0, 1.0, 1.0),
                                SurfaceFamily::parabola({ParabolaCase::GenPos, 1.0, 0.5, 0.0, 0.5}),
                                SurfaceFamily::parabola({ParabolaCase::Singular, -2.0, 0.0, 0.0, 0.0}),
                                SurfaceFamily::entire_graph({-2.0, -1.0})};
  for (const auto& f : fs) {
    CAPTURE(f.name());
    const ClassReport r = sample_class(f, default_window(f), 2);
    CHECK(r.agreement);
  }
}

TEST_CASE("row scan finds tangential and crossing zeros") {
  const auto f = SurfaceFamily::euclidean_general(1.0, 2.0);
  const RowScan rs = scan_row(f, 1.0, Window{0.0, 2.0 * kPi, 64});
  REQUIRE(rs.zeros.size() == 1);
  CHECK(rs.zeros[0].tangency);
  CHECK(rs.zeros[0].p2 == doctest::Approx(kPi).epsilon(1e-7));

  const auto g = SurfaceFamily::euclidean_general(1.0, 0.5);
  const RowScan rg = scan_row(g, 1.5, Window{0.0, 2.0 * kPi, 257});
  bool crossing = false;
  for (const auto& z : rg.zeros) crossing = crossing || !z.tangency;
  CHECK(crossing);
}

TEST_CASE("lightlike loci: lines and curves") {
  for (const auto& f : {SurfaceFamily::euclidean_general(1.0, 2.0), SurfaceFamily::euclidean_general(1.0, -2.0),
                        SurfaceFamily::euclidean_singular(3.0),
                        SurfaceFamily::hyperbola(HyperbolaVariant::TypeII, 0.0, 1.0, 1.0),
                        SurfaceFamily::hyperbola_singular(HyperbolaVariant::TypeII, 0.2, 1.0),
                        SurfaceFamily::parabola({ParabolaCase::GenNeg, -1.0, 0.5, 0.0, 0.0})}) {
    CAPTURE(f.name());
    const auto loci = lightlike_locus_analytic(f);
    REQUIRE(!loci.empty());
    for (const auto& l : loci) {
      CHECK(l.kind == LocusKind::StraightLine);
      CHECK(l.straightness_residual < 1e-8);
      CHECK(std::abs(lorentz_dot(l.direction, l.direction)) < 1e-8 * euclid_dot(l.direction, l.direction));
      for (const auto& q : l.param_curve) {
        double band = 0;
        CHECK(std::abs(metric_det(f, q.p1, q.p2, &band)) <= band);
      }
    }
  }
  const auto outer = lightlike_locus_analytic(SurfaceFamily::euclidean_general(1.0, -2.0, 2.0));
  REQUIRE(outer.size() == 3);
  CHECK(outer[0].kind == LocusKind::StraightLine);
  CHECK(outer[1].straightness_residual > 1e-2);
  CHECK(outer[2].straightness_residual > 1e-2);
  CHECK_THROWS_AS(lightlike_locus_analytic(SurfaceFamily::euclidean_general(1.0, 3.0)), Error);
}

TEST_CASE("straightness of hand-built curves") {
  LightlikeLocus line, bent;
  for (int i = 0; i < 10; ++i) {
    const double s = 0.1 * i;
    line.param_curve.push_back({s, 0, {1 + s, 2 * s, std::sqrt(5.0) * s}});
    bent.param_curve.push_back({s, 0, {std::cos(s), std::sin(s), s}});
  }
  finalize_locus(line);
  finalize_locus(bent);
  CHECK(line.kind == LocusKind::StraightLine);
  CHECK(line.straightness_residual < 1e-14);
  CHECK(bent.kind == LocusKind::NullCurve);
}

TEST_CASE("rotational check") {
  const auto rot = rotational_check({ParabolaCase::GenZero, 0.0, 0.0, 0.0, 0.0}, 6);
  CHECK(rot.rotational);
  CHECK(rot.max_deviation < 1e-8);
  const auto non = rotational_check({ParabolaCase::GenZero, 0.0, 1.0, 0.0, 0.0}, 6);
  CHECK_FALSE(non.rotational);
  CHECK(non.max_deviation > 1e-3);
}
