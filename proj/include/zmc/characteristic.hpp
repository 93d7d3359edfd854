#pragma once

#include <string>
#include <vector>

#include "zmc/classify.hpp"

namespace zmc {

enum class AlphaType { AlphaPlus, Alpha0I, Alpha0II, AlphaMinusI, AlphaMinusII, AlphaMinusIII };

const char* to_string(AlphaType t);

struct AlphaSample {
  double y = 0;
  double alpha = 0;
};

struct MuEstimate {
  double mu = 0;
  double constancy_residual = 0;
};

struct CharacteristicReport {
  std::vector<AlphaSample> samples;
  double mu = 0;
  double mu_constancy_residual = 0;
  AlphaType alpha_type = AlphaType::Alpha0I;
  double closed_form_fit_residual = 0;
  std::string locus_label;
};

/// alpha = (t_22 - y_22) / x_2^2 of A o X along a straight lightlike locus,
/// A the null-normalizing isometry of the locus and 2 the transverse
/// parameter. Uses at most n evenly spaced locus samples.
std::vector<AlphaSample> alpha_along_line(const SurfaceFamily& f, const LightlikeLocus& locus, int n);

/// mu_i = -(d alpha/dy + alpha^2) with five-point differences on the
/// (possibly non-uniform) y grid; mu is their median.
MuEstimate mu_from_alpha(std::vector<AlphaSample> samples);

AlphaType classify_alpha_type(const std::vector<AlphaSample>& samples, double mu);

/// Max deviation from the matching closed-form alpha after fitting the shift.
double closed_form_fit(const std::vector<AlphaSample>& samples, double mu, AlphaType type);

/// p1 window along the lightlike line used for the characteristic.
Window characteristic_window(const SurfaceFamily& f, int n);

/// Full pipeline on the first closed-form straight lightlike line.
CharacteristicReport characteristic(const SurfaceFamily& f, int n = 401);
/// As above with the p1 range taken from w; the line is first sampled on w and
/// then resampled at n points evenly spaced in y.
CharacteristicReport characteristic(const SurfaceFamily& f, const Window& w, int n);
CharacteristicReport characteristic(const SurfaceFamily& f, const LightlikeLocus& line, int n);

}  // namespace zmc
