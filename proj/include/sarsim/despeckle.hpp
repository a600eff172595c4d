#pragma once

#include <string>
#include <vector>

#include "sarsim/prox.hpp"
#include "sarsim/sar_imaging.hpp"
#include "sarsim/wavelet.hpp"

namespace sarsim {

struct DespeckleOptions {
  std::size_t levels = 3;
  std::string wavelet = "db4";
  BoundaryMode boundary = BoundaryMode::kPeriodization;
  /// Log floor; 0 selects default_log_floor().
  double log_floor = 0.0;
};

struct SubbandReport {
  std::size_t level = 0;  // 1 = finest; 0 for the image-domain TV solve
  int orientation = 0;    // 1..3; 0 for the image-domain TV solve
  FbReport fb;
};

struct DespeckleResult {
  IntensityImage image;
  std::vector<SubbandReport> reports;
  std::size_t floored_pixels = 0;
};

/// Robust noise scale of a detail plane: median(|c|) / 0.6745.
double robust_noise_scale(const Grid& plane);

/// Default Cauchy scale for a detail plane: robust_noise_scale / 2.
double default_cauchy_gamma(const Grid& plane);

/// Log -> DWT -> per-detail-plane forward-backward (approximation passed
/// through) -> inverse DWT -> exp with bias log_variance / 2.
/// For TV the forward-backward solve runs once on the whole log image.
DespeckleResult despeckle(const IntensityImage& noisy, const RegulariserSpec& reg,
                          double speckle_log_variance, const DespeckleOptions& options = {});

struct TuningResult {
  double best_value = 0.0;
  double best_psnr = 0.0;
  std::vector<double> values;
  std::vector<double> psnr;
};

/// Grid search over the regulariser's strength knob (gamma_scale for Cauchy,
/// lambda for L1/TV), maximising PSNR against the reference.
TuningResult tune_regulariser(const IntensityImage& noisy, const IntensityImage& reference,
                              const RegulariserSpec& reg, double speckle_log_variance,
                              const std::vector<double>& candidates,
                              const DespeckleOptions& options = {});

/// Writes the knob tuned by tune_regulariser into the spec.
void set_strength(RegulariserSpec& reg, double value);

}  // namespace sarsim
