#include "sarsim/despeckle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sarsim/errors.hpp"
#include "sarsim/metrics.hpp"

namespace sarsim {
namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

double robust_noise_scale(const Grid& plane) {
  std::vector<double> mags;
  mags.reserve(plane.size());
  for (double v : plane.values()) mags.push_back(std::abs(v));
  if (mags.empty()) return 0.0;
  const auto mid = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2);
  std::nth_element(mags.begin(), mid, mags.end());
  double median = *mid;
  if (mags.size() % 2 == 0) {
    median = 0.5 * (median + *std::max_element(mags.begin(), mid));
  }
  return median / 0.6745;
}

double default_cauchy_gamma(const Grid& plane) { return 0.5 * robust_noise_scale(plane); }

void set_strength(RegulariserSpec& reg, double value) {
  if (reg.kind == Regulariser::kCauchy) {
    reg.params.gamma_scale = value;
  } else {
    reg.params.lambda = value;
  }
}

DespeckleResult despeckle(const IntensityImage& noisy, const RegulariserSpec& reg,
                          double speckle_log_variance, const DespeckleOptions& options) {
  for (double v : noisy.pixels.values()) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError("despeckle: input pixels must be finite and non-negative");
    }
  }
  if (!(speckle_log_variance >= 0.0)) {
    throw ConfigError("despeckle: speckle log-variance must be non-negative");
  }
  const double floor = options.log_floor > 0.0 ? options.log_floor : default_log_floor(noisy);
  LogImage log_image = log_transform(noisy, floor);

  DespeckleResult result;
  result.floored_pixels = log_image.floored;
  Grid restored;

  if (reg.kind == Regulariser::kTV) {
    FbResult fb = forward_backward(log_image.values, reg);
    restored = std::move(fb.estimate);
    result.reports.push_back({0, 0, std::move(fb.report)});
  } else {
    SubbandPyramid pyramid =
        dwt2_forward(log_image.values, options.levels, options.wavelet, options.boundary);
    for (std::size_t l = 0; l < pyramid.levels; ++l) {
      for (int o = 1; o <= 3; ++o) {
        Grid& plane = pyramid.details[l].orientation(o);
        RegulariserSpec local = reg;
        if (reg.kind == Regulariser::kCauchy && !reg.params.gamma) {
          const double g = reg.params.gamma_scale * default_cauchy_gamma(plane);
          local.params.gamma = std::max(g, 1e-12);
        }
        FbResult fb = forward_backward(plane, local);
        plane = std::move(fb.estimate);
        result.reports.push_back({l + 1, o, std::move(fb.report)});
      }
    }
    restored = dwt2_inverse(pyramid);
  }

  result.image = exp_transform(restored, 0.5 * speckle_log_variance, noisy.dx, noisy.dy);
  result.image.metadata = noisy.metadata;
  auto& md = result.image.metadata;
  md["despeckle.regulariser"] = regulariser_name(reg.kind);
  md["despeckle.lambda"] = fmt(reg.params.lambda);
  md["despeckle.gamma"] = reg.params.gamma ? fmt(*reg.params.gamma) : "auto";
  md["despeckle.gamma_scale"] = fmt(reg.params.gamma_scale);
  md["despeckle.omega"] = reg.params.omega ? fmt(*reg.params.omega) : "auto";
  md["despeckle.levels"] = std::to_string(options.levels);
  md["despeckle.wavelet"] = options.wavelet;
  md["despeckle.log_variance"] = fmt(speckle_log_variance);
  md["despeckle.floored_pixels"] = std::to_string(result.floored_pixels);
  return result;
}

TuningResult tune_regulariser(const IntensityImage& noisy, const IntensityImage& reference,
                              const RegulariserSpec& reg, double speckle_log_variance,
                              const std::vector<double>& candidates,
                              const DespeckleOptions& options) {
  if (candidates.empty()) throw ConfigError("tune_regulariser: no candidate values");
  TuningResult out;
  out.best_psnr = -std::numeric_limits<double>::infinity();
  for (double value : candidates) {
    RegulariserSpec trial = reg;
    set_strength(trial, value);
    const DespeckleResult r = despeckle(noisy, trial, speckle_log_variance, options);
    const double score = psnr(reference, r.image);
    out.values.push_back(value);
    out.psnr.push_back(score);
    if (score > out.best_psnr) {
      out.best_psnr = score;
      out.best_value = value;
    }
  }
  return out;
}

}  // namespace sarsim
