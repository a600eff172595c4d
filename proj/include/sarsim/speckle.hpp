#pragma once

#include <cstdint>

#include "sarsim/sar_imaging.hpp"

namespace sarsim {

/// How the log-variance of the unit-mean log-normal speckle depends on L.
enum class LookModel {
  /// sigma^2 = ln(1 + 1/L): the multiplicative noise has variance 1/L,
  /// the first two moments of L-look gamma speckle.
  kMomentMatched,
  /// sigma^2 = trigamma(L): the variance of log-intensity of L-look gamma speckle.
  kTrigamma,
};

struct SpeckleParams {
  int looks = 3;
  std::uint64_t seed = 0;
  LookModel model = LookModel::kMomentMatched;

  /// Throws ConfigError for looks < 1.
  void validate() const;
  double log_variance() const;               // sigma^2
  double log_mean() const { return -0.5 * log_variance(); }  // mu
};

/// Multiplicative noise V = exp(N(mu, sigma^2)) for pixel index n.
double speckle_sample(const SpeckleParams& params, std::uint64_t n);

/// G = F V, one independent draw per pixel (row-major index).
IntensityImage apply_speckle(const IntensityImage& image, const SpeckleParams& params);

}  // namespace sarsim
