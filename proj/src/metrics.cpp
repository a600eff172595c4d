#include "sarsim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sarsim/errors.hpp"

namespace sarsim {
namespace {

void require_same_shape(const IntensityImage& a, const IntensityImage& b) {
  if (!a.pixels.same_shape(b.pixels) || a.pixels.empty()) {
    throw ConfigError("metrics: reference and estimate must have the same non-empty shape");
  }
}

double squared_error(const IntensityImage& a, const IntensityImage& b) {
  double s = 0.0;
  for (std::size_t n = 0; n < a.pixels.size(); ++n) {
    const double d = a.pixels[n] - b.pixels[n];
    s += d * d;
  }
  return s;
}

}  // namespace

double psnr(const IntensityImage& reference, const IntensityImage& estimate) {
  require_same_shape(reference, estimate);
  const double se = squared_error(reference, estimate);
  if (se == 0.0) return kIdenticalScoreDb;
  double peak = 0.0;
  for (double v : reference.pixels.values()) peak = std::max(peak, v);
  const double mse = se / static_cast<double>(reference.pixels.size());
  return 10.0 * std::log10(peak * peak / mse);
}

double smse(const IntensityImage& reference, const IntensityImage& estimate) {
  require_same_shape(reference, estimate);
  const double se = squared_error(reference, estimate);
  if (se == 0.0) return kIdenticalScoreDb;
  double energy = 0.0;
  for (double v : reference.pixels.values()) energy += v * v;
  return 10.0 * std::log10(energy / se);
}

ScoreReport score(const IntensityImage& reference, const IntensityImage& estimate,
                  std::string reference_id, std::string estimate_id) {
  return {psnr(reference, estimate), smse(reference, estimate), std::move(reference_id),
          std::move(estimate_id)};
}

}  // namespace sarsim
