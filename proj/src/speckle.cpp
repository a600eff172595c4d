#include "sarsim/speckle.hpp"

#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <string>

#include "sarsim/errors.hpp"
#include "sarsim/random.hpp"

namespace sarsim {

void SpeckleParams::validate() const {
  if (looks < 1) throw ConfigError("speckle: number of looks must be >= 1");
}

double SpeckleParams::log_variance() const {
  validate();
  const double l = static_cast<double>(looks);
  return model == LookModel::kTrigamma ? boost::math::trigamma(l) : std::log1p(1.0 / l);
}

double speckle_sample(const SpeckleParams& params, std::uint64_t n) {
  const double var = params.log_variance();
  const Philox4x32 rng(params.seed);
  // One counter block yields two normals; even/odd pixels share it.
  const auto [z0, z1] = rng.normal_pair(rng_stream::kSpeckle, n / 2);
  const double z = (n % 2 == 0) ? z0 : z1;
  return std::exp(params.log_mean() + std::sqrt(var) * z);
}

IntensityImage apply_speckle(const IntensityImage& image, const SpeckleParams& params) {
  params.validate();
  for (double v : image.pixels.values()) {
    if (!(v >= 0.0)) throw ConfigError("speckle: input pixels must be non-negative");
  }
  const double var = params.log_variance();
  const double mu = -0.5 * var;
  const double sd = std::sqrt(var);
  const Philox4x32 rng(params.seed);

  IntensityImage out = image;
  const std::size_t n = out.pixels.size();
  for (std::size_t i = 0; i < n; i += 2) {
    const auto [z0, z1] = rng.normal_pair(rng_stream::kSpeckle, i / 2);
    out.pixels[i] *= std::exp(mu + sd * z0);
    if (i + 1 < n) out.pixels[i + 1] *= std::exp(mu + sd * z1);
  }
  out.metadata["speckle.looks"] = std::to_string(params.looks);
  out.metadata["speckle.seed"] = std::to_string(params.seed);
  out.metadata["speckle.model"] =
      params.model == LookModel::kTrigamma ? "trigamma" : "moment-matched";
  return out;
}

}  // namespace sarsim
