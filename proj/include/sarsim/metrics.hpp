#pragma once

#include <string>

#include "sarsim/sar_imaging.hpp"

namespace sarsim {

/// Score reported when the estimate equals the reference exactly.
inline constexpr double kIdenticalScoreDb = 999.0;

/// 10 log10(max(ref)^2 / MSE). Throws ConfigError on a shape mismatch.
double psnr(const IntensityImage& reference, const IntensityImage& estimate);

/// 10 log10(sum ref^2 / sum (ref - est)^2).
double smse(const IntensityImage& reference, const IntensityImage& estimate);

struct ScoreReport {
  double psnr_db = 0.0;
  double smse_db = 0.0;
  std::string reference_id;
  std::string estimate_id;
};

ScoreReport score(const IntensityImage& reference, const IntensityImage& estimate,
                  std::string reference_id = {}, std::string estimate_id = {});

}  // namespace sarsim
