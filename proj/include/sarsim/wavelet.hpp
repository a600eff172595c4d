#pragma once

#include <string>
#include <vector>

#include "sarsim/grid.hpp"
#include "sarsim/sar_imaging.hpp"

namespace sarsim {

enum class BoundaryMode { kPeriodization };

/// Orthonormal compactly supported wavelet, given by its scaling filter.
struct Wavelet {
  std::string name;
  std::vector<double> lowpass;   // h
  std::vector<double> highpass;  // g[k] = (-1)^k h[L-1-k]

  /// "haar", "db2" or "db4". Throws ConfigError otherwise.
  static Wavelet by_name(const std::string& name);
};

BoundaryMode boundary_by_name(const std::string& name);
std::string boundary_name(BoundaryMode mode);

/// Detail planes of one decomposition level.
struct SubbandLevel {
  Grid horizontal;  // lowpass along x, highpass along y
  Grid vertical;    // highpass along x, lowpass along y
  Grid diagonal;    // highpass along both

  Grid& orientation(int i);  // i = 1, 2, 3
  const Grid& orientation(int i) const;
};

/// Multilevel decomposition; details[0] is the finest level.
struct SubbandPyramid {
  std::size_t levels = 0;
  std::vector<SubbandLevel> details;
  Grid approximation;
  std::string wavelet_name;
  BoundaryMode boundary_mode = BoundaryMode::kPeriodization;
  std::size_t width = 0;
  std::size_t height = 0;
};

struct LogImage {
  Grid values;
  std::size_t floored = 0;
};

/// g = ln(max(pixel, floor)). Throws ConfigError for floor <= 0.
LogImage log_transform(const IntensityImage& image, double floor);

/// Default floor: 1e-10 times the image maximum (1e-300 for an all-zero image).
double default_log_floor(const IntensityImage& image);

/// Largest exponent exp_transform will evaluate; larger values are clamped.
inline constexpr double kMaxExponent = 700.0;

/// pixel = exp(value + bias), exponent clamped at kMaxExponent.
IntensityImage exp_transform(const Grid& values, double bias, double dx = 1.0, double dy = 1.0);

/// Separable periodized multilevel 2-D DWT.
/// Each dimension must be divisible by 2^levels and at least 2^levels (L-1)
/// for a filter of length L. Throws ConfigError otherwise.
SubbandPyramid dwt2_forward(const Grid& image, std::size_t levels,
                            const std::string& wavelet_name = "db4",
                            BoundaryMode boundary = BoundaryMode::kPeriodization);

/// Throws StructuralError if plane shapes do not follow the dyadic schedule.
Grid dwt2_inverse(const SubbandPyramid& pyramid);

}  // namespace sarsim
