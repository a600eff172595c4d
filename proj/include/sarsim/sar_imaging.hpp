#pragma once

#include <complex>
#include <map>
#include <string>

#include "sarsim/grid.hpp"
#include "sarsim/sea_surface.hpp"
#include "sarsim/spectrum.hpp"

namespace sarsim {

enum class Polarization { kVV, kHH };

/// Side-looking radar on the -y side of the scene, flying along +x (azimuth).
struct SarGeometry {
  double altitude = 4500.0;             // [m]
  double platform_velocity = 190.0;     // V [m/s]
  double carrier_frequency = 9.65e9;    // [Hz]
  double incidence = 0.6108652381980153;  // 35 deg
  Polarization polarization = Polarization::kVV;
  double azimuth_resolution = 2.0;  // [m]
  double range_resolution = 2.0;    // [m]

  static constexpr double kSpeedOfLight = 299'792'458.0;

  double radar_wavenumber() const;  // k_e = 2 pi f / c
  double slant_range() const;       // R = altitude / cos(incidence)
  void validate() const;
};

/// Two-scale model settings not fixed by the geometry.
struct ScatteringOptions {
  /// Sea-water relative permittivity at X band.
  std::complex<double> permittivity{49.0, -35.5};
  /// Hydrodynamic relaxation rate [1/s].
  double relaxation_rate = 0.5;
  /// Long/short wave divider; 0 selects k_e / 10.
  double separation_wavenumber = 0.0;
  /// Adds the tilt MTF to the modulation sum. Off by default because the
  /// local incidence angle already carries the facet tilt.
  bool include_tilt_mtf = false;
  /// Disables the velocity bunching step of render().
  bool velocity_bunching = true;
};

/// Non-negative raster with pixel spacing and a provenance record.
struct IntensityImage {
  Grid pixels;
  double dx = 1.0;
  double dy = 1.0;
  std::map<std::string, std::string> metadata;

  std::size_t width() const { return pixels.width(); }
  std::size_t height() const { return pixels.height(); }
  /// Throws StructuralError on negative or non-finite pixels.
  void validate() const;
};

/// First-order small-perturbation coefficient |T|^2 at incidence mu.
double bragg_coefficient(double mu, Polarization pol, std::complex<double> permittivity);

/// Modulation transfer function for a long-wave harmonic.
std::complex<double> modulation_transfer(const Harmonic& h, const SarGeometry& geom,
                                         const ScatteringOptions& options);

struct FacetSample {
  double slope_x = 0.0;
  double slope_y = 0.0;
  /// Long-wave modulation, the real-part term of the bracket in the NRCS.
  double modulation = 0.0;
};

struct NrcsResult {
  double sigma = 0.0;
  double local_incidence = 0.0;
  bool shadowed = false;
  bool clamped = false;
};

/// Two-scale NRCS of one facet:
/// 8 pi k_e^4 cos^4(mu) W(k_B) |T(mu)|^2 max(0, 1 + modulation).
NrcsResult nrcs(const FacetSample& facet, const SarGeometry& geom, const SpectrumParams& params,
                const ScatteringOptions& options = {});

struct BunchingResult {
  IntensityImage image;
  double dropped_intensity = 0.0;
  double dropped_fraction = 0.0;
};

/// Re-deposits each pixel at azimuth x + (R/V) u_r. The pixel's footprint is
/// displaced edge by edge and spread over the bins it lands on; for a uniform
/// shift this is a two-bin linear splat.
/// Intensity leaving the scene is dropped and reported.
BunchingResult velocity_bunching(const IntensityImage& image, const Grid& radial_velocity,
                                 const SarGeometry& geom);

struct RenderStats {
  std::size_t facets = 0;
  std::size_t shadowed_facets = 0;
  std::size_t clamped_facets = 0;
  double dropped_fraction = 0.0;
};

struct RenderResult {
  IntensityImage image;
  RenderStats stats;
};

/// Speckle-free intensity image: per-facet NRCS, block-averaged to the image
/// resolution, then velocity bunching.
RenderResult render(const SeaSurfaceRealization& surface, const SarGeometry& geom,
                    const SpectrumParams& params, const ScatteringOptions& options = {});

}  // namespace sarsim
