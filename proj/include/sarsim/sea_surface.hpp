#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "sarsim/grid.hpp"
#include "sarsim/spectrum.hpp"

namespace sarsim {

/// One term A cos(k (x cos theta + y sin theta) - omega t + phase) of the surface sum.
struct Harmonic {
  double k = 0.0;
  double theta = 0.0;  // propagation direction from the x axis [rad]
  double omega = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;

  double kx() const;
  double ky() const;
};

struct SurfaceSampling {
  std::size_t wavenumber_bins = 64;
  std::size_t direction_bins = 32;
  /// Band edges; zero selects 2pi / (max extent) and pi / (max facet size).
  double k_min = 0.0;
  double k_max = 0.0;
};

/// Which fields evaluate_components fills. Elevation is always computed.
enum SurfaceFields : unsigned {
  kElevationOnly = 0,
  kSlopes = 1u << 0,
  kOrbitalVelocity = 1u << 1,
  kAllFields = kSlopes | kOrbitalVelocity,
};

struct SeaSurfaceRealization {
  GridSpec grid;
  Grid elevation;
  Grid slope_x;
  Grid slope_y;
  /// Orbital velocity projected on the unit vector pointing from the surface
  /// to a radar on the -y side at the given incidence angle [m/s].
  Grid orbital_velocity_radial;
  double time = 0.0;
  double incidence = 0.0;
  std::uint64_t seed = 0;
  std::vector<Harmonic> components;
};

/// Deep-water gravity-capillary dispersion omega = sqrt(g k (1 + (k/k_m)^2)).
double dispersion(double k, const SpectrumParams& params);

/// Draws the harmonic amplitudes and random phases for one realization.
/// Throws ConfigError for fewer than 16 bins or an empty band.
std::vector<Harmonic> sample_components(const SpectrumParams& params, const GridSpec& grid,
                                        const SurfaceSampling& sampling, std::uint64_t seed);

/// Evaluates the harmonic sum (and its analytic derivatives) on the grid.
SeaSurfaceRealization evaluate_components(const GridSpec& grid, std::vector<Harmonic> components,
                                          double t, double incidence,
                                          unsigned fields = kAllFields);

SeaSurfaceRealization synthesize(const SpectrumParams& params, const GridSpec& grid,
                                 const SurfaceSampling& sampling, double t, std::uint64_t seed,
                                 double incidence, unsigned fields = kAllFields);

/// out[m](x, y) = Re sum_c weights[m][c] exp(i (kx x + ky y - omega t + phase)).
/// All weight arrays must have components.size() entries.
void sum_harmonics(const GridSpec& grid, std::span<const Harmonic> components, double t,
                   std::span<const std::vector<std::complex<double>>> weights,
                   std::span<Grid> out);

/// Variance represented by the components, sum A^2 / 2.
double component_variance(std::span<const Harmonic> components);

}  // namespace sarsim
