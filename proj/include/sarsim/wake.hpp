#pragma once

#include "sarsim/grid.hpp"
#include "sarsim/sea_surface.hpp"

namespace sarsim {

/// Thin-ship hull with half-breadth y = (B/2)(1 - (2x/L)^2)(1 - (z/D)^2).
struct ShipParams {
  double length = 52.0;  // L [m]
  double beam = 5.7;     // B [m]
  double draft = 3.5;    // D [m]
  double froude = 0.5;   // Fr
  double heading = 0.0;  // [rad] from the azimuth (x) axis
  double gravity = 9.81;

  double speed() const;             // U_s = Fr sqrt(g L)
  double kelvin_wavenumber() const;  // k0 = g / U_s^2
  void validate() const;
};

/// Where the bow sits in scene coordinates.
struct ShipPlacement {
  double bow_x = 0.0;
  double bow_y = 0.0;
};

/// Free-wave solution of the steady dispersion relation for lateral
/// wavenumber tau: longitudinal wavenumber kappa with kappa^2 = k0 |k|.
struct SteadyWave {
  double kappa = 0.0;
  double k = 0.0;
};
SteadyWave steady_wave(double tau, double k0);

/// Integral over the draft of (1 - z^2/D^2) e^{k z}.
double hull_depth_factor(double k, double draft);

/// Integral of xi sin(kappa (x - xi)) over the part of the hull at or ahead of x
/// (xi in [max(x, -L/2), L/2]); zero ahead of the bow. Coordinates from midship.
double hull_length_factor(double kappa, double x, double half_length);
/// d/dx of hull_length_factor.
double hull_length_factor_dx(double kappa, double x, double half_length);
/// d2/dx2 of hull_length_factor.
double hull_length_factor_dxx(double kappa, double x, double half_length);

/// C(tau, x, z): phi = -(16 B L / pi) U_s Fr^6 Re int_0^inf C e^{i y tau} dtau.
/// x is measured forward from midship, z <= 0.
double michell_integrand(double tau, double x, double z, const ShipParams& ship);

struct PointQuadrature {
  /// Gaussian wavenumber filter scale; 0 disables the filter.
  double filter_wavenumber = 0.0;
  /// Integration stops where the integrand envelope drops below this fraction of its peak.
  double envelope_cutoff = 1e-8;
  double relative_tolerance = 1e-10;
  std::size_t max_panels = 2'000'000;
};

/// Velocity potential [m^2/s] at ship-frame point (x, y, z).
/// Throws NumericalError (with coordinates) if the panel quadrature fails to converge.
double velocity_potential(double x, double y, double z, const ShipParams& ship,
                          const PointQuadrature& quad = {});

/// Z = (U_s/g) dphi/dx at the surface, differentiated under the integral sign.
double wake_elevation_at(double x, double y, const ShipParams& ship,
                         const PointQuadrature& quad = {});

struct WakeField {
  GridSpec grid;
  Grid elevation;
  Grid slope_x;
  Grid slope_y;
};

struct WakeGridOptions {
  /// Gaussian facet filter exp(-(k/k_f)^2/2); 0 selects pi / (2 max(dx, dy)).
  double filter_wavenumber = 0.0;
  /// Integrand envelope cutoff relative to the filter peak (sets tau_max).
  double envelope_cutoff = 1e-8;
  std::size_t nodes_per_oscillation = 8;
};

/// Wake elevation and slopes on the scene grid. The ship frame is rotated by
/// ship.heading; headings aligned with the grid are evaluated directly on the
/// facets, others on a ship-aligned lattice and bilinearly resampled.
WakeField wake_elevation(const GridSpec& grid, const ShipParams& ship,
                         const ShipPlacement& placement, const WakeGridOptions& options = {});

/// Adds the wake's elevation and slopes to the sea. The wake's orbital velocity
/// is taken as zero. Throws ConfigError on grid mismatch.
SeaSurfaceRealization composite_surface(const SeaSurfaceRealization& sea, const WakeField& wake);

}  // namespace sarsim
