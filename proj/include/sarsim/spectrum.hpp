#pragma once

// Elfouhaily et al. (1997) unified directional wave spectrum.
//
// Constants not carried by the curvature formulas themselves are frozen in
// ElfouhailyConstants below:
//   alpha_p   = 6e-3 * sqrt(Omega)                       long-wave Phillips-Kitaigorodskii
//   gamma     = 1.7 (0.84 <= Omega < 1), 1.7 + 6 log10(Omega) (1 <= Omega <= 5)
//   sigma     = 0.08 (1 + 4 Omega^-3)                    peak-enhancement width
//   Gamma     = exp(-(sqrt(k/k_p) - 1)^2 / (2 sigma^2))  J_p = gamma^Gamma
//   alpha_m   = 1e-2 (1 + ln(u*/c_m))     for u* <= c_m
//               1e-2 (1 + 3 ln(u*/c_m))   for u* >  c_m
//   k_m = 370 rad/m, c_m = 0.23 m/s
//   Delta(k)  = tanh(a0 + a_p (c/c_p)^2.5 + a_m (c_m/c)^2.5)
//               a0 = ln(2)/4, a_p = 4, a_m = 0.13 u*/c_m
//   u*        from U10 = (u*/kappa) ln(10/z0), z0 = 3.7e-5 (U10^2/g) Omega^0.9, kappa = 0.4

namespace sarsim {

struct ElfouhailyConstants {
  static constexpr double kCapillaryPeakWavenumber = 370.0;  // k_m [rad/m]
  static constexpr double kMinimumPhaseSpeed = 0.23;         // c_m [m/s]
  static constexpr double kVonKarman = 0.4;
  static constexpr double kRoughnessCoefficient = 3.7e-5;
  static constexpr double kRoughnessWaveAgeExponent = 0.9;
  static constexpr double kReferenceHeight = 10.0;  // [m]
  static constexpr double kSpreadA0 = 0.17328679513998632;  // ln(2)/4
  static constexpr double kSpreadAp = 4.0;
  static constexpr double kSpreadAmPerUstar = 0.13;
};

/// Wind-sea parameterisation. Build with make(); the derived fields are
/// filled in there and must not be edited independently.
struct SpectrumParams {
  double wind_speed_10m = 5.0;   // U10 [m/s]
  double wind_direction = 0.0;   // [rad] from the x (azimuth) axis
  double inverse_wave_age = 0.84;  // Omega
  double gravity = 9.81;
  double k_m = ElfouhailyConstants::kCapillaryPeakWavenumber;
  double c_m = ElfouhailyConstants::kMinimumPhaseSpeed;

  // Derived.
  double k_p = 0.0;
  double c_p = 0.0;
  double alpha_p = 0.0;
  double alpha_m = 0.0;
  double friction_velocity = 0.0;
  double peak_enhancement = 0.0;  // gamma
  double peak_width = 0.0;        // sigma

  /// Validates inputs (U10 > 0, 0.84 <= Omega <= 5) and derives k_p, c_p,
  /// alpha_p, u*, alpha_m. Throws ConfigError.
  static SpectrumParams make(double wind_speed_10m, double wind_direction = 0.0,
                             double inverse_wave_age = 0.84, double gravity = 9.81);
};

/// Friction velocity from the logarithmic drag law.
double friction_velocity(double wind_speed_10m, double inverse_wave_age, double gravity);

/// Gravity-capillary phase speed c(k) = sqrt(g/k (1 + (k/k_m)^2)).
double phase_speed(double k, const SpectrumParams& params);

double long_wave_curvature(double k, const SpectrumParams& params);
double short_wave_curvature(double k, const SpectrumParams& params);

/// S(k) = k^-3 (B_l + B_h)  [m^3].
double omnidirectional_spectrum(double k, const SpectrumParams& params);

/// Delta(k) of the spreading function.
double spreading_ratio(double k, const SpectrumParams& params);

/// D(k, theta) = (1 + Delta(k) cos 2theta) / 2pi, theta measured from the wind direction.
double spreading(double k, double theta, const SpectrumParams& params);

/// Cartesian variance density W(kx, ky) = S(k) D(k, theta) / k, with theta taken
/// from the wind direction. Integrates to the elevation variance over the plane.
double cartesian_spectrum(double kx, double ky, const SpectrumParams& params);

}  // namespace sarsim
