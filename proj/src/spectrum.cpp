#include "sarsim/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sarsim/errors.hpp"

namespace sarsim {
namespace {

void require_positive_k(double k, const char* what) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw DomainError(std::string(what) + ": wavenumber must be positive, got " +
                      std::to_string(k));
  }
}

double pierson_moskowitz(double k, const SpectrumParams& p) {
  const double r = p.k_p / k;
  return std::exp(-1.25 * r * r);
}

double jonswap(double k, const SpectrumParams& p) {
  const double d = std::sqrt(k / p.k_p) - 1.0;
  const double exponent = std::exp(-d * d / (2.0 * p.peak_width * p.peak_width));
  return std::pow(p.peak_enhancement, exponent);
}

}  // namespace

double friction_velocity(double wind_speed_10m, double inverse_wave_age, double gravity) {
  using C = ElfouhailyConstants;
  const double z0 = C::kRoughnessCoefficient * wind_speed_10m * wind_speed_10m / gravity *
                    std::pow(inverse_wave_age, C::kRoughnessWaveAgeExponent);
  return C::kVonKarman * wind_speed_10m / std::log(C::kReferenceHeight / z0);
}

SpectrumParams SpectrumParams::make(double wind_speed_10m, double wind_direction,
                                    double inverse_wave_age, double gravity) {
  if (!(wind_speed_10m > 0.0)) throw ConfigError("spectrum: wind_speed_10m must be > 0");
  if (!(inverse_wave_age >= 0.84 && inverse_wave_age <= 5.0)) {
    throw ConfigError("spectrum: inverse wave age must lie in [0.84, 5]");
  }
  if (!(gravity > 0.0)) throw ConfigError("spectrum: gravity must be > 0");

  SpectrumParams p;
  p.wind_speed_10m = wind_speed_10m;
  p.wind_direction = wind_direction;
  p.inverse_wave_age = inverse_wave_age;
  p.gravity = gravity;

  const double k0 = gravity / (wind_speed_10m * wind_speed_10m);
  p.k_p = k0 * inverse_wave_age * inverse_wave_age;
  p.c_p = phase_speed(p.k_p, p);
  p.alpha_p = 6e-3 * std::sqrt(inverse_wave_age);
  p.peak_enhancement =
      inverse_wave_age < 1.0 ? 1.7 : 1.7 + 6.0 * std::log10(inverse_wave_age);
  p.peak_width = 0.08 * (1.0 + 4.0 / std::pow(inverse_wave_age, 3));

  p.friction_velocity = sarsim::friction_velocity(wind_speed_10m, inverse_wave_age, gravity);
  const double ratio = p.friction_velocity / p.c_m;
  p.alpha_m = ratio <= 1.0 ? 1e-2 * (1.0 + std::log(ratio)) : 1e-2 * (1.0 + 3.0 * std::log(ratio));
  return p;
}

double phase_speed(double k, const SpectrumParams& p) {
  require_positive_k(k, "phase_speed");
  const double r = k / p.k_m;
  return std::sqrt(p.gravity / k * (1.0 + r * r));
}

double long_wave_curvature(double k, const SpectrumParams& p) {
  require_positive_k(k, "long_wave_curvature");
  const double c = phase_speed(k, p);
  const double tail = std::exp(-p.inverse_wave_age / std::sqrt(10.0) * (std::sqrt(k / p.k_p) - 1.0));
  return 0.5 * p.alpha_p * (p.c_p / c) * pierson_moskowitz(k, p) * jonswap(k, p) * tail;
}

double short_wave_curvature(double k, const SpectrumParams& p) {
  require_positive_k(k, "short_wave_curvature");
  const double c = phase_speed(k, p);
  const double d = k / p.k_m - 1.0;
  // L_PM J_p kept inside B_h as in the unified spectrum's F_m factor.
  return 0.5 * p.alpha_m * (p.c_m / c) * pierson_moskowitz(k, p) * jonswap(k, p) *
         std::exp(-0.25 * d * d);
}

double omnidirectional_spectrum(double k, const SpectrumParams& p) {
  require_positive_k(k, "omnidirectional_spectrum");
  return (long_wave_curvature(k, p) + short_wave_curvature(k, p)) / (k * k * k);
}

double spreading_ratio(double k, const SpectrumParams& p) {
  require_positive_k(k, "spreading_ratio");
  using C = ElfouhailyConstants;
  const double c = phase_speed(k, p);
  const double a_m = C::kSpreadAmPerUstar * p.friction_velocity / p.c_m;
  return std::tanh(C::kSpreadA0 + C::kSpreadAp * std::pow(c / p.c_p, 2.5) +
                   a_m * std::pow(p.c_m / c, 2.5));
}

double spreading(double k, double theta, const SpectrumParams& p) {
  const double delta = spreading_ratio(k, p);
  return (1.0 + delta * std::cos(2.0 * theta)) / (2.0 * std::numbers::pi);
}

double cartesian_spectrum(double kx, double ky, const SpectrumParams& p) {
  const double k = std::hypot(kx, ky);
  require_positive_k(k, "cartesian_spectrum");
  const double theta = std::atan2(ky, kx) - p.wind_direction;
  return omnidirectional_spectrum(k, p) * spreading(k, theta, p) / k;
}

}  // namespace sarsim
