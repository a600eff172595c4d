#include "sarsim/sea_surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "sarsim/errors.hpp"
#include "sarsim/random.hpp"

namespace sarsim {

using cplx = std::complex<double>;

double Harmonic::kx() const { return k * std::cos(theta); }
double Harmonic::ky() const { return k * std::sin(theta); }

double dispersion(double k, const SpectrumParams& params) {
  if (!(k > 0.0)) throw DomainError("dispersion: wavenumber must be positive");
  const double r = k / params.k_m;
  return std::sqrt(params.gravity * k * (1.0 + r * r));
}

std::vector<Harmonic> sample_components(const SpectrumParams& params, const GridSpec& grid,
                                        const SurfaceSampling& sampling, std::uint64_t seed) {
  grid.validate();
  if (sampling.wavenumber_bins < 16 || sampling.direction_bins < 16) {
    throw ConfigError("sea_surface: wavenumber and direction bins must be >= 16");
  }
  const double nyquist = std::numbers::pi / std::max(grid.dx, grid.dy);
  const double k_lo = sampling.k_min > 0.0
                          ? sampling.k_min
                          : 2.0 * std::numbers::pi / std::max(grid.extent_x(), grid.extent_y());
  double k_hi = sampling.k_max > 0.0 ? sampling.k_max : nyquist;
  if (k_hi > nyquist) {
    std::ostringstream msg;
    msg << "sea_surface: k_max " << k_hi << " rad/m exceeds grid Nyquist " << nyquist
        << " rad/m; band truncated";
    log_warning(msg.str());
    k_hi = nyquist;
  }
  if (!(k_hi > k_lo)) throw ConfigError("sea_surface: empty wavenumber band");

  const std::size_t nk = sampling.wavenumber_bins;
  const std::size_t nt = sampling.direction_bins;
  const double log_step = std::log(k_hi / k_lo) / static_cast<double>(nk);
  const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(nt);
  const Philox4x32 rng(seed);

  std::vector<Harmonic> out;
  out.reserve(nk * nt);
  for (std::size_t i = 0; i < nk; ++i) {
    const double lo = k_lo * std::exp(log_step * static_cast<double>(i));
    const double hi = k_lo * std::exp(log_step * static_cast<double>(i + 1));
    const double k = std::sqrt(lo * hi);
    const double dk = hi - lo;
    const double s = omnidirectional_spectrum(k, params);
    const double omega = dispersion(k, params);
    for (std::size_t j = 0; j < nt; ++j) {
      const double theta = (static_cast<double>(j) + 0.5) * dtheta;
      const double d = spreading(k, theta - params.wind_direction, params);
      Harmonic h;
      h.k = k;
      h.theta = theta;
      h.omega = omega;
      h.amplitude = std::sqrt(2.0 * s * d * dk * dtheta);
      h.phase = 2.0 * std::numbers::pi * rng.uniform(rng_stream::kSeaPhases, i * nt + j);
      out.push_back(h);
    }
  }
  return out;
}

void sum_harmonics(const GridSpec& grid, std::span<const Harmonic> components, double t,
                   std::span<const std::vector<cplx>> weights, std::span<Grid> out) {
  if (weights.size() != out.size()) throw ConfigError("sum_harmonics: weights/outputs mismatch");
  const std::size_t n_out = out.size();
  for (std::size_t m = 0; m < n_out; ++m) {
    if (weights[m].size() != components.size()) {
      throw ConfigError("sum_harmonics: weight array size mismatch");
    }
    out[m] = grid.make_grid();
  }

  std::vector<double> ex_re(grid.nx), ex_im(grid.nx);
  std::vector<cplx> coef(n_out);
  for (std::size_t c = 0; c < components.size(); ++c) {
    const Harmonic& h = components[c];
    const double kx = h.kx();
    const double ky = h.ky();
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double a = kx * grid.x(i);
      ex_re[i] = std::cos(a);
      ex_im[i] = std::sin(a);
    }
    const cplx temporal = std::polar(1.0, h.phase - h.omega * t);
    for (std::size_t j = 0; j < grid.ny; ++j) {
      const cplx ey = std::polar(1.0, ky * grid.y(j)) * temporal;
      for (std::size_t m = 0; m < n_out; ++m) coef[m] = weights[m][c] * ey;
      for (std::size_t m = 0; m < n_out; ++m) {
        const double cr = coef[m].real();
        const double ci = coef[m].imag();
        if (cr == 0.0 && ci == 0.0) continue;
        double* row = out[m].row(j).data();
        for (std::size_t i = 0; i < grid.nx; ++i) row[i] += cr * ex_re[i] - ci * ex_im[i];
      }
    }
  }
}

SeaSurfaceRealization evaluate_components(const GridSpec& grid, std::vector<Harmonic> components,
                                          double t, double incidence, unsigned fields) {
  grid.validate();
  const std::size_t n = components.size();
  std::vector<std::vector<cplx>> weights;
  weights.emplace_back(n);
  if (fields & kSlopes) {
    weights.emplace_back(n);
    weights.emplace_back(n);
  }
  if (fields & kOrbitalVelocity) weights.emplace_back(n);

  const double sin_inc = std::sin(incidence);
  const double cos_inc = std::cos(incidence);
  for (std::size_t c = 0; c < n; ++c) {
    const Harmonic& h = components[c];
    std::size_t m = 0;
    weights[m++][c] = h.amplitude;
    if (fields & kSlopes) {
      weights[m++][c] = cplx(0.0, h.kx() * h.amplitude);
      weights[m++][c] = cplx(0.0, h.ky() * h.amplitude);
    }
    if (fields & kOrbitalVelocity) {
      // Linear theory: horizontal velocity omega*eta along the propagation
      // direction, vertical velocity d(eta)/dt. Projected on (0, -sin, cos).
      weights[m][c] = h.omega * h.amplitude * cplx(-sin_inc * std::sin(h.theta), -cos_inc);
    }
  }

  std::vector<Grid> out(weights.size());
  sum_harmonics(grid, components, t, weights, out);

  SeaSurfaceRealization r;
  r.grid = grid;
  r.time = t;
  r.incidence = incidence;
  std::size_t m = 0;
  r.elevation = std::move(out[m++]);
  if (fields & kSlopes) {
    r.slope_x = std::move(out[m++]);
    r.slope_y = std::move(out[m++]);
  } else {
    r.slope_x = grid.make_grid();
    r.slope_y = grid.make_grid();
  }
  r.orbital_velocity_radial = (fields & kOrbitalVelocity) ? std::move(out[m]) : grid.make_grid();
  r.components = std::move(components);
  return r;
}

SeaSurfaceRealization synthesize(const SpectrumParams& params, const GridSpec& grid,
                                 const SurfaceSampling& sampling, double t, std::uint64_t seed,
                                 double incidence, unsigned fields) {
  auto components = sample_components(params, grid, sampling, seed);
  SeaSurfaceRealization r = evaluate_components(grid, std::move(components), t, incidence, fields);
  r.seed = seed;
  return r;
}

double component_variance(std::span<const Harmonic> components) {
  double v = 0.0;
  for (const Harmonic& h : components) v += 0.5 * h.amplitude * h.amplitude;
  return v;
}

}  // namespace sarsim
