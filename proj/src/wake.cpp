#include "sarsim/wake.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "sarsim/errors.hpp"
#include "sarsim/quadrature.hpp"

namespace sarsim {
namespace {

constexpr double kPi = std::numbers::pi;

double gaussian_filter(double k, double k_f) {
  if (k_f <= 0.0) return 1.0;
  const double r = k / k_f;
  return std::exp(-0.5 * r * r);
}

double dkappa_dtau(double tau, double k0, const SteadyWave& w) {
  const double s = std::sqrt(k0 * k0 * k0 * k0 + 4.0 * k0 * k0 * tau * tau);
  return k0 * k0 * tau / (s * w.kappa);
}

// Common factor of the elevation integrand: Jz(k) / (kappa (1 + tau^2/k^2)).
double radiation_weight(double tau, const SteadyWave& w, double draft) {
  const double sin2 = (tau * tau) / (w.k * w.k);
  return hull_depth_factor(w.k, draft) / (w.kappa * (1.0 + sin2));
}

struct Envelope {
  double tau_max = 0.0;
  double peak = 0.0;
};

// Scans an envelope on a geometric tau lattice for its peak and the first
// point past the peak where it falls below cutoff * peak.
Envelope scan_envelope(const std::function<double(double)>& env, double k0, double cutoff) {
  Envelope out;
  double tau = 1e-4 * k0;
  const double stop = 1e12 * k0;
  double peak_tau = tau;
  for (; tau < stop; tau *= 1.02) {
    const double v = env(tau);
    if (v > out.peak) {
      out.peak = v;
      peak_tau = tau;
    }
    if (tau > peak_tau && v < cutoff * out.peak) break;
  }
  out.tau_max = tau;
  return out;
}

// Adaptive Gauss-Legendre integration of f over [0, tau_max] on panels whose
// width follows the local oscillation rate.
double panel_quadrature(const std::function<double(double)>& f,
                        const std::function<double(double)>& rate, double tau_max, double k0,
                        double abs_tol_density, std::size_t max_panels, double x, double y) {
  const GaussLegendre& gl = gauss_legendre(16);
  auto rule = [&](double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * f(mid + half * gl.nodes[i]);
    return s * half;
  };

  std::size_t panels = 0;
  auto fail = [&](const char* why) {
    std::ostringstream msg;
    msg << "wake quadrature: " << why << " at x=" << x << " y=" << y;
    throw NumericalError(msg.str());
  };

  std::function<double(double, double, double, int)> refine = [&](double a, double b,
                                                                   double whole, int depth) {
    if (++panels > max_panels) fail("panel budget exhausted");
    const double m = 0.5 * (a + b);
    const double left = rule(a, m);
    const double right = rule(m, b);
    const double err = std::abs(left + right - whole);
    if (err <= abs_tol_density * (b - a)) return left + right;
    if (depth >= 30) fail("no convergence after maximum subdivisions");
    return refine(a, m, left, depth + 1) + refine(m, b, right, depth + 1);
  };

  double total = 0.0;
  double a = 0.0;
  while (a < tau_max) {
    const double growth = 0.25 * std::max(a, k0);
    const double width = std::min(2.0 * kPi / std::max(rate(a), 1e-300), growth);
    const double b = std::min(a + width, tau_max);
    total += refine(a, b, rule(a, b), 0);
    a = b;
  }
  return total;
}

}  // namespace

double ShipParams::speed() const { return froude * std::sqrt(gravity * length); }

double ShipParams::kelvin_wavenumber() const {
  const double u = speed();
  return gravity / (u * u);
}

void ShipParams::validate() const {
  if (!(length > 0.0) || !(beam > 0.0) || !(draft > 0.0)) {
    throw ConfigError("ship: length, beam and draft must be positive");
  }
  if (!(froude > 0.0 && froude < 1.5)) throw ConfigError("ship: Froude number must lie in (0, 1.5)");
  if (!(gravity > 0.0)) throw ConfigError("ship: gravity must be positive");
}

SteadyWave steady_wave(double tau, double k0) {
  const double k02 = k0 * k0;
  const double kappa2 = 0.5 * (k02 + std::sqrt(k02 * k02 + 4.0 * k02 * tau * tau));
  SteadyWave w;
  w.kappa = std::sqrt(kappa2);
  w.k = kappa2 / k0;
  return w;
}

double hull_depth_factor(double k, double draft) {
  const double kd = k * draft;
  if (kd < 0.5) {
    // sum_n (-kD)^n D 2 / (n! (n+1) (n+3))
    double term = 1.0;  // (-kD)^n / n!
    double sum = 0.0;
    for (int n = 0; n < 30; ++n) {
      sum += term * 2.0 / ((n + 1.0) * (n + 3.0));
      term *= -kd / (n + 1.0);
    }
    return draft * sum;
  }
  const double e = std::exp(-kd);
  const double k2 = k * k;
  const double k3 = k2 * k;
  return (1.0 - e) / k -
         (2.0 / k3 - e * (draft * draft / k + 2.0 * draft / k2 + 2.0 / k3)) / (draft * draft);
}

namespace {
// Antiderivatives in xi, evaluated between max(x, -a) and a.
template <typename F>
double over_wetted_hull(double x, double a, F antiderivative) {
  if (x >= a) return 0.0;
  const double lo = std::max(x, -a);
  return antiderivative(a) - antiderivative(lo);
}
}  // namespace

double hull_length_factor(double kappa, double x, double a) {
  return over_wetted_hull(x, a, [&](double xi) {
    const double ph = kappa * (x - xi);
    return xi * std::cos(ph) / kappa + std::sin(ph) / (kappa * kappa);
  });
}

double hull_length_factor_dx(double kappa, double x, double a) {
  return over_wetted_hull(x, a, [&](double xi) {
    const double ph = kappa * (x - xi);
    return -xi * std::sin(ph) + std::cos(ph) / kappa;
  });
}

double hull_length_factor_dxx(double kappa, double x, double a) {
  if (x >= a) return 0.0;
  // Moving lower limit contributes -x kappa inside the hull span.
  const double boundary = x > -a ? -x * kappa : 0.0;
  return -kappa * kappa * hull_length_factor(kappa, x, a) + boundary;
}

double michell_integrand(double tau, double x, double z, const ShipParams& ship) {
  if (z > 0.0) throw DomainError("michell_integrand: z must be <= 0");
  const double k0 = ship.kelvin_wavenumber();
  const SteadyWave w = steady_wave(tau, k0);
  const double k04 = k0 * k0 * k0 * k0;
  return -k04 * std::exp(w.k * z) * hull_length_factor(w.kappa, x, 0.5 * ship.length) *
         radiation_weight(tau, w, ship.draft);
}

double velocity_potential(double x, double y, double z, const ShipParams& ship,
                          const PointQuadrature& quad) {
  ship.validate();
  if (z > 0.0) throw DomainError("velocity_potential: z must be <= 0");
  const double k0 = ship.kelvin_wavenumber();
  const double a = 0.5 * ship.length;
  const double k04 = k0 * k0 * k0 * k0;

  auto envelope = [&](double tau) {
    const SteadyWave w = steady_wave(tau, k0);
    const double jx = 2.0 * (1.0 / (w.kappa * w.kappa) + a / w.kappa);
    return k04 * std::exp(w.k * z) * jx * std::abs(radiation_weight(tau, w, ship.draft)) *
           gaussian_filter(w.k, quad.filter_wavenumber);
  };
  const Envelope env = scan_envelope(envelope, k0, quad.envelope_cutoff);

  auto integrand = [&](double tau) {
    const SteadyWave w = steady_wave(tau, k0);
    return michell_integrand(tau, x, z, ship) * gaussian_filter(w.k, quad.filter_wavenumber) *
           std::cos(y * tau);
  };
  auto rate = [&](double tau) {
    const SteadyWave w = steady_wave(tau, k0);
    return (std::abs(x) + a) * dkappa_dtau(tau, k0, w) + std::abs(y);
  };
  const double integral =
      panel_quadrature(integrand, rate, env.tau_max, k0, quad.relative_tolerance * env.peak,
                       quad.max_panels, x, y);
  const double fr6 = std::pow(ship.froude, 6);
  return -(16.0 * ship.beam * ship.length / kPi) * ship.speed() * fr6 * integral;
}

double wake_elevation_at(double x, double y, const ShipParams& ship, const PointQuadrature& quad) {
  ship.validate();
  const double k0 = ship.kelvin_wavenumber();
  const double a = 0.5 * ship.length;
  const double prefactor = 16.0 * ship.beam / (kPi * ship.length * ship.length);

  auto envelope = [&](double tau) {
    const SteadyWave w = steady_wave(tau, k0);
    return (2.0 * a + 2.0 / w.kappa) * std::abs(radiation_weight(tau, w, ship.draft)) *
           gaussian_filter(w.k, quad.filter_wavenumber);
  };
  const Envelope env = scan_envelope(envelope, k0, quad.envelope_cutoff);

  auto integrand = [&](double tau) {
    const SteadyWave w = steady_wave(tau, k0);
    return hull_length_factor_dx(w.kappa, x, a) * radiation_weight(tau, w, ship.draft) *
           gaussian_filter(w.k, quad.filter_wavenumber) * std::cos(y * tau);
  };
  auto rate = [&](double tau) {
    const SteadyWave w = steady_wave(tau, k0);
    return (std::abs(x) + a) * dkappa_dtau(tau, k0, w) + std::abs(y);
  };
  return prefactor * panel_quadrature(integrand, rate, env.tau_max, k0,
                                      quad.relative_tolerance * env.peak, quad.max_panels, x, y);
}

namespace {

struct Lattice {
  std::vector<double> xs;  // ship frame, forward from midship
  std::vector<double> ys;  // ship frame, port positive
};

struct LatticeFields {
  Grid elevation;  // (i over xs, j over ys)
  Grid slope_x;
  Grid slope_y;
};

LatticeFields evaluate_lattice(const Lattice& lat, const ShipParams& ship, double k_f,
                               const WakeGridOptions& options) {
  const double k0 = ship.kelvin_wavenumber();
  const double a = 0.5 * ship.length;
  const double prefactor = 16.0 * ship.beam / (kPi * ship.length * ship.length);
  const std::size_t nx = lat.xs.size();
  const std::size_t ny = lat.ys.size();

  LatticeFields out{Grid(nx, ny), Grid(nx, ny), Grid(nx, ny)};

  // Only lattice columns at or behind the bow carry waves.
  std::size_t active = 0;
  while (active < nx && lat.xs[active] < a) ++active;
  if (active == 0) return out;

  double max_abs_x = 0.0, max_abs_y = 0.0;
  for (std::size_t i = 0; i < active; ++i) max_abs_x = std::max(max_abs_x, std::abs(lat.xs[i]));
  for (double y : lat.ys) max_abs_y = std::max(max_abs_y, std::abs(y));

  auto envelope = [&](double tau) {
    const SteadyWave w = steady_wave(tau, k0);
    return (2.0 * a + 2.0 / w.kappa) * std::abs(radiation_weight(tau, w, ship.draft)) *
           gaussian_filter(w.k, k_f);
  };
  const Envelope env = scan_envelope(envelope, k0, options.envelope_cutoff);

  // Composite Gauss-Legendre nodes, one panel per oscillation of the fastest phase.
  const GaussLegendre& gl = gauss_legendre(static_cast<int>(options.nodes_per_oscillation));
  std::vector<double> taus, weights;
  for (double lo = 0.0; lo < env.tau_max;) {
    const SteadyWave w = steady_wave(lo, k0);
    const double rate = (max_abs_x + a) * dkappa_dtau(lo, k0, w) + max_abs_y;
    const double width = std::min(2.0 * kPi / std::max(rate, 1e-300), 0.25 * std::max(lo, k0));
    const double hi = std::min(lo + width, env.tau_max);
    for (std::size_t n = 0; n < gl.nodes.size(); ++n) {
      taus.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.nodes[n]);
      weights.push_back(0.5 * (hi - lo) * gl.weights[n]);
    }
    lo = hi;
  }

  std::vector<double> gx(active), gxx(active);
  for (std::size_t t = 0; t < taus.size(); ++t) {
    const double tau = taus[t];
    const SteadyWave w = steady_wave(tau, k0);
    const double base =
        prefactor * weights[t] * radiation_weight(tau, w, ship.draft) * gaussian_filter(w.k, k_f);
    for (std::size_t i = 0; i < active; ++i) {
      gx[i] = base * hull_length_factor_dx(w.kappa, lat.xs[i], a);
      gxx[i] = base * hull_length_factor_dxx(w.kappa, lat.xs[i], a);
    }
    for (std::size_t j = 0; j < ny; ++j) {
      const double c = std::cos(tau * lat.ys[j]);
      const double s = -tau * std::sin(tau * lat.ys[j]);
      double* e = out.elevation.row(j).data();
      double* sx = out.slope_x.row(j).data();
      double* sy = out.slope_y.row(j).data();
      for (std::size_t i = 0; i < active; ++i) {
        e[i] += gx[i] * c;
        sx[i] += gxx[i] * c;
        sy[i] += gx[i] * s;
      }
    }
  }
  return out;
}

double bilinear(const Grid& g, double fi, double fj) {
  const double i0 = std::floor(fi);
  const double j0 = std::floor(fj);
  const double ti = fi - i0;
  const double tj = fj - j0;
  const auto clampi = [&](double v) {
    return static_cast<std::size_t>(std::clamp(v, 0.0, static_cast<double>(g.width() - 1)));
  };
  const auto clampj = [&](double v) {
    return static_cast<std::size_t>(std::clamp(v, 0.0, static_cast<double>(g.height() - 1)));
  };
  const std::size_t a0 = clampi(i0), a1 = clampi(i0 + 1);
  const std::size_t b0 = clampj(j0), b1 = clampj(j0 + 1);
  return (1 - ti) * (1 - tj) * g(a0, b0) + ti * (1 - tj) * g(a1, b0) + (1 - ti) * tj * g(a0, b1) +
         ti * tj * g(a1, b1);
}

}  // namespace

WakeField wake_elevation(const GridSpec& grid, const ShipParams& ship,
                         const ShipPlacement& placement, const WakeGridOptions& options) {
  grid.validate();
  ship.validate();
  const double k_f = options.filter_wavenumber > 0.0
                         ? options.filter_wavenumber
                         : kPi / (2.0 * std::max(grid.dx, grid.dy));
  const double a = 0.5 * ship.length;
  const double ch = std::cos(ship.heading);
  const double sh = std::sin(ship.heading);
  const double mid_x = placement.bow_x - a * ch;
  const double mid_y = placement.bow_y - a * sh;

  WakeField field{grid, grid.make_grid(), grid.make_grid(), grid.make_grid()};

  const bool aligned = std::abs(sh) < 1e-12 && ch > 0.0;
  if (aligned) {
    Lattice lat;
    for (std::size_t i = 0; i < grid.nx; ++i) lat.xs.push_back(grid.x(i) - mid_x);
    for (std::size_t j = 0; j < grid.ny; ++j) lat.ys.push_back(grid.y(j) - mid_y);
    LatticeFields f = evaluate_lattice(lat, ship, k_f, options);
    field.elevation = std::move(f.elevation);
    field.slope_x = std::move(f.slope_x);
    field.slope_y = std::move(f.slope_y);
    return field;
  }

  // Ship-aligned lattice covering the rotated scene, one facet spacing apart.
  const double h = std::min(grid.dx, grid.dy);
  double xs_lo = 1e300, xs_hi = -1e300, ys_lo = 1e300, ys_hi = -1e300;
  for (double cx : {grid.x(0) - grid.dx, grid.x(grid.nx - 1) + grid.dx}) {
    for (double cy : {grid.y(0) - grid.dy, grid.y(grid.ny - 1) + grid.dy}) {
      const double dx = cx - mid_x, dy = cy - mid_y;
      const double xs = dx * ch + dy * sh;
      const double ys = -dx * sh + dy * ch;
      xs_lo = std::min(xs_lo, xs);
      xs_hi = std::max(xs_hi, xs);
      ys_lo = std::min(ys_lo, ys);
      ys_hi = std::max(ys_hi, ys);
    }
  }
  Lattice lat;
  const auto nxs = static_cast<std::size_t>(std::ceil((xs_hi - xs_lo) / h)) + 1;
  const auto nys = static_cast<std::size_t>(std::ceil((ys_hi - ys_lo) / h)) + 1;
  for (std::size_t i = 0; i < nxs; ++i) lat.xs.push_back(xs_lo + h * static_cast<double>(i));
  for (std::size_t j = 0; j < nys; ++j) lat.ys.push_back(ys_lo + h * static_cast<double>(j));
  const LatticeFields f = evaluate_lattice(lat, ship, k_f, options);

  for (std::size_t j = 0; j < grid.ny; ++j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const double dx = grid.x(i) - mid_x, dy = grid.y(j) - mid_y;
      const double fi = (dx * ch + dy * sh - xs_lo) / h;
      const double fj = (-dx * sh + dy * ch - ys_lo) / h;
      const double z = bilinear(f.elevation, fi, fj);
      const double zx = bilinear(f.slope_x, fi, fj);
      const double zy = bilinear(f.slope_y, fi, fj);
      field.elevation(i, j) = z;
      field.slope_x(i, j) = zx * ch - zy * sh;
      field.slope_y(i, j) = zx * sh + zy * ch;
    }
  }
  return field;
}

SeaSurfaceRealization composite_surface(const SeaSurfaceRealization& sea, const WakeField& wake) {
  if (!(sea.grid == wake.grid) || !sea.elevation.same_shape(wake.elevation)) {
    throw ConfigError("composite_surface: sea and wake grids differ");
  }
  SeaSurfaceRealization out = sea;
  for (std::size_t n = 0; n < out.elevation.size(); ++n) {
    out.elevation[n] += wake.elevation[n];
    out.slope_x[n] += wake.slope_x[n];
    out.slope_y[n] += wake.slope_y[n];
  }
  return out;
}

}  // namespace sarsim
