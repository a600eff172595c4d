#include "sarsim/sar_imaging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sarsim/errors.hpp"

namespace sarsim {
namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// Integer block size for aggregating facets into pixels.
std::size_t block_factor(double resolution, double facet, const char* axis) {
  const double ratio = resolution / facet;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
    throw ConfigError(std::string("render: ") + axis +
                      " resolution must be an integer multiple of the facet size");
  }
  return static_cast<std::size_t>(rounded);
}

Grid block_mean(const Grid& g, std::size_t fx, std::size_t fy) {
  const std::size_t w = g.width() / fx;
  const std::size_t h = g.height() / fy;
  Grid out(w, h);
  const double norm = 1.0 / static_cast<double>(fx * fy);
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < w; ++i) {
      double s = 0.0;
      for (std::size_t b = 0; b < fy; ++b) {
        for (std::size_t a = 0; a < fx; ++a) s += g(i * fx + a, j * fy + b);
      }
      out(i, j) = s * norm;
    }
  }
  return out;
}

}  // namespace

double SarGeometry::radar_wavenumber() const {
  return 2.0 * kPi * carrier_frequency / kSpeedOfLight;
}

double SarGeometry::slant_range() const { return altitude / std::cos(incidence); }

void SarGeometry::validate() const {
  if (!(incidence > 0.0 && incidence < 0.5 * kPi)) {
    throw ConfigError("radar: incidence must lie in (0, pi/2)");
  }
  if (!(altitude > 0.0)) throw ConfigError("radar: altitude must be positive");
  if (!(platform_velocity > 0.0)) throw ConfigError("radar: platform velocity must be positive");
  if (!(carrier_frequency > 0.0)) throw ConfigError("radar: carrier frequency must be positive");
  if (!(azimuth_resolution > 0.0) || !(range_resolution > 0.0)) {
    throw ConfigError("radar: resolutions must be positive");
  }
}

void IntensityImage::validate() const {
  for (double v : pixels.values()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw StructuralError("image: pixels must be finite and non-negative");
    }
  }
}

double bragg_coefficient(double mu, Polarization pol, cplx eps) {
  const double s = std::sin(mu);
  const double c = std::cos(mu);
  const cplx root = std::sqrt(eps - s * s);
  cplx g;
  if (pol == Polarization::kHH) {
    const cplx d = c + root;
    g = (eps - 1.0) / (d * d);
  } else {
    const cplx d = eps * c + root;
    g = (eps - 1.0) * (eps * (1.0 + s * s) - s * s) / (d * d);
  }
  return std::norm(g);
}

cplx modulation_transfer(const Harmonic& h, const SarGeometry& geom,
                         const ScatteringOptions& options) {
  const double k_sep = options.separation_wavenumber > 0.0 ? options.separation_wavenumber
                                                           : geom.radar_wavenumber() / 10.0;
  if (h.k >= k_sep || h.k <= 0.0) return 0.0;
  const double k_look = h.ky();  // ground-range component
  const double look2 = (k_look * k_look) / (h.k * h.k);
  const double mu = options.relaxation_rate;
  const double w = h.omega;
  cplx m = 4.5 * h.k * w * cplx(w, -mu) / (w * w + mu * mu) * look2;
  if (options.include_tilt_mtf) {
    const double th = geom.incidence;
    const double gain = geom.polarization == Polarization::kVV
                            ? 4.0 / (std::tan(th) * (1.0 + std::sin(th) * std::sin(th)))
                            : 8.0 / std::sin(2.0 * th);
    m += cplx(0.0, gain * k_look);
  }
  return m;
}

NrcsResult nrcs(const FacetSample& facet, const SarGeometry& geom, const SpectrumParams& params,
                const ScatteringOptions& options) {
  NrcsResult out;
  const double st = std::sin(geom.incidence);
  const double ct = std::cos(geom.incidence);
  const double norm = std::sqrt(1.0 + facet.slope_x * facet.slope_x + facet.slope_y * facet.slope_y);
  const double nx = -facet.slope_x / norm;
  const double ny = -facet.slope_y / norm;
  const double nz = 1.0 / norm;
  // Unit vector from the facet towards the radar.
  const double lx = 0.0, ly = -st, lz = ct;
  const double cos_mu = nx * lx + ny * ly + nz * lz;
  out.local_incidence = std::acos(std::clamp(cos_mu, -1.0, 1.0));
  if (!(cos_mu > 0.0 && cos_mu < 1.0 - 1e-12)) {
    out.shadowed = true;
    return out;
  }
  const double sin_mu = std::sqrt(1.0 - cos_mu * cos_mu);

  // Bragg wave vector along the horizontal part of the in-plane look direction.
  const double tx = lx - cos_mu * nx;
  const double ty = ly - cos_mu * ny;
  const double th = std::hypot(tx, ty);
  if (!(th > 0.0)) {
    out.shadowed = true;
    return out;
  }
  const double k_e = geom.radar_wavenumber();
  const double k_bragg = 2.0 * k_e * sin_mu;
  const double kbx = k_bragg * tx / th;
  const double kby = k_bragg * ty / th;

  const double w = cartesian_spectrum(kbx, kby, params);
  const double t2 = bragg_coefficient(out.local_incidence, geom.polarization, options.permittivity);
  double bracket = 1.0 + facet.modulation;
  if (bracket < 0.0) {
    bracket = 0.0;
    out.clamped = true;
  }
  const double c2 = cos_mu * cos_mu;
  out.sigma = 8.0 * kPi * k_e * k_e * k_e * k_e * c2 * c2 * w * t2 * bracket;
  return out;
}

BunchingResult velocity_bunching(const IntensityImage& image, const Grid& u_r,
                                 const SarGeometry& geom) {
  if (!image.pixels.same_shape(u_r)) {
    throw ConfigError("velocity_bunching: image and velocity grids differ");
  }
  const double r_over_v = geom.slant_range() / geom.platform_velocity;
  const std::size_t w = image.width();
  const std::size_t h = image.height();

  BunchingResult out;
  out.image = image;
  out.image.pixels = Grid(w, h);
  double total = 0.0;
  std::vector<double> edge(w + 1);
  for (std::size_t j = 0; j < h; ++j) {
    double* dst = out.image.pixels.row(j).data();
    // Displacement [pixels] at the azimuth cell edges, interpolated between centres.
    const auto shift = [&](std::size_t i) { return r_over_v * u_r(i, j) / image.dx; };
    edge[0] = shift(0);
    edge[w] = shift(w - 1);
    for (std::size_t i = 1; i < w; ++i) edge[i] = 0.5 * (shift(i - 1) + shift(i));

    for (std::size_t i = 0; i < w; ++i) {
      const double v = image.pixels(i, j);
      total += v;
      if (v == 0.0) continue;
      // Cell i covers [i - 1/2, i + 1/2); its displaced footprint is spread
      // uniformly over the bins it overlaps. A uniform shift reduces this to a
      // two-bin linear splat; a stretched footprint covers every bin in between.
      double a = static_cast<double>(i) - 0.5 + edge[i];
      double b = static_cast<double>(i) + 0.5 + edge[i + 1];
      if (b < a) std::swap(a, b);
      const double len = b - a;
      const auto deposit = [&](long k, double amount) {
        if (k >= 0 && k < static_cast<long>(w)) {
          dst[k] += amount;
        } else {
          out.dropped_intensity += amount;
        }
      };
      if (len < 1e-12) {
        deposit(static_cast<long>(std::floor(a + 0.5)), v);
        continue;
      }
      const long first = static_cast<long>(std::floor(a + 0.5));
      const long last = static_cast<long>(std::floor(b + 0.5));
      double placed = 0.0;
      long tail = first;
      for (long k = first; k <= last; ++k) {
        const double lo = std::max(a, static_cast<double>(k) - 0.5);
        const double hi = std::min(b, static_cast<double>(k) + 0.5);
        if (hi <= lo) continue;
        const double amount = v * (hi - lo) / len;
        placed += amount;
        deposit(k, amount);
        tail = k;
      }
      // Rounding remainder goes to the last bin touched so the sum is exact.
      deposit(tail, v - placed);
    }
  }
  out.dropped_fraction = total > 0.0 ? out.dropped_intensity / total : 0.0;
  out.image.metadata["velocity_bunching.dropped_fraction"] = fmt(out.dropped_fraction);
  return out;
}

RenderResult render(const SeaSurfaceRealization& surface, const SarGeometry& geom,
                    const SpectrumParams& params, const ScatteringOptions& options) {
  geom.validate();
  const GridSpec& grid = surface.grid;
  grid.validate();
  const std::size_t fx = block_factor(geom.azimuth_resolution, grid.dx, "azimuth");
  const std::size_t fy = block_factor(geom.range_resolution, grid.dy, "range");
  if (grid.nx % fx != 0 || grid.ny % fy != 0) {
    throw ConfigError("render: facet grid must hold a whole number of image pixels");
  }

  // Modulation sum over the long-wave harmonics already in the realization.
  std::vector<std::complex<double>> weights(surface.components.size());
  for (std::size_t c = 0; c < weights.size(); ++c) {
    const Harmonic& hc = surface.components[c];
    weights[c] = modulation_transfer(hc, geom, options) * hc.amplitude;
  }
  std::vector<std::vector<std::complex<double>>> wlist{std::move(weights)};
  std::vector<Grid> modulation(1);
  sum_harmonics(grid, surface.components, surface.time, wlist, modulation);

  RenderResult result;
  RenderStats& stats = result.stats;
  Grid sigma = grid.make_grid();
  for (std::size_t j = 0; j < grid.ny; ++j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const FacetSample f{surface.slope_x(i, j), surface.slope_y(i, j), modulation[0](i, j)};
      const NrcsResult r = nrcs(f, geom, params, options);
      sigma(i, j) = r.sigma;
      stats.shadowed_facets += r.shadowed ? 1 : 0;
      stats.clamped_facets += r.clamped ? 1 : 0;
    }
  }
  stats.facets = grid.nx * grid.ny;
  if (stats.clamped_facets > 0) {
    std::ostringstream msg;
    msg << "render: modulation bracket clamped at 0 on " << stats.clamped_facets << " of "
        << stats.facets << " facets";
    log_warning(msg.str());
  }

  IntensityImage image;
  image.pixels = block_mean(sigma, fx, fy);
  image.dx = geom.azimuth_resolution;
  image.dy = geom.range_resolution;
  if (options.velocity_bunching) {
    const Grid u_r = block_mean(surface.orbital_velocity_radial, fx, fy);
    BunchingResult vb = velocity_bunching(image, u_r, geom);
    image = std::move(vb.image);
    stats.dropped_fraction = vb.dropped_fraction;
  }

  auto& md = image.metadata;
  md["seed"] = std::to_string(surface.seed);
  md["time"] = fmt(surface.time);
  md["wind_speed_10m"] = fmt(params.wind_speed_10m);
  md["wind_direction"] = fmt(params.wind_direction);
  md["inverse_wave_age"] = fmt(params.inverse_wave_age);
  md["altitude"] = fmt(geom.altitude);
  md["platform_velocity"] = fmt(geom.platform_velocity);
  md["carrier_frequency"] = fmt(geom.carrier_frequency);
  md["incidence"] = fmt(geom.incidence);
  md["polarization"] = geom.polarization == Polarization::kVV ? "VV" : "HH";
  md["relaxation_rate"] = fmt(options.relaxation_rate);
  md["facet_dx"] = fmt(grid.dx);
  md["facet_dy"] = fmt(grid.dy);
  md["shadowed_facets"] = std::to_string(stats.shadowed_facets);
  md["clamped_facets"] = std::to_string(stats.clamped_facets);
  result.image = std::move(image);
  return result;
}

}  // namespace sarsim
