#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "sarsim/experiment.hpp"
#include "sarsim/sar_imaging.hpp"

using namespace sarsim;
using doctest::Approx;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

SeaSurfaceRealization small_sea(std::uint64_t seed, double origin_x = 0.0) {
  GridSpec g;
  g.nx = g.ny = 64;
  g.origin_x = origin_x;
  const SpectrumParams p = SpectrumParams::make(5.0, 45.0 * kDeg, 0.84);
  return synthesize(p, g, SurfaceSampling{}, 0.0, seed, SarGeometry{}.incidence);
}

IntensityImage ramp_image(std::size_t w, std::size_t h) {
  IntensityImage im;
  im.pixels = Grid(w, h);
  im.dx = im.dy = 2.0;
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < w; ++i) im.pixels(i, j) = 1.0 + 0.1 * i + 0.37 * ((i * 7 + j * 3) % 5);
  }
  return im;
}

}  // namespace

TEST_CASE("geometry") {
  SarGeometry g;
  CHECK(g.radar_wavenumber() == Approx(2 * std::numbers::pi * 9.65e9 / 299792458.0).epsilon(1e-15));
  CHECK(g.slant_range() >= g.altitude);
  g.incidence = 0.0;
  CHECK_THROWS_AS(g.validate(), ConfigError);
  g = SarGeometry{};
  g.platform_velocity = -1;
  CHECK_THROWS_AS(g.validate(), ConfigError);
}

TEST_CASE("Bragg coefficients reduce to known limits") {
  const std::complex<double> eps{49.0, -35.5};
  // Normal incidence: both reduce to the Fresnel reflectivity squared-magnitude form.
  const std::complex<double> r = (std::sqrt(eps) - 1.0) / (std::sqrt(eps) + 1.0);
  CHECK(bragg_coefficient(0.0, Polarization::kHH, eps) == Approx(std::norm(r)).epsilon(1e-13));
  CHECK(bragg_coefficient(0.0, Polarization::kVV, eps) == Approx(std::norm(r)).epsilon(1e-13));
  // Perfect conductor.
  const std::complex<double> metal{1e14, 0.0};
  for (double mu : {10.0, 35.0, 60.0}) {
    const double s = std::sin(mu * kDeg), c = std::cos(mu * kDeg);
    CHECK(bragg_coefficient(mu * kDeg, Polarization::kHH, metal) == Approx(1.0).epsilon(1e-6));
    CHECK(bragg_coefficient(mu * kDeg, Polarization::kVV, metal) ==
          Approx(std::pow((1 + s * s) / (c * c), 2)).epsilon(1e-6));
    CHECK(bragg_coefficient(mu * kDeg, Polarization::kVV, eps) >
          bragg_coefficient(mu * kDeg, Polarization::kHH, eps));
  }
}

TEST_CASE("flat facet NRCS and modulation bracket") {
  const SarGeometry g;
  const SpectrumParams p = SpectrumParams::make(5.0, 45.0 * kDeg, 0.84);
  const ScatteringOptions opt;
  const double ke = g.radar_wavenumber();
  const double kb = 2 * ke * std::sin(g.incidence);
  const double c = std::cos(g.incidence);
  const double expected = 8 * std::numbers::pi * std::pow(ke, 4) * std::pow(c, 4) *
                          cartesian_spectrum(0.0, -kb, p) *
                          bragg_coefficient(g.incidence, g.polarization, opt.permittivity);
  const NrcsResult flat = nrcs({}, g, p, opt);
  CHECK(flat.sigma == Approx(expected).epsilon(1e-12));
  CHECK(flat.local_incidence == Approx(g.incidence).epsilon(1e-14));

  CHECK(nrcs({0, 0, 0.25}, g, p, opt).sigma == Approx(1.25 * expected).epsilon(1e-12));
  const NrcsResult clamped = nrcs({0, 0, -1.5}, g, p, opt);
  CHECK(clamped.sigma == 0.0);
  CHECK(clamped.clamped);

  // A facet rising away from the radar faces it: local incidence drops by the tilt angle.
  const NrcsResult tilted = nrcs({0.0, 0.1, 0.0}, g, p, opt);
  CHECK(tilted.local_incidence == Approx(g.incidence - std::atan(0.1)).epsilon(1e-12));
  CHECK(tilted.sigma > flat.sigma);
  CHECK(nrcs({0.0, -5.0, 0.0}, g, p, opt).shadowed);
}

TEST_CASE("NRCS is non-negative and finite on random facets") {
  const SarGeometry g;
  const SpectrumParams p = SpectrumParams::make(7.0, 0.3, 0.84);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n05(0.0, 0.5);
  for (int n = 0; n < 20000; ++n) {
    const FacetSample f{n05(rng), n05(rng), n05(rng)};
    const NrcsResult r = nrcs(f, g, p);
    CHECK(r.sigma >= 0.0);
    CHECK(std::isfinite(r.sigma));
  }
}

TEST_CASE("velocity bunching: zero velocity is the identity") {
  const IntensityImage im = ramp_image(40, 6);
  const BunchingResult r = velocity_bunching(im, Grid(40, 6), SarGeometry{});
  CHECK(r.image.pixels == im.pixels);
  CHECK(r.dropped_intensity == 0.0);
}

TEST_CASE("velocity bunching: uniform shift is a two-bin linear splat") {
  const SarGeometry g;
  const IntensityImage im = ramp_image(40, 3);
  const double shift_px = 0.3;
  const Grid u(40, 3, shift_px * im.dx / (g.slant_range() / g.platform_velocity));
  const BunchingResult r = velocity_bunching(im, u, g);
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t i = 1; i < 40; ++i) {
      const double oracle = (1 - shift_px) * im.pixels(i, j) + shift_px * im.pixels(i - 1, j);
      CHECK(r.image.pixels(i, j) == Approx(oracle).epsilon(1e-12));
    }
    CHECK(r.image.pixels(0, j) == Approx((1 - shift_px) * im.pixels(0, j)).epsilon(1e-12));
  }
  double lost = 0.0;
  for (std::size_t j = 0; j < 3; ++j) lost += shift_px * im.pixels(39, j);
  CHECK(r.dropped_intensity == Approx(lost).epsilon(1e-12));
}

TEST_CASE("velocity bunching conserves intensity under strong strain") {
  const SarGeometry g;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni;
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t w = 96, h = 8;
    IntensityImage im;
    im.pixels = Grid(w, h);
    im.dx = im.dy = 2.0;
    Grid u(w, h);
    double total = 0.0;
    for (std::size_t n = 0; n < im.pixels.size(); ++n) {
      im.pixels[n] = uni(rng);
      total += im.pixels[n];
    }
    const double amp = 0.1 + 0.5 * uni(rng);
    for (std::size_t j = 0; j < h; ++j) {
      for (std::size_t i = 0; i < w; ++i) u(i, j) = amp * std::sin(0.3 * i + j) + 0.2 * gauss(rng);
    }
    const BunchingResult r = velocity_bunching(im, u, g);
    double kept = 0.0;
    for (double v : r.image.pixels.values()) {
      CHECK(v >= 0.0);
      kept += v;
    }
    CHECK(std::abs(kept + r.dropped_intensity - total) <= 1e-12 * total);
    CHECK(r.dropped_fraction == Approx(r.dropped_intensity / total).epsilon(1e-14));
  }
}

TEST_CASE("velocity bunching: sinusoidal velocity increases azimuth contrast") {
  const SarGeometry g;
  const std::size_t w = 128;
  IntensityImage im;
  im.pixels = Grid(w, 1, 1.0);
  im.dx = im.dy = 2.0;
  Grid u(w, 1);
  for (std::size_t i = 0; i < w; ++i) u(i, 0) = 0.02 * std::sin(2 * std::numbers::pi * i / 32.0);
  const BunchingResult r = velocity_bunching(im, u, g);
  double var = 0.0;
  for (std::size_t i = 16; i < w - 16; ++i) var += std::pow(r.image.pixels(i, 0) - 1.0, 2);
  CHECK(var > 1e-3);
  CHECK_THROWS_AS(velocity_bunching(im, Grid(4, 4), g), ConfigError);
}

TEST_CASE("render: deterministic, finite, bracket almost always positive") {
  const SpectrumParams p = SpectrumParams::make(5.0, 45.0 * kDeg, 0.84);
  const SeaSurfaceRealization s = small_sea(3);
  const RenderResult a = render(s, SarGeometry{}, p);
  const RenderResult b = render(s, SarGeometry{}, p);
  CHECK(a.image.pixels == b.image.pixels);
  CHECK_NOTHROW(a.image.validate());
  CHECK(a.stats.facets == 64 * 64);
  CHECK(static_cast<double>(a.stats.clamped_facets) <= 1e-3 * a.stats.facets);
  CHECK(a.image.metadata.at("seed") == "3");
}

TEST_CASE("render: facets finer than pixels are block averaged") {
  const SpectrumParams p = SpectrumParams::make(5.0, 45.0 * kDeg, 0.84);
  GridSpec g;
  g.nx = g.ny = 64;
  g.dx = g.dy = 1.0;
  SarGeometry geom;
  geom.azimuth_resolution = geom.range_resolution = 2.0;
  ScatteringOptions opt;
  opt.velocity_bunching = false;
  const SeaSurfaceRealization s = synthesize(p, g, SurfaceSampling{}, 0.0, 1, geom.incidence);
  const RenderResult r = render(s, geom, p, opt);
  CHECK(r.image.width() == 32);
  geom.azimuth_resolution = 0.0;
  CHECK_THROWS_AS(render(s, geom, p, opt), ConfigError);
  geom.azimuth_resolution = 3.0;
  CHECK_THROWS_AS(render(s, geom, p, opt), ConfigError);
}

TEST_CASE("render is shift-equivariant on interior crops") {
  const SpectrumParams p = SpectrumParams::make(5.0, 45.0 * kDeg, 0.84);
  const SarGeometry geom;
  const std::size_t shift = 8;
  const SeaSurfaceRealization a = small_sea(9);
  const SeaSurfaceRealization b = small_sea(9, shift * a.grid.dx);
  const RenderResult ra = render(a, geom, p);
  const RenderResult rb = render(b, geom, p);
  double max_u = 0.0;
  for (double v : a.orbital_velocity_radial.values()) max_u = std::max(max_u, std::abs(v));
  const std::size_t margin =
      static_cast<std::size_t>(std::ceil(geom.slant_range() / geom.platform_velocity * max_u / 2.0)) + 2;
  REQUIRE(2 * margin + shift < 64);
  std::size_t compared = 0;
  for (std::size_t j = 0; j < 64; ++j) {
    for (std::size_t i = margin; i + shift + margin < 64; ++i) {
      CHECK(rb.image.pixels(i, j) == Approx(ra.image.pixels(i + shift, j)).epsilon(1e-6));
      ++compared;
    }
  }
  CHECK(compared > 0);
}

TEST_CASE("wake modulates the rendered scene along the Kelvin arms") {
  ExperimentConfig c = default_config(Scale::kDesk);
  const std::optional<WakeField> wake = compute_wake(c);
  REQUIRE(wake.has_value());
  const ShipPlacement bow = c.scene.placement();
  ExperimentConfig calm = c;
  calm.scene.ship_enabled = false;
  const SceneResult with = simulate_scene(c, 1, wake);
  const SceneResult without = simulate_scene(calm, 1, std::nullopt);
  const IntensityImage& im = with.image;
  REQUIRE_NOTHROW(im.validate());
  // Same sea, with and without the ship: the difference isolates the wake.
  double sm = 0.0, nm = 0.0, sb = 0.0, sb2 = 0.0, nb = 0.0;
  for (std::size_t j = 0; j < im.height(); ++j) {
    for (std::size_t i = 0; i < im.width(); ++i) {
      const double behind = bow.bow_x - (i + 0.5) * im.dx;
      const double side = std::abs((j + 0.5) * im.dy - bow.bow_y);
      const double d = im.pixels(i, j) - without.image.pixels(i, j);
      const double angle = std::atan2(side, behind) / kDeg;
      if (behind > 10.0 && angle > 15.0 && angle < 22.0) {
        sm += d;
        nm += 1;
      } else if (behind < -10.0 || (behind > 10.0 && angle > 35.0)) {
        sb += d;
        sb2 += d * d;
        nb += 1;
      }
    }
  }
  REQUIRE(nm > 100);
  const double mb = sb / nb;
  const double sd = std::sqrt(sb2 / nb - mb * mb);
  CHECK(std::abs(sm / nm - mb) > 3.0 * sd / std::sqrt(nm));
}
