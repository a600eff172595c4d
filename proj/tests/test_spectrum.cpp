#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "sarsim/errors.hpp"
#include "sarsim/spectrum.hpp"

using namespace sarsim;
using doctest::Approx;

namespace {

// Golden values from tests/oracles/spectrum_oracle.py (mpmath, 40 digits).
constexpr double kKp = 0.27687744;
constexpr double kCp = 5.9523826189847049;
constexpr double kUstar = 0.17052301283558849;
constexpr double kAlphaM = 0.0070079095133513625;
constexpr double kBlAtKp = 0.0013391885169513628;
constexpr double kBhAtKm = 0.0034997529027928047;
constexpr double kBhAt2Km = 0.0024378612453374602;
constexpr double kSAtKp = 0.065513169250331495;
constexpr double kSAt1 = 0.004715700482049576;
constexpr double kSAt100 = 2.5967558468860257e-9;
constexpr double kDeltaAtKp = 0.99952572353680413;
constexpr double kDeltaAt10 = 0.21747812941145606;
constexpr double kD1 = 0.25789310861029553;  // D(k=1, theta=0.3)
constexpr double kHs = 0.64809751831019806;

const SpectrumParams& reference() {
  static const SpectrumParams p = SpectrumParams::make(5.0, 0.0, 0.84);
  return p;
}

}  // namespace

TEST_CASE("derived parameters match the independent oracle") {
  const SpectrumParams& p = reference();
  CHECK(p.k_p == Approx(kKp).epsilon(1e-14));
  CHECK(p.c_p == Approx(kCp).epsilon(1e-13));
  CHECK(p.friction_velocity == Approx(kUstar).epsilon(1e-13));
  CHECK(p.alpha_m == Approx(kAlphaM).epsilon(1e-12));
}

TEST_CASE("curvature spectra golden values") {
  const SpectrumParams& p = reference();
  CHECK(long_wave_curvature(p.k_p, p) == Approx(kBlAtKp).epsilon(1e-12));
  CHECK(short_wave_curvature(370.0, p) == Approx(kBhAtKm).epsilon(1e-12));
  CHECK(short_wave_curvature(740.0, p) == Approx(kBhAt2Km).epsilon(1e-12));
  CHECK(omnidirectional_spectrum(p.k_p, p) == Approx(kSAtKp).epsilon(1e-12));
  CHECK(omnidirectional_spectrum(1.0, p) == Approx(kSAt1).epsilon(1e-12));
  CHECK(omnidirectional_spectrum(100.0, p) == Approx(kSAt100).epsilon(1e-12));
  CHECK(spreading_ratio(p.k_p, p) == Approx(kDeltaAtKp).epsilon(1e-12));
  CHECK(spreading_ratio(10.0, p) == Approx(kDeltaAt10).epsilon(1e-12));
  CHECK(spreading(1.0, 0.3, p) == Approx(kD1).epsilon(1e-12));
}

TEST_CASE("gaussian factor of the short-wave part") {
  const SpectrumParams& p = reference();
  // Ratio of B_h at 2 k_m and k_m strips the Gaussian down to exp(-1/4) times the rest.
  const double c1 = phase_speed(370.0, p), c2 = phase_speed(740.0, p);
  const auto rest = [&](double k) {
    const double lpm = std::exp(-1.25 * std::pow(p.k_p / k, 2));
    const double d = std::sqrt(k / p.k_p) - 1.0;
    return lpm * std::pow(p.peak_enhancement, std::exp(-d * d / (2 * p.peak_width * p.peak_width)));
  };
  const double ratio = (short_wave_curvature(740.0, p) / short_wave_curvature(370.0, p)) /
                       ((c1 / c2) * rest(740.0) / rest(370.0));
  CHECK(ratio == Approx(std::exp(-0.25)).epsilon(1e-13));
}

TEST_CASE("significant wave height from quadrature") {
  const SpectrumParams& p = reference();
  // Integrate in log k so the peak and the capillary range both resolve.
  auto f = [&](double t) {
    const double k = std::exp(t);
    return omnidirectional_spectrum(k, p) * k;
  };
  double err = 0.0;
  const double var = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, std::log(1e-3), std::log(1e4), 20, 1e-12, &err);
  const double hs = 4.0 * std::sqrt(var);
  CHECK(hs == Approx(kHs).epsilon(1e-8));
  CHECK(hs > 0.5);
  CHECK(hs < 0.8);
}

TEST_CASE("identity S k^3 = B_l + B_h") {
  const SpectrumParams& p = reference();
  for (double k : {1e-3, 0.01, 0.27, 1.0, 13.0, 370.0, 1e4}) {
    const double lhs = omnidirectional_spectrum(k, p) * k * k * k;
    const double rhs = long_wave_curvature(k, p) + short_wave_curvature(k, p);
    CHECK(lhs == Approx(rhs).epsilon(1e-14));
  }
}

TEST_CASE("spectrum is finite and non-negative on a dense log grid") {
  const SpectrumParams& p = reference();
  const int n = 1'000'000;
  bool ok = true;
  for (int i = 0; i < n; ++i) {
    const double k = 1e-3 * std::pow(1e7, static_cast<double>(i) / (n - 1));
    const double s = omnidirectional_spectrum(k, p);
    ok = ok && std::isfinite(s) && s >= 0.0;
  }
  CHECK(ok);
}

TEST_CASE("spreading integrates to one and has period pi") {
  for (double u : {3.0, 5.0, 12.0}) {
    const SpectrumParams p = SpectrumParams::make(u, 0.4, 1.3);
    for (int i = 0; i < 100; ++i) {
      const double k = 1e-2 * std::pow(1e5, i / 99.0);
      const double delta = spreading_ratio(k, p);
      REQUIRE(std::abs(delta) <= 1.0);
      double s = 0.0;
      const int m = 64;  // exact for trigonometric polynomials of degree < m
      for (int j = 0; j < m; ++j) s += spreading(k, 2.0 * std::numbers::pi * j / m, p);
      CHECK(s * 2.0 * std::numbers::pi / m == Approx(1.0).epsilon(1e-12));
      CHECK(spreading(k, 0.7, p) == Approx(spreading(k, 0.7 + std::numbers::pi, p)).epsilon(1e-14));
      CHECK(spreading(k, 1.1, p) >= 0.0);
    }
  }
}

TEST_CASE("long-wave part vanishes at large k and its elevation spectrum peaks near k_p") {
  const SpectrumParams& p = reference();
  CHECK(long_wave_curvature(1e4, p) < 1e-20);
  double best = 0.0, best_k = 0.0;
  for (int i = 0; i < 4000; ++i) {
    const double k = p.k_p * std::pow(10.0, -1.0 + 2.0 * i / 3999.0);
    const double b = long_wave_curvature(k, p) / (k * k * k);
    if (b > best) {
      best = b;
      best_k = k;
    }
  }
  CHECK(best_k / p.k_p > 0.8);
  CHECK(best_k / p.k_p < 1.5);
}

TEST_CASE("cartesian spectrum integrates to the elevation variance") {
  const SpectrumParams p = SpectrumParams::make(5.0, 0.8, 0.84);
  // W = S D / k, integrated in polar coordinates gives int S dk.
  auto radial = [&](double t) {
    const double k = std::exp(t);
    double s = 0.0;
    const int m = 32;
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * std::numbers::pi * j / m;
      s += cartesian_spectrum(k * std::cos(th), k * std::sin(th), p);
    }
    return s * (2.0 * std::numbers::pi / m) * k * k;
  };
  auto omni = [&](double t) {
    const double k = std::exp(t);
    return omnidirectional_spectrum(k, p) * k;
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double a = GK::integrate(radial, std::log(0.05), std::log(50.0), 15, 1e-11);
  const double b = GK::integrate(omni, std::log(0.05), std::log(50.0), 15, 1e-11);
  CHECK(a == Approx(b).epsilon(1e-9));
}

TEST_CASE("invalid inputs are rejected") {
  const SpectrumParams& p = reference();
  CHECK_THROWS_AS(omnidirectional_spectrum(0.0, p), DomainError);
  CHECK_THROWS_AS(long_wave_curvature(-1.0, p), DomainError);
  CHECK_THROWS_AS(spreading(0.0, 0.0, p), DomainError);
  CHECK_THROWS_AS(SpectrumParams::make(0.0), ConfigError);
  CHECK_THROWS_AS(SpectrumParams::make(5.0, 0.0, 0.5), ConfigError);
  CHECK_THROWS_AS(SpectrumParams::make(5.0, 0.0, 6.0), ConfigError);
}
