#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sarsim/speckle.hpp"
#include "sarsim/wavelet.hpp"

using namespace sarsim;
using doctest::Approx;

namespace {

IntensityImage constant_image(std::size_t w, std::size_t h, double v) {
  IntensityImage im;
  im.pixels = Grid(w, h, v);
  return im;
}

struct Moments {
  double mean = 0, var = 0, skew = 0, kurt = 0;
};

Moments moments(const std::vector<double>& x) {
  Moments m;
  const double n = static_cast<double>(x.size());
  for (double v : x) m.mean += v;
  m.mean /= n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : x) {
    const double d = v - m.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m.var = m2 * n / (n - 1);
  m.skew = m3 / std::pow(m2, 1.5);
  m.kurt = m4 / (m2 * m2) - 3.0;
  return m;
}

std::vector<double> draws(const SpeckleParams& p, std::size_t n) {
  const IntensityImage g = apply_speckle(constant_image(1000, n / 1000, 1.0), p);
  return {g.pixels.values().begin(), g.pixels.values().end()};
}

}  // namespace

TEST_CASE("log-variance models") {
  SpeckleParams p;
  for (int l : {1, 2, 3, 5, 7, 20}) {
    p.looks = l;
    p.model = LookModel::kMomentMatched;
    CHECK(p.log_variance() == Approx(std::log(1.0 + 1.0 / l)).epsilon(1e-15));
    CHECK(p.log_mean() == -0.5 * p.log_variance());
    p.model = LookModel::kTrigamma;
    double series = std::numbers::pi * std::numbers::pi / 6.0;
    for (int k = 1; k < l; ++k) series -= 1.0 / (double(k) * k);
    CHECK(p.log_variance() == Approx(series).epsilon(1e-13));
  }
  p.looks = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  CHECK_THROWS_AS(apply_speckle(constant_image(4, 4, 1.0), p), ConfigError);
}

TEST_CASE("zero image stays zero and negative input is rejected") {
  SpeckleParams p;
  const IntensityImage g = apply_speckle(constant_image(8, 8, 0.0), p);
  for (double v : g.pixels.values()) CHECK(v == 0.0);
  IntensityImage bad = constant_image(4, 4, 1.0);
  bad.pixels[3] = -1.0;
  CHECK_THROWS_AS(apply_speckle(bad, p), ConfigError);
}

TEST_CASE("unit mean and 1/L variance over 10^6 draws") {
  double prev_var = 1e9;
  for (int l : {3, 5, 7}) {
    SpeckleParams p;
    p.looks = l;
    p.seed = 100 + l;
    const Moments m = moments(draws(p, 1'000'000));
    CHECK(m.mean == Approx(1.0).epsilon(0.005));
    CHECK(m.var == Approx(1.0 / l).epsilon(0.02));
    CHECK(m.var < prev_var);
    prev_var = m.var;
  }
  SpeckleParams t;
  t.looks = 3;
  t.model = LookModel::kTrigamma;
  const Moments m = moments(draws(t, 1'000'000));
  CHECK(m.mean == Approx(1.0).epsilon(0.005));
  CHECK(m.var == Approx(std::expm1(t.log_variance())).epsilon(0.02));
}

TEST_CASE("log speckle is Gaussian (Jarque-Bera at the 1% level)") {
  for (std::uint64_t seed : {1, 2, 3}) {
    SpeckleParams p;
    p.looks = 5;
    p.seed = seed;
    std::vector<double> x = draws(p, 10'000);
    for (double& v : x) v = std::log(v);
    const Moments m = moments(x);
    CHECK(m.mean == Approx(p.log_mean()).epsilon(0.05));
    const double jb = 10'000.0 / 6.0 * (m.skew * m.skew + 0.25 * m.kurt * m.kurt);
    CHECK(jb < 9.21);
  }
}

TEST_CASE("pixels are independent: lag-1 autocorrelation") {
  SpeckleParams p;
  p.looks = 3;
  const std::vector<double> x = draws(p, 1'000'000);
  const Moments m = moments(x);
  double c = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) c += (x[i] - m.mean) * (x[i + 1] - m.mean);
  c /= (x.size() - 1) * m.var;
  CHECK(std::abs(c) < 0.01);
}

TEST_CASE("seeded reproducibility and per-pixel draws") {
  IntensityImage f = constant_image(17, 9, 0.0);
  for (std::size_t n = 0; n < f.pixels.size(); ++n) f.pixels[n] = 0.5 + 0.01 * n;
  SpeckleParams p;
  p.looks = 7;
  p.seed = 42;
  const IntensityImage g = apply_speckle(f, p);
  CHECK(apply_speckle(f, p).pixels == g.pixels);
  for (std::size_t n = 0; n < f.pixels.size(); ++n) {
    CHECK(g.pixels[n] / speckle_sample(p, n) == Approx(f.pixels[n]).epsilon(1e-12));
  }
  CHECK(g.metadata.at("speckle.looks") == "7");
  p.seed = 43;
  CHECK(apply_speckle(f, p).pixels != g.pixels);
}

TEST_CASE("fewer looks give noisier images") {
  SpeckleParams one, seven;
  one.looks = 1;
  seven.looks = 7;
  const Moments a = moments(draws(one, 40'000));
  const Moments b = moments(draws(seven, 40'000));
  CHECK(a.var > 3.0 * b.var);
}

TEST_CASE("log-domain bias correction restores unit mean radiometry") {
  for (int l : {3, 5, 7}) {
    SpeckleParams p;
    p.looks = l;
    p.seed = 7;
    const IntensityImage g = apply_speckle(constant_image(256, 256, 1.0), p);
    const LogImage lg = log_transform(g, default_log_floor(g));
    double mean_log = 0.0;
    for (double v : lg.values.values()) mean_log += v;
    mean_log /= static_cast<double>(lg.values.size());
    // Averaging in the log domain estimates mu = -sigma^2/2; adding sigma^2/2 undoes it.
    CHECK(std::exp(mean_log + 0.5 * p.log_variance()) == Approx(1.0).epsilon(0.01));
  }
}
