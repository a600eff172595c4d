#include "sarsim/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sarsim/errors.hpp"

namespace sarsim {
namespace {

std::vector<double> quadrature_mirror(const std::vector<double>& h) {
  const std::size_t n = h.size();
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[n - 1 - k];
  return g;
}

// a[n] = sum_k h[k] x[(2n+k) mod N], likewise d with g.
void analyze(std::span<const double> x, const Wavelet& w, std::span<double> lo,
             std::span<double> hi) {
  const std::size_t n = x.size();
  const std::size_t half = n / 2;
  const std::size_t taps = w.lowpass.size();
  for (std::size_t m = 0; m < half; ++m) {
    double a = 0.0, d = 0.0;
    for (std::size_t k = 0; k < taps; ++k) {
      const double v = x[(2 * m + k) % n];
      a += w.lowpass[k] * v;
      d += w.highpass[k] * v;
    }
    lo[m] = a;
    hi[m] = d;
  }
}

// Adjoint of analyze; equal to its inverse for an orthonormal filter pair.
void synthesize(std::span<const double> lo, std::span<const double> hi, const Wavelet& w,
                std::span<double> x) {
  const std::size_t n = x.size();
  const std::size_t taps = w.lowpass.size();
  std::fill(x.begin(), x.end(), 0.0);
  for (std::size_t m = 0; m < lo.size(); ++m) {
    for (std::size_t k = 0; k < taps; ++k) {
      x[(2 * m + k) % n] += w.lowpass[k] * lo[m] + w.highpass[k] * hi[m];
    }
  }
}

struct Quadrants {
  Grid ll, lh, hl, hh;  // first letter: x filter, second: y filter
};

Quadrants analyze_2d(const Grid& in, const Wavelet& w) {
  const std::size_t nx = in.width(), ny = in.height();
  const std::size_t hx = nx / 2, hy = ny / 2;
  Grid lo_x(hx, ny), hi_x(hx, ny);
  for (std::size_t j = 0; j < ny; ++j) analyze(in.row(j), w, lo_x.row(j), hi_x.row(j));

  Quadrants q{Grid(hx, hy), Grid(hx, hy), Grid(hx, hy), Grid(hx, hy)};
  std::vector<double> col(ny), a(hy), d(hy);
  auto columns = [&](const Grid& src, Grid& low, Grid& high) {
    for (std::size_t i = 0; i < hx; ++i) {
      for (std::size_t j = 0; j < ny; ++j) col[j] = src(i, j);
      analyze(col, w, a, d);
      for (std::size_t j = 0; j < hy; ++j) {
        low(i, j) = a[j];
        high(i, j) = d[j];
      }
    }
  };
  columns(lo_x, q.ll, q.lh);
  columns(hi_x, q.hl, q.hh);
  return q;
}

Grid synthesize_2d(const Grid& ll, const Grid& lh, const Grid& hl, const Grid& hh,
                   const Wavelet& w) {
  const std::size_t hx = ll.width(), hy = ll.height();
  const std::size_t nx = 2 * hx, ny = 2 * hy;
  Grid lo_x(hx, ny), hi_x(hx, ny);
  std::vector<double> col(ny), a(hy), d(hy);
  auto columns = [&](const Grid& low, const Grid& high, Grid& dst) {
    for (std::size_t i = 0; i < hx; ++i) {
      for (std::size_t j = 0; j < hy; ++j) {
        a[j] = low(i, j);
        d[j] = high(i, j);
      }
      synthesize(a, d, w, col);
      for (std::size_t j = 0; j < ny; ++j) dst(i, j) = col[j];
    }
  };
  columns(ll, lh, lo_x);
  columns(hl, hh, hi_x);

  Grid out(nx, ny);
  for (std::size_t j = 0; j < ny; ++j) synthesize(lo_x.row(j), hi_x.row(j), w, out.row(j));
  return out;
}

}  // namespace

Wavelet Wavelet::by_name(const std::string& name) {
  Wavelet w;
  w.name = name;
  if (name == "haar" || name == "db1") {
    const double r = 1.0 / std::sqrt(2.0);
    w.lowpass = {r, r};
  } else if (name == "db2") {
    // (1 + s3, 3 + s3, 3 - s3, 1 - s3) / (4 sqrt 2)
    const double s3 = std::sqrt(3.0);
    const double n = 4.0 * std::sqrt(2.0);
    w.lowpass = {(1.0 + s3) / n, (3.0 + s3) / n, (3.0 - s3) / n, (1.0 - s3) / n};
  } else if (name == "db4") {
    // Minimum-phase spectral factor, computed at 50 digits.
    w.lowpass = {0.23037781330889650086,  0.71484657055291564709,  0.63088076792985890788,
                 -0.027983769416859854211, -0.18703481171909308408, 0.030841381835560763627,
                 0.032883011666885199735, -0.010597401785069032105};
  } else {
    throw ConfigError("wavelet: unknown wavelet '" + name + "' (haar, db2, db4)");
  }
  w.highpass = quadrature_mirror(w.lowpass);
  return w;
}

BoundaryMode boundary_by_name(const std::string& name) {
  if (name == "periodization" || name == "periodic") return BoundaryMode::kPeriodization;
  throw ConfigError("wavelet: unsupported boundary mode '" + name + "'");
}

std::string boundary_name(BoundaryMode) { return "periodization"; }

Grid& SubbandLevel::orientation(int i) {
  switch (i) {
    case 1: return horizontal;
    case 2: return vertical;
    case 3: return diagonal;
    default: throw ConfigError("subband orientation must be 1, 2 or 3");
  }
}

const Grid& SubbandLevel::orientation(int i) const {
  return const_cast<SubbandLevel*>(this)->orientation(i);
}

LogImage log_transform(const IntensityImage& image, double floor) {
  if (!(floor > 0.0)) throw ConfigError("log_transform: floor must be positive");
  LogImage out{Grid(image.width(), image.height()), 0};
  for (std::size_t n = 0; n < out.values.size(); ++n) {
    const double v = image.pixels[n];
    if (v < floor) ++out.floored;
    out.values[n] = std::log(std::max(v, floor));
  }
  return out;
}

double default_log_floor(const IntensityImage& image) {
  double peak = 0.0;
  for (double v : image.pixels.values()) peak = std::max(peak, v);
  return peak > 0.0 ? 1e-10 * peak : 1e-300;
}

IntensityImage exp_transform(const Grid& values, double bias, double dx, double dy) {
  IntensityImage out;
  out.pixels = Grid(values.width(), values.height());
  out.dx = dx;
  out.dy = dy;
  for (std::size_t n = 0; n < values.size(); ++n) {
    out.pixels[n] = std::exp(std::min(values[n] + bias, kMaxExponent));
  }
  return out;
}

SubbandPyramid dwt2_forward(const Grid& image, std::size_t levels, const std::string& wavelet_name,
                            BoundaryMode boundary) {
  const Wavelet w = Wavelet::by_name(wavelet_name);
  if (levels < 1) throw ConfigError("dwt2_forward: levels must be >= 1");
  if (levels > 30) throw ConfigError("dwt2_forward: too many levels");
  const std::size_t period = std::size_t{1} << levels;
  const std::size_t min_size = period * std::max<std::size_t>(w.lowpass.size() - 1, 1);
  for (std::size_t n : {image.width(), image.height()}) {
    if (n % period != 0 || n < min_size) {
      throw ConfigError("dwt2_forward: " + std::to_string(levels) + " levels of " + w.name +
                        " need dimensions divisible by " + std::to_string(period) +
                        " and >= " + std::to_string(min_size));
    }
  }

  SubbandPyramid p;
  p.levels = levels;
  p.wavelet_name = w.name;
  p.boundary_mode = boundary;
  p.width = image.width();
  p.height = image.height();
  Grid current = image;
  for (std::size_t l = 0; l < levels; ++l) {
    Quadrants q = analyze_2d(current, w);
    p.details.push_back({std::move(q.lh), std::move(q.hl), std::move(q.hh)});
    current = std::move(q.ll);
  }
  p.approximation = std::move(current);
  return p;
}

Grid dwt2_inverse(const SubbandPyramid& p) {
  const Wavelet w = Wavelet::by_name(p.wavelet_name);
  if (p.levels < 1 || p.details.size() != p.levels) {
    throw StructuralError("dwt2_inverse: level count does not match detail planes");
  }
  const std::size_t period = std::size_t{1} << p.levels;
  if (p.width % period != 0 || p.height % period != 0) {
    throw StructuralError("dwt2_inverse: image size incompatible with level count");
  }
  auto expect = [](const Grid& g, std::size_t w_, std::size_t h_, const char* what) {
    if (g.width() != w_ || g.height() != h_) {
      throw StructuralError(std::string("dwt2_inverse: malformed ") + what + " plane");
    }
  };
  expect(p.approximation, p.width / period, p.height / period, "approximation");

  Grid current = p.approximation;
  for (std::size_t l = p.levels; l-- > 0;) {
    const std::size_t w_ = p.width >> (l + 1);
    const std::size_t h_ = p.height >> (l + 1);
    const SubbandLevel& d = p.details[l];
    expect(d.horizontal, w_, h_, "horizontal");
    expect(d.vertical, w_, h_, "vertical");
    expect(d.diagonal, w_, h_, "diagonal");
    current = synthesize_2d(current, d.horizontal, d.vertical, d.diagonal, w);
  }
  return current;
}

}  // namespace sarsim
