#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sarsim/quadrature.hpp"
#include "sarsim/random.hpp"

using namespace sarsim;

// Known-answer vectors published with the Random123 library (philox4x32, 10 rounds).
TEST_CASE("philox known answers") {
  CHECK(Philox4x32(0)({0, 0, 0, 0}) ==
        Philox4x32::Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32(0xffffffffffffffffULL)({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}) ==
        Philox4x32::Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32(0x299f31d0a4093822ULL)({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}) ==
        Philox4x32::Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniform draws lie in [0, 1) with the right moments") {
  const Philox4x32 rng(42);
  const int n = 200000;
  double mean = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform(7, static_cast<std::uint64_t>(i));
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    mean += u;
    m2 += u * u;
  }
  mean /= n;
  m2 /= n;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(m2 - mean * mean == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("normal pairs are standard and uncorrelated") {
  const Philox4x32 rng(3);
  const int n = 100000;
  double s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0;
  for (int i = 0; i < n; ++i) {
    const auto [a, b] = rng.normal_pair(rng_stream::kSpeckle, static_cast<std::uint64_t>(i));
    s1 += a;
    s2 += b;
    s11 += a * a;
    s22 += b * b;
    s12 += a * b;
  }
  CHECK(std::abs(s1 / n) < 0.02);
  CHECK(std::abs(s2 / n) < 0.02);
  CHECK(s11 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(s22 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(s12 / n) < 0.02);
}

TEST_CASE("streams and seeds give different draws") {
  const Philox4x32 a(1), b(2);
  CHECK(a.block(0, 0) != b.block(0, 0));
  CHECK(a.block(0, 0) != a.block(1, 0));
  CHECK(a.block(0, 0) == Philox4x32(1).block(0, 0));
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  for (int n : {1, 2, 5, 16, 40}) {
    const GaussLegendre& rule = gauss_legendre(n);
    REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], p);
      const double exact = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
  }
  const GaussLegendre& r = gauss_legendre(20);
  double s = 0.0;
  for (int i = 0; i < 20; ++i) s += r.weights[i] * std::cos(r.nodes[i]);
  CHECK(s == doctest::Approx(2.0 * std::sin(1.0)).epsilon(1e-14));
}
