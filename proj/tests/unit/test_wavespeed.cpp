#include "cwave/quadrature.hpp"
#include "cwave/wavespeed.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

using namespace cwave;
using std::numbers::pi;

TEST_CASE("psi closed forms") {
  CHECK(WaveSpeed::constant(2).psi(3) == doctest::Approx(6).epsilon(1e-14));
  const auto ws = WaveSpeed::cosine(2, 1);
  CHECK(ws.psi(0) == 0);
  CHECK(ws.psi(pi) == doctest::Approx(2 * pi).epsilon(1e-13));
  for (Scalar u : {-3.0, -0.4, 0.9, 2.5, 7.0})
    CHECK(std::abs(ws.psi(u) - (2 * u + std::sin(u))) < 1e-12);
  CHECK_THROWS_AS((void)ws.psi(9), DomainError);
}

TEST_CASE("psi matches quadrature for every family") {
  const std::vector<WaveSpeed> speeds{WaveSpeed::gaussian_bump(1, 0.5, 0.7),
                                      WaveSpeed::cosine_polynomial({2, 0.3, -0.4, 0.2, 0.1}),
                                      WaveSpeed::polynomial({1.5, 0.1, 0.05}, {-3, 3})};
  for (const auto& ws : speeds)
    for (Scalar u : {-2.7, -0.3, 0.0, 1.1, 2.9}) {
      const Scalar q = adaptive_simpson([&](Scalar s) { return ws(s); }, 0, u, 1e-14);
      CHECK(std::abs(ws.psi(u) - q) < 1e-12);
    }
}

TEST_CASE("psi_inv inverts psi") {
  CHECK(WaveSpeed::constant(2).psi_inv(6) == doctest::Approx(3).epsilon(1e-13));
  const auto ws = WaveSpeed::cosine(2, 1);
  CHECK(ws.psi_inv(0) == 0);
  CHECK(std::abs(ws.psi_inv(2 * pi) - pi) < 1e-11);
  CHECK_THROWS_AS((void)ws.psi_inv(1e3), DomainError);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<Scalar> U(-8, 8);
  const Scalar tol = 1e-12;
  for (const auto& s : {ws, WaveSpeed::gaussian_bump(1, 1, 1), WaveSpeed::cosine_polynomial({2, 0.5, 0.3})}) {
    for (int k = 0; k < 100; ++k) {
      const Scalar u = U(rng);
      CHECK(std::abs(s.psi_inv(s.psi(u)) - u) <= 10 * tol / s.c0() + 1e-12);
    }
  }
}

TEST_CASE("psi strictly increasing and c bounded below") {
  const auto ws = WaveSpeed::gaussian_bump(0.5, 1, 0.7);
  Scalar prev = ws.psi(-8);
  for (int k = 1; k <= 200; ++k) {
    const Scalar u = -8 + 16.0 * k / 200;
    const Scalar v = ws.psi(u);
    CHECK(v > prev);
    CHECK(ws(u) >= ws.c0());
    prev = v;
  }
  CHECK_THROWS_AS(WaveSpeed::cosine(1, 2), DomainError);
  CHECK_THROWS_AS(WaveSpeed::polynomial({0.5, 0, -1}, {-2, 2}), DomainError);
}

TEST_CASE("analytic derivatives agree with differences") {
  const std::vector<WaveSpeed> speeds{WaveSpeed::cosine(2, 1), WaveSpeed::gaussian_bump(1, 1, 0.8),
                                      WaveSpeed::cosine_polynomial({2, 0.5, -0.3, 0.1}),
                                      WaveSpeed::polynomial({2, 0.1, 0.3, 0, 0.05}, {-2, 2})};
  const Scalar e = 1e-5;
  for (const auto& ws : speeds)
    for (Scalar u : {-1.3, 0.0, 0.4, 1.7}) {
      const auto d = ws.eval(u);
      CHECK(d.dc == doctest::Approx((ws(u + e) - ws(u - e)) / (2 * e)).epsilon(1e-7));
      CHECK(d.d2c == doctest::Approx((ws.eval(u + e).dc - ws.eval(u - e).dc) / (2 * e)).epsilon(1e-6));
    }
}

TEST_CASE("genericity report") {
  const auto flat = check_genericity(WaveSpeed::constant(1), 100);
  CHECK(flat.constant_speed);
  CHECK_FALSE(flat.pass);
  CHECK(flat.summary == "non-generic, constant speed");

  // c' = -sin u vanishes at 0 and at pi on [-1, 4]
  const auto cosr = check_genericity(WaveSpeed::cosine(2, 1, {-1, 4}), 500);
  REQUIRE(cosr.roots.size() == 2);
  CHECK(std::abs(cosr.roots[0].u) < 1e-12);
  CHECK(cosr.roots[0].d2c == doctest::Approx(-1).epsilon(1e-8));
  CHECK(cosr.roots[1].u == doctest::Approx(pi).epsilon(1e-10));
  CHECK(cosr.roots[1].d2c == doctest::Approx(1).epsilon(1e-8));
  CHECK(cosr.pass);

  const auto quartic = check_genericity(WaveSpeed::polynomial({2, 0, 0, 0, 1}, {-1, 1}), 501);
  REQUIRE(quartic.roots.size() == 1);
  CHECK(std::abs(quartic.roots[0].u) < 1e-6);
  CHECK_FALSE(quartic.pass);

  // even sample count: the root falls between samples and is found by bisection
  const auto quartic2 = check_genericity(WaveSpeed::polynomial({2, 0, 0, 0, 1}, {-1, 1}), 500);
  REQUIRE(quartic2.roots.size() == 1);
  CHECK_FALSE(quartic2.pass);
}
