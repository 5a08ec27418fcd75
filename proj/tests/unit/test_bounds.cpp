#include "cwave/bounds.hpp"
#include "cwave/quadrature.hpp"

#include "doctest.h"

#include <cmath>

using namespace cwave;

namespace {

// Composite trapezoid on a fine uniform grid, independent of the adaptive panels.
Scalar fine_trapezoid(const std::function<Scalar(Scalar)>& f, Interval I, Index n = 400001) {
  const Samples xs = Samples::LinSpaced(n, I.lo, I.hi);
  return trapezoid(xs.unaryExpr(f), xs(1) - xs(0));
}

Scalar plateau(Scalar x) { return 0.25 * (1 + std::erf((x - 0.2) / 0.05)) * (1 - std::erf((x - 0.8) / 0.05)); }
Scalar plateau_x(Scalar x) {
  const Scalar k = 2 / (0.05 * std::sqrt(M_PI));
  const Scalar a = (x - 0.2) / 0.05, b = (x - 0.8) / 0.05;
  return 0.25 * (k * std::exp(-a * a) * (1 - std::erf(b)) - (1 + std::erf(a)) * k * std::exp(-b * b));
}

}  // namespace

TEST_CASE("interpolated path") {
  SUBCASE("equal endpoints") {
    const auto ws = WaveSpeed::cosine(2, 1);
    const auto A = InitialDatum::from_bumps({{0.5, 1, 0.7}}, {{0.4, 0.8, 0.3}}, VelocityMode::Given, ws);
    const auto path = interpolated_path(A, A, ws, 4);
    for (Scalar th : {0.25, 0.5, 0.8})
      for (Scalar x : {-0.3, 0.1, 0.5, 1.2}) {
        const auto a = A(x), b = path.at(th)(x);
        CHECK(b.u0 == doctest::Approx(a.u0).epsilon(1e-14));
        CHECK(b.u0x == doctest::Approx(a.u0x).epsilon(1e-12));
        CHECK(b.u1 == doctest::Approx(a.u1).epsilon(1e-14));
      }
  }
  SUBCASE("constant speed is linear interpolation") {
    const auto ws = WaveSpeed::constant(2);
    const auto A = InitialDatum::from_bumps({{0.5, 1, 0.7}}, {}, VelocityMode::Given, ws);
    const auto B = InitialDatum::from_bumps({{0.8, 0.6, -0.4}}, {{0.3, 0.5, 1}}, VelocityMode::Given, ws);
    const auto path = interpolated_path(A, B, ws, 4);
    Scalar err = 0;
    for (Scalar th : {0.1, 0.5, 0.9})
      for (Scalar x = -0.5; x <= 1.5; x += 0.01) {
        const auto p = path.at(th)(x), a = A(x), b = B(x);
        err = std::max(err, std::abs(p.u0 - (th * b.u0 + (1 - th) * a.u0)));
        err = std::max(err, std::abs(p.u0x - (th * b.u0x + (1 - th) * a.u0x)));
        err = std::max(err, std::abs(p.u1 - (th * b.u1 + (1 - th) * a.u1)));
      }
    CHECK(err < 1e-12);
  }
  SUBCASE("energy along the path") {
    const auto ws = WaveSpeed::cosine(2, 1);
    const auto A = InitialDatum::from_bumps({{0.3, 0.6, 1.2}, {1.1, 0.4, -0.5}}, {{0.5, 0.7, 0.8}},
                                            VelocityMode::Given, ws);
    const auto B = InitialDatum::from_bumps({{0.6, 0.8, -0.9}}, {{0.2, 0.5, -1.1}}, VelocityMode::Given, ws);
    const auto path = interpolated_path(A, B, ws, 20);
    const Scalar Emax = std::max(energy(A, ws), energy(B, ws));
    Scalar worst = 0;
    for (Scalar th : path.thetas()) worst = std::max(worst, energy(path.at(th), ws));
    CHECK(worst <= Emax * (1 + 1e-10));
    CHECK_NOTHROW(path.check_energy(ws));
    CHECK(path.at(0)(0.3).u0 == A(0.3).u0);
    CHECK(path.at(1)(0.3).u0 == B(0.3).u0);
  }
}

TEST_CASE("sobolev right-hand side") {
  const auto ws = WaveSpeed::cosine(2, 1);
  const auto A = InitialDatum::from_bumps({{0.5, 1, 0.7}}, {{0.4, 0.8, 0.3}}, VelocityMode::Given, ws);
  CHECK(sobolev_rhs(A, A).total() == 0);

  SUBCASE("velocity difference") {
    const Bump g{0.6, 0.5, 0.9};
    const auto B = InitialDatum(
        [A, g](Scalar x) {
          DatumPoint p = A(x);
          p.u1 += g.value(x);
          return p;
        },
        {-0.5, 1.5});
    const auto s = sobolev_rhs(A, B);
    const Scalar l2 = std::sqrt(fine_trapezoid([&](Scalar x) { return std::pow(g.value(x), 2); }, {-0.5, 1.5}));
    const Scalar l1 = fine_trapezoid([&](Scalar x) { return std::abs(g.value(x)); }, {-0.5, 1.5});
    CHECK(s.h1_u0 == 0);
    CHECK(s.w11_u0 == 0);
    CHECK(s.total() == doctest::Approx(l2 + l1).epsilon(1e-10));
  }
  SUBCASE("mollified step") {
    const InitialDatum Z = InitialDatum::zero({-1, 2});
    const InitialDatum B([](Scalar x) { return DatumPoint{plateau(x), plateau_x(x), 0}; }, {-1, 2});
    const auto s = sobolev_rhs(Z, B);
    const Interval I{-1, 2};
    const Scalar h1 = std::sqrt(fine_trapezoid([](Scalar x) { return plateau(x) * plateau(x); }, I) +
                                fine_trapezoid([](Scalar x) { return plateau_x(x) * plateau_x(x); }, I));
    const Scalar w11 = fine_trapezoid([](Scalar x) { return std::abs(plateau(x)); }, I) +
                       fine_trapezoid([](Scalar x) { return std::abs(plateau_x(x)); }, I, 2000001);
    CHECK(std::abs(s.total() - (h1 + w11)) < 1e-8);
  }
}

TEST_CASE("transport lower bounds") {
  const auto ws = WaveSpeed::cosine(2, 1);
  const auto A = InitialDatum::from_bumps({{0.5, 1, 0.7}}, {{0.4, 0.8, 0.3}}, VelocityMode::Given, ws);
  const auto same = transport_lower_bounds(A, A, ws);
  CHECK(same.l1 == 0);
  CHECK(same.wasserstein == 0);

  SUBCASE("energy gap") {
    const auto B = InitialDatum::from_bumps({{0.5, 1, 0.7}}, {{0.4, 0.8, 0.6}}, VelocityMode::Given, ws);
    const Scalar gap = std::abs(energy(A, ws) - energy(B, ws));
    const auto tb = transport_lower_bounds(A, B, ws);
    CHECK(tb.mass_gap == doctest::Approx(gap).epsilon(1e-6));
    CHECK(tb.wasserstein >= gap * (1 - 1e-6));
    CHECK(tb.l1 == 0);
  }
  SUBCASE("translated bump") {
    const Bump b{0.5, 0.6, 0.8};
    const Scalar d = 0.25;
    const auto P = InitialDatum::from_bumps({b}, {}, VelocityMode::Given, ws);
    const auto Q = P.translated(d);
    // symmetric unimodal profile: the difference changes sign once, at center + d/2
    const Scalar exact = 2 * adaptive_simpson([&](Scalar x) { return b.value(x); }, b.center - d / 2,
                                              b.center + d / 2, 1e-15);
    const auto tb = transport_lower_bounds(P, Q, ws);
    CHECK(std::abs(tb.l1 - exact) < 1e-6);
    // equal masses, so only the sign(F) family contributes
    CHECK(tb.mass_gap < 1e-8);
    CHECK(tb.wasserstein > 0);
  }
}

TEST_CASE("endpoint distance") {
  const auto ws = WaveSpeed::cosine(2, 1);
  const auto A = InitialDatum::from_bumps({{0.5, 1, 0.5}}, {{0.5, 1, 0.3}}, VelocityMode::Given, ws);
  const auto dom = ChartDomain::covering(A.support(), 0.3, 3, 1.0 / 64);
  const auto ch = solve_chart(A, ws, dom, {.t_stop = 0.4});
  const auto s = reconstruct_slice(ch, extract_level_curve(ch, 0.2));
  const auto d = h1l2_distance(s, s);
  CHECK(d.value == 0);
  CHECK_FALSE(d.exceeds_cap);
}

TEST_CASE("lipschitz experiment") {
  const Scalar h = 1.0 / 64;
  const std::vector<Scalar> taus{0, 0.1, 0.2, 0.3};
  PathLengthOptions opts;
  opts.tangent.solve.threads = 2;

  SUBCASE("constant path") {
    const auto ws = WaveSpeed::cosine(2, 1);
    const auto A = InitialDatum::from_bumps({{0.5, 1, 0.5}}, {{0.5, 1, 0.3}}, VelocityMode::Given, ws);
    const auto dom = ChartDomain::covering(A.support(), 0.4, 3, h);
    const auto tab = lipschitz_experiment(constant_path(A, 2, 10), taus, ws, dom, opts);
    CHECK(tab.degenerate);
    CHECK(tab.violations == 0);
    for (const auto& r : tab.rows) {
      CHECK(r.ratio == 1);
      CHECK(r.length == 0);
    }
  }
  SUBCASE("unit speed, one direction") {
    const auto ws = WaveSpeed::constant(1);
    const auto A = InitialDatum::from_bumps({{0.5, 1, 0.5}}, {}, VelocityMode::RightMoving, ws);
    const auto path = translation_path(A, 0.3, 2, 10);
    const auto dom = ChartDomain::covering({-0.5, 1.8}, 0.4, 1, h);
    const auto tab = lipschitz_experiment(path, taus, ws, dom, opts);
    CHECK_FALSE(tab.degenerate);
    CHECK(tab.rows.front().ratio == 1);
    for (const auto& r : tab.rows) {
      // interpolation along the level curve leaves O(h^2) in terms that cancel exactly
      CHECK(std::abs(r.ratio - 1) < 60 * h * h);
      CHECK(r.a_integral == 0);
      CHECK(r.distance_ratio == doctest::Approx(1).epsilon(1e-2));
    }
    CHECK(tab.violations == 0);
    CHECK(tab.C * taus[1] < 60 * h * h);
  }
  SUBCASE("unit speed, crossing waves") {
    // waves moving apart lower the weights, so the length can only shrink
    const auto ws = WaveSpeed::constant(1);
    const auto A = InitialDatum::from_bumps({{0.5, 1, 0.5}}, {{0.5, 1, 0.3}}, VelocityMode::Given, ws);
    const auto path = vertical_velocity_path(A, {{0.3, 0.6, 0.4}}, 2, 10);
    const auto dom = ChartDomain::covering(path.at(1).support(), 0.4, 1, h);
    const auto tab = lipschitz_experiment(path, taus, ws, dom, opts);
    for (std::size_t k = 1; k < tab.rows.size(); ++k) CHECK(tab.rows[k].ratio <= tab.rows[k - 1].ratio);
    CHECK(tab.violations == 0);
    CHECK(tab.C == 0);
  }
}

TEST_CASE("gronwall check") {
  const Scalar h = 1.0 / 64;
  const std::vector<Scalar> taus{0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
  SUBCASE("constant speed") {
    const auto ws = WaveSpeed::constant(1.5);
    const auto A = InitialDatum::from_bumps({{0.5, 1, 0.5}}, {{0.5, 1, 0.3}}, VelocityMode::Given, ws);
    const auto path = vertical_velocity_path(A, {{0.3, 0.6, 0.4}}, 1, 10);
    const auto dom = ChartDomain::covering(path.at(1).support(), 0.4, 1.5, h);
    TangentOptions to;
    to.solve.t_stop = 0.4;
    const auto tf = tangent_by_theta(path, 0.5, ws, dom, to);
    const auto g = gronwall_series(tf, taus, {});
    const auto r = gronwall_check({g});
    CHECK(r.samples == 5);
    CHECK(r.violations == 0);
    CHECK(r.C < 1e-2);
    for (Scalar a : g.a) CHECK(a == 0);
  }
  SUBCASE("translation tangent, unit speed") {
    const auto ws = WaveSpeed::constant(1);
    const auto A = InitialDatum::from_bumps({{0.5, 1, 0.5}}, {}, VelocityMode::RightMoving, ws);
    const auto path = translation_path(A, 0.3, 1, 10);
    const auto dom = ChartDomain::covering({-0.5, 1.8}, 0.4, 1, h);
    TangentOptions to;
    to.solve.t_stop = 0.4;
    const auto tf = tangent_by_theta(path, 0.5, ws, dom, to);
    const auto g = gronwall_series(tf, taus, {});
    for (Scalar N : g.norms) CHECK(std::abs(N / g.norms.front() - 1) < 60 * h * h);
  }
}
