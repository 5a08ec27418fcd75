#include "cwave/chart.hpp"

#include "doctest.h"

#include <cmath>
#include <string>

using namespace cwave;

namespace {

InitialDatum smooth_bump(const WaveSpeed& ws, Scalar amp = 0.6) {
  return InitialDatum::from_bumps({{0.5, 0.4, amp}}, {{0.45, 0.3, 0.3}}, VelocityMode::Given, ws);
}

}  // namespace

TEST_CASE("boundary data") {
  const auto ws = WaveSpeed::cosine(2, 1);
  const auto dom = ChartDomain::with_step(-0.5, 1.5, 1.0 / 64);
  const auto zb = boundary_data(InitialDatum::zero(), ws, dom);
  CHECK((zb.alpha == 0).all());
  CHECK((zb.p == 1).all());

  const auto c1 = WaveSpeed::constant(1);
  const auto right = InitialDatum::from_bumps({{0.5, 0.4, 0.5}}, {}, VelocityMode::RightMoving, c1);
  const auto rb = boundary_data(right, c1, dom);
  CHECK(rb.alpha.abs().maxCoeff() < 1e-15);
  for (Index i = 0; i < dom.n; ++i)
    CHECK(std::abs(rb.beta(i) - 2 * std::atan(-2 * right(rb.x(i)).u0x)) < 1e-14);

  const auto still = InitialDatum::from_bumps({{0.5, 0.4, 0.7}}, {}, VelocityMode::Given, ws);
  const auto sb = boundary_data(still, ws, dom);
  const Bump b{0.5, 0.4, 0.7};
  for (Index i = 0; i < dom.n; ++i) {
    const Scalar cu = ws(b.value(sb.x(i))) * b.derivative(sb.x(i));
    CHECK(std::abs(sb.p(i) - (1 + cu * cu)) < 1e-13);
  }
}

TEST_CASE("zero data closed form") {
  for (const auto& ws : {WaveSpeed::cosine(2, 1), WaveSpeed::constant(1.5)}) {
    const auto dom = ChartDomain::with_step(-1, 2, 1.0 / 32);
    SolveOptions opt;
    opt.region = Region::Both;
    const auto ch = solve_chart(InitialDatum::zero(), ws, dom, opt);
    const Scalar c = ws(0);
    Scalar err = 0;
    for (Index j = 0; j < ch.ny(); ++j)
      for (Index i = 0; i < ch.nx(); ++i) {
        const Scalar X = ch.X()(i), Y = ch.Y()(j);
        err = std::max({err, std::abs(ch.u(i, j)), std::abs(ch.alpha(i, j)), std::abs(ch.beta(i, j)),
                        std::abs(ch.p(i, j) - 1), std::abs(ch.q(i, j) - 1),
                        std::abs(ch.x(i, j) - (X - Y) / 2), std::abs(ch.t(i, j) - (X + Y) / (2 * c))});
      }
    CHECK(err < 1e-12);
    CHECK(residuals(ch).worst() < 1e-12);
  }
}

TEST_CASE("constant speed decouples the families") {
  const auto ws = WaveSpeed::constant(1.3);
  const auto d = smooth_bump(ws, 1.2);
  const auto dom = ChartDomain::with_step(-2, 3, 1.0 / 32);
  const auto ch = solve_chart(d, ws, dom);
  Scalar spread = 0;
  const Index n = ch.nx();
  for (Index i = 0; i < n; ++i) {
    const Index j0 = n - 1 - i;
    for (Index j = j0; j < n; ++j) {
      spread = std::max({spread, std::abs(ch.alpha(i, j) - ch.alpha(i, j0)), std::abs(ch.p(i, j) - ch.p(i, j0))});
    }
  }
  for (Index j = 0; j < n; ++j) {
    const Index i0 = n - 1 - j;
    for (Index i = i0; i < n; ++i)
      spread = std::max({spread, std::abs(ch.beta(i, j) - ch.beta(i0, j)), std::abs(ch.q(i, j) - ch.q(i0, j))});
  }
  CHECK(spread < 1e-13);
}

TEST_CASE("monotonicity and positivity on a nonlinear chart") {
  const auto ws = WaveSpeed::cosine(2, 1);
  const auto d = smooth_bump(ws, 1.5);
  const auto dom = ChartDomain::with_step(-3, 4, 1.0 / 32);
  SolveOptions opt;
  opt.region = Region::Both;
  const auto ch = solve_chart(d, ws, dom, opt);
  bool ok = true;
  for (Index j = 0; j + 1 < ch.ny(); ++j)
    for (Index i = 0; i + 1 < ch.nx(); ++i) {
      if (!ch.solved(i, j)) continue;
      ok = ok && ch.p(i, j) > 0 && ch.q(i, j) > 0;
      if (ch.solved(i + 1, j)) ok = ok && ch.t(i + 1, j) >= ch.t(i, j) && ch.x(i + 1, j) >= ch.x(i, j);
      if (ch.solved(i, j + 1)) ok = ok && ch.t(i, j + 1) >= ch.t(i, j) && ch.x(i, j + 1) <= ch.x(i, j);
    }
  CHECK(ok);
}

TEST_CASE("residuals are second order and detect noise") {
  const auto ws = WaveSpeed::cosine(2, 1);
  const auto d = InitialDatum::from_bumps({{0.5, 0.5, 0.5}}, {{0.5, 0.5, 0.3}}, VelocityMode::Given, ws);
  auto run = [&](Scalar h) {
    SolveOptions o;
    o.t_stop = 0.5;
    return solve_chart(d, ws, ChartDomain::with_step(-1.25, 2.25, h), o);
  };
  const auto c1 = run(1.0 / 64);
  const auto c2 = run(1.0 / 128);
  const auto r1 = residuals(c1), r2 = residuals(c2);
  for (int k = 0; k < 10; ++k) {
    if (r1.max[k] < 1e-12) continue;
    const Scalar ratio = r1.max[k] / r2.max[k];
    INFO(std::string(ResidualReport::kNames[k]), " ratio ", ratio);
    CHECK(ratio > 4 * 0.7);
    CHECK(ratio < 4 * 1.3);
  }
  auto noisy = c2;
  noisy.u(noisy.nx() / 2, noisy.ny() / 2 + 3) += 0.5;
  CHECK(residuals(noisy).worst() > 10 * r2.worst());
}

TEST_CASE("threaded march is identical to the serial one") {
  const auto ws = WaveSpeed::cosine(2, 1);
  const auto d = smooth_bump(ws, 1.4);
  const auto dom = ChartDomain::with_step(-2, 3, 1.0 / 40);
  SolveOptions a, b;
  a.region = b.region = Region::Both;
  b.threads = 3;
  const auto ca = solve_chart(d, ws, dom, a);
  const auto cb = solve_chart(d, ws, dom, b);
  for (int k = 0; k < 7; ++k) {
    const Field diff = (ca.field(k) - cb.field(k)).abs();
    CHECK((diff.isNaN() == ca.field(k).isNaN()).all());
    CHECK(diff.isNaN().select(0, diff).maxCoeff() <= 1e-13);
  }
  CHECK(ca.iterations == cb.iterations);
}

TEST_CASE("enlarging the domain leaves shared nodes unchanged") {
  const auto ws = WaveSpeed::cosine(2, 1);
  const auto d = smooth_bump(ws, 1.2);
  const Scalar h = 1.0 / 32;
  const auto small = solve_chart(d, ws, ChartDomain::with_step(-1, 2, h));
  const auto big = solve_chart(d, ws, ChartDomain::with_step(-2, 3, h));
  // node (i, j) of the small grid is node (i + 32, j + 32) of the big one
  Scalar err = 0;
  for (Index j = 0; j < small.ny(); ++j)
    for (Index i = 0; i < small.nx(); ++i)
      if (small.solved(i, j))
        for (int k = 0; k < 7; ++k)
          err = std::max(err, std::abs(small.field(k)(i, j) - big.field(k)(i + 32, j + 32)));
  CHECK(err <= 1e-12);
}

TEST_CASE("relabel identity and scaling") {
  const auto ws = WaveSpeed::cosine(2, 1);
  const auto d = smooth_bump(ws, 1.0);
  const auto ch = solve_chart(d, ws, ChartDomain::with_step(-1, 2, 1.0 / 32));
  const auto same = relabel(ch, Relabeling::identity(), Relabeling::identity());
  for (int k = 0; k < 6; ++k) {
    const Field& a = ch.field(k);
    const Field& b = same.field(k);
    CHECK(((a == b) || (a.isNaN() && b.isNaN())).all());
  }
  const auto twice = relabel(ch, Relabeling::affine(2, 0), Relabeling::identity());
  CHECK(twice.hX() == doctest::Approx(ch.hX() / 2));
  // node (i, j) of the relabeled grid maps back onto node (i, j) of the original
  for (Index j = 0; j < ch.ny(); j += 7)
    for (Index i = 0; i < ch.nx(); i += 5)
      if (ch.solved(i, j)) CHECK(twice.p(i, j) == doctest::Approx(2 * ch.p(i, j)).epsilon(1e-13));
  CHECK_THROWS_AS(Relabeling::affine(-1, 0), DomainError);
  Relabeling bad{[](Scalar v) { return -v; }, [](Scalar) { return -1.0; }, [](Scalar v) { return -v; }};
  CHECK_THROWS_AS(relabel(ch, bad, Relabeling::identity()), DomainError);
}

TEST_CASE("nonpositive p is reported with its node") {
  const auto ws = WaveSpeed::constant(1);
  const auto dom = ChartDomain::with_step(0, 1, 0.125);
  auto b = boundary_data(InitialDatum::zero(), ws, dom);
  b.p(3) = -0.5;
  try {
    (void)solve_chart(b, ws, dom);
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    CHECK(e.node_i() == 3);
    CHECK(e.node_j() == dom.n - 3);
  }
}
