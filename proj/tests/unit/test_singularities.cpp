#include "cwave/oracle.hpp"
#include "cwave/singularities.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace cwave;

TEST_CASE("no singularities for zero or linear data") {
  const auto dom = ChartDomain::with_step(-2, 3, 1.0 / 32);
  const auto zero = solve_chart(InitialDatum::zero(), WaveSpeed::cosine(2, 1), dom);
  const auto rz = detect_singularities(zero);
  CHECK(rz.empty());
  CHECK(rz.points.empty());
  CHECK(std::isinf(rz.first_time));
  CHECK(rz.near_nodes == 0);

  const auto c1 = WaveSpeed::constant(1);
  const auto d = InitialDatum::from_bumps({{0.5, 0.5, 0.3}}, {{0.5, 0.5, 0.2}}, VelocityMode::Given, c1);
  CHECK(detect_singularities(solve_chart(d, c1, dom)).empty());
}

TEST_CASE("wrap_angle") {
  CHECK(wrap_angle(0) == 0);
  CHECK(wrap_angle(std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(wrap_angle(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(wrap_angle(3 * std::numbers::pi / 2) == doctest::Approx(-std::numbers::pi / 2));
}

TEST_CASE("gradient blow-up is found where the oracle loses the front") {
  const auto ws = WaveSpeed::cosine(1.5, 1);
  const auto d = InitialDatum::from_bumps({{0.5, 1, 1.6}}, {}, VelocityMode::LeftMoving, ws);
  const Scalar T = 0.8;
  const auto dom = ChartDomain::covering(d.support(), T, ws.max_speed({-2, 2}), 1.0 / 128);
  const auto ch = solve_chart(d, ws, dom, {.t_stop = T, .threads = 4});
  const auto rep = detect_singularities(ch);
  REQUIRE(!rep.alpha_level.empty());
  CHECK(rep.beta_level.empty());
  CHECK(rep.first_time > 0.5);
  CHECK(rep.first_time < 0.8);
  CHECK(rep.near_nodes > 0);

  bool fold = false;
  for (const auto& pt : rep.points)
    if (pt.kind == SpecialKind::AlphaFold && !pt.degenerate) fold = true;
  CHECK(fold);

  auto oracle_time = [&](Scalar h) {
    const auto tr = direct_solve(d, ws, 0.9, {-2, 1.5}, h);
    CHECK(!tr.resolved);
    return tr.singular_time();
  };
  const Scalar coarse = std::abs(oracle_time(1.0 / 256) - rep.first_time);
  const Scalar fine = std::abs(oracle_time(1.0 / 1024) - rep.first_time);
  CHECK(fine < 0.05 * rep.first_time);
  CHECK(fine < coarse);
}

TEST_CASE("solver failures surface from threaded marches") {
  const auto ws = WaveSpeed::cosine(2, 1);
  const auto d = InitialDatum::from_bumps({{0.5, 0.3, 1.5}}, {}, VelocityMode::LeftMoving, ws);
  const auto dom = ChartDomain::covering(d.support(), 0.8, 3, 1.0 / 64);
  auto failing_node = [&](int threads) {
    try {
      (void)solve_chart(d, ws, dom, {.t_stop = 0.8, .threads = threads});
    } catch (const SolverError& e) {
      return std::pair{e.node_i(), e.node_j()};
    }
    return std::pair<Index, Index>{-1, -1};
  };
  const auto serial = failing_node(1);
  CHECK(serial.first >= 0);
  CHECK(failing_node(4) == serial);
}
