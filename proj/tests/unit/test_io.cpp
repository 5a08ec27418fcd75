#include "cwave/experiment.hpp"

#include "doctest.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

using namespace cwave;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("cwave_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

bool same_bits(const Field& a, const Field& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::memcmp(a.data(), b.data(), static_cast<std::size_t>(a.size()) * sizeof(Scalar)) == 0;
}

}  // namespace

TEST_CASE("chart dump round trip") {
  const auto ws = WaveSpeed::cosine(2, 1);
  const auto d = InitialDatum::from_bumps({{0.5, 1, 0.5}}, {{0.5, 1, 0.3}}, VelocityMode::Given, ws);
  const auto ch = solve_chart(d, ws, ChartDomain::covering(d.support(), 0.2, 3, 1.0 / 32), {.t_stop = 0.3});
  const auto dir = scratch("chart");
  write_chart(dir / "c.bin", ch, Json{{"note", "x"}});
  Json h;
  const auto back = read_chart(dir / "c.bin", &h);
  CHECK(h.at("version") == kChartFormatVersion);
  CHECK(h.at("meta").at("note") == "x");
  CHECK(back.speed().kind() == SpeedKind::Cosine);
  CHECK(back.speed().coeffs() == ws.coeffs());
  CHECK((back.X() == ch.X()).all());
  CHECK((back.Y() == ch.Y()).all());
  for (int k = 0; k < 7; ++k) CHECK(same_bits(back.field(k), ch.field(k)));
  CHECK(back.iterations == ch.iterations);

  std::ofstream(dir / "junk.bin") << "not a chart";
  CHECK_THROWS_AS(read_chart(dir / "junk.bin"), ConfigError);
}

TEST_CASE("slice CSV round trip") {
  SliceSamples s;
  s.x = Samples::LinSpaced(5, -1, 1);
  s.u = s.x.sin();
  s.ut = s.x.cos();
  s.ux = s.x * 1e-300;
  s.R = s.x + 1.0 / 3;
  s.S = -s.x;
  s.e = s.x.square();
  std::stringstream ss;
  write_slice_csv(ss, s);
  CHECK(ss.str().rfind("x,u,ut,ux,R,S,e\n", 0) == 0);
  const auto back = read_slice_csv(ss);
  CHECK((back.x == s.x).all());
  CHECK((back.u == s.u).all());
  CHECK((back.ux == s.ux).all());
  CHECK((back.R == s.R).all());
  CHECK((back.e == s.e).all());
}

TEST_CASE("speed descriptors") {
  for (const auto& ws : {WaveSpeed::constant(1), WaveSpeed::cosine(2, 1), WaveSpeed::gaussian_bump(1, 0.5, 0.7),
                         WaveSpeed::cosine_polynomial({2, 0.3}), WaveSpeed::polynomial({1, 0.1}, {-2, 2})}) {
    const auto back = speed_from_json(as_json(ws));
    CHECK(back.kind() == ws.kind());
    CHECK(back.coeffs() == ws.coeffs());
    CHECK(back.u_range().lo == ws.u_range().lo);
  }
  CHECK_THROWS_AS(speed_from_json(Json{{"kind", "sine"}, {"coeffs", {1}}}), ConfigError);
  CHECK_THROWS_AS(speed_from_json(Json{{"kind", "cosine"}, {"coeffs", {1, 2}}}), ConfigError);
}

TEST_CASE("config validation") {
  const Json base{{"kind", "solve"}, {"speed", {{"kind", "constant"}, {"coeffs", {1}}}}, {"datum", {{"zero", true}}}};
  CHECK_NOTHROW(parse_config(base));
  auto bad = [&](auto edit) {
    Json j = base;
    edit(j);
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  };
  bad([](Json& j) { j["kind"] = "plot"; });
  bad([](Json& j) { j.erase("speed"); });
  bad([](Json& j) { j.erase("datum"); });
  bad([](Json& j) { j["grid"] = {{"h", -0.1}}; });
  bad([](Json& j) { j["grid"] = {{"T", 0}}; });
  bad([](Json& j) { j["metric"] = {{"thetas", 0}}; });
  bad([](Json& j) { j["metric"] = {{"eps", 0}}; });
  bad([](Json& j) { j["kind"] = "slice"; });
  bad([](Json& j) {
    j["kind"] = "lipschitz";
    j["path"] = {{"type", "constant"}, {"datum", {{"zero", true}}}};
    j["metric"] = {{"taus", {0.1, 0.2}}};
  });
  bad([](Json& j) { j["slice_times"] = {0.5, 0.2}; });

  const auto c = parse_config(base);
  const auto again = parse_config(c.resolved());
  CHECK(again.resolved() == c.resolved());
}

TEST_CASE("datum and path descriptors") {
  const auto ws = WaveSpeed::cosine(2, 1);
  const auto d = datum_from_json(Json{{"u0", {{0.5, 1, 0.4}}}, {"mode", "right"}}, ws);
  CHECK(d.riemann(0.3, ws).first == doctest::Approx(0).epsilon(1e-14));
  CHECK_THROWS_AS(datum_from_json(Json{{"u0", {{0.5, 1, 0.4}}}, {"mode", "up"}}, ws), ConfigError);
  CHECK_THROWS_AS(datum_from_json(Json::object(), ws), ConfigError);

  const auto dir = scratch("datum");
  {
    std::ofstream os(dir / "d.csv");
    os << "x,u0,u1\n";
    for (int k = 0; k <= 40; ++k) {
      const Scalar x = k / 40.0;
      os << x << ',' << std::sin(M_PI * x) * 0.2 << ",0\n";
    }
  }
  const auto f = datum_from_json(Json{{"file", "d.csv"}}, ws, dir);
  CHECK(f(0.5).u0 == doctest::Approx(0.2).epsilon(1e-6));

  const auto p = path_from_json(Json{{"type", "amplitude"}, {"u0", {{0.5, 1, 1}}}, {"a0", 0.2}, {"a1", 0.4}}, ws, 4);
  CHECK(p.thetas().size() == 5);
  CHECK(p.at(1)(0.5).u0 == doctest::Approx(0.4));
  CHECK(p.energy_cap() >= energy(p.at(1), ws));
  CHECK_THROWS_AS(path_from_json(Json{{"type", "spiral"}}, ws, 4), ConfigError);
}

TEST_CASE("random suites are reproducible and respect the cap") {
  const auto ws = WaveSpeed::cosine(2, 1);
  const auto a = random_pairs(11, 4, ws, 0.8);
  const auto b = random_pairs(11, 4, ws, 0.8);
  REQUIRE(a.size() == 4);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].first(0.45).u0 == b[k].first(0.45).u0);
    CHECK(a[k].second(0.45).u1 == b[k].second(0.45).u1);
    CHECK(energy(a[k].first, ws) <= 0.8);
    CHECK(energy(a[k].second, ws) <= 0.8);
  }
  CHECK(random_pairs(12, 1, ws, 0.8)[0].first(0.45).u0 != a[0].first(0.45).u0);
}

TEST_CASE("experiments write identical artifacts on re-run") {
  const Json j{{"kind", "slice"},
               {"speed", {{"kind", "cosine"}, {"coeffs", {2, 1}}}},
               {"datum", {{"u0", {{0.5, 1, 0.5}}}, {"u1", {{0.5, 1, 0.3}}}}},
               {"grid", {{"h", 1.0 / 32}, {"T", 0.3}}},
               {"slice_times", {0, 0.15, 0.3}},
               {"threads", 2}};
  auto c1 = parse_config(j);
  auto c2 = c1;
  c1.out = scratch("run1");
  c2.out = scratch("run2");
  const auto r1 = run_experiment(c1);
  const auto r2 = run_experiment(c2);
  REQUIRE(r1.files.size() == 5);
  for (std::size_t k = 0; k < r1.files.size(); ++k) CHECK(file_digest(r1.files[k]) == file_digest(r2.files[k]));

  // the manifest's config reproduces the run
  const Json m = read_json(c1.out / "manifest.json");
  CHECK(m.at("version") == CWAVE_VERSION);
  auto c3 = parse_config(m.at("config"));
  c3.out = scratch("run3");
  const auto r3 = run_experiment(c3);
  for (std::size_t k = 0; k < r1.files.size(); ++k) CHECK(file_digest(r1.files[k]) == file_digest(r3.files[k]));

  std::ifstream is(c1.out / "slice_001.csv");
  const auto s = read_slice_csv(is);
  CHECK(s.x.size() > 10);
}

TEST_CASE("solve of zero data") {
  const Json j{{"kind", "solve"}, {"speed", {{"kind", "cosine"}, {"coeffs", {2, 1}}}}, {"datum", {{"zero", true}}},
               {"grid", {{"h", 1.0 / 16}, {"T", 0.3}}}};
  auto c = parse_config(j);
  c.out = scratch("zero");
  const auto r = run_experiment(c);
  CHECK(std::filesystem::exists(c.out / "chart.bin"));
  CHECK(std::filesystem::exists(c.out / "manifest.json"));
  const auto ch = read_chart(c.out / "chart.bin");
  Scalar umax = 0;
  for (Index j2 = 0; j2 < ch.ny(); ++j2)
    for (Index i = 0; i < ch.nx(); ++i)
      if (ch.solved(i, j2)) umax = std::max(umax, std::abs(ch.u(i, j2)));
  CHECK(umax == 0);
}
