#include "cwave/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace cwave {

static_assert(std::endian::native == std::endian::little, "chart dumps assume a little-endian host");

namespace {

constexpr char kMagic[8] = {'C', 'W', 'C', 'H', 'A', 'R', 'T', '\0'};

Json label_point(const LabelPoint& p) {
  return Json{{"X", number(p.X)}, {"Y", number(p.Y)}, {"t", number(p.t)}, {"x", number(p.x)}};
}

const char* special_name(SpecialKind k) {
  switch (k) {
    case SpecialKind::AlphaFold: return "alpha_fold";
    case SpecialKind::BetaFold: return "beta_fold";
    case SpecialKind::Crossing: return "crossing";
  }
  return "?";
}

void write_block(std::ostream& os, const Scalar* data, std::size_t n) {
  os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * sizeof(Scalar)));
}

void read_block(std::istream& is, Scalar* data, std::size_t n, const std::filesystem::path& file) {
  is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * sizeof(Scalar)));
  if (!is) throw ConfigError("chart file " + file.string() + ": truncated data");
}

std::string fmt(Scalar v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return {buf, static_cast<std::size_t>(n)};
}

}  // namespace

Json number(Scalar v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

const char* speed_kind_name(SpeedKind k) {
  switch (k) {
    case SpeedKind::Constant: return "constant";
    case SpeedKind::Cosine: return "cosine";
    case SpeedKind::GaussianBump: return "gaussian_bump";
    case SpeedKind::CosinePolynomial: return "cosine_polynomial";
    case SpeedKind::Polynomial: return "polynomial";
  }
  return "?";
}

SpeedKind speed_kind_from_name(const std::string& name) {
  for (SpeedKind k : {SpeedKind::Constant, SpeedKind::Cosine, SpeedKind::GaussianBump, SpeedKind::CosinePolynomial,
                      SpeedKind::Polynomial})
    if (name == speed_kind_name(k)) return k;
  throw ConfigError("unknown wave speed kind '" + name + "'");
}

Json as_json(const WaveSpeed& ws) {
  return Json{{"kind", speed_kind_name(ws.kind())},
              {"coeffs", ws.coeffs()},
              {"u_range", {ws.u_range().lo, ws.u_range().hi}}};
}

WaveSpeed speed_from_json(const Json& j) {
  try {
    Interval r{-8, 8};
    if (j.contains("u_range")) r = {j.at("u_range").at(0).get<Scalar>(), j.at("u_range").at(1).get<Scalar>()};
    return {speed_kind_from_name(j.at("kind").get<std::string>()), j.at("coeffs").get<std::vector<Scalar>>(), r};
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("wave speed: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

Json as_json(const SingularityReport& r) {
  Json j;
  j["first_time"] = number(r.first_time);
  j["threshold"] = r.threshold;
  j["near_nodes"] = r.near_nodes;
  for (const char* key : {"alpha_level", "beta_level"}) {
    const auto& lines = std::strcmp(key, "alpha_level") == 0 ? r.alpha_level : r.beta_level;
    Json a = Json::array();
    for (const auto& pl : lines) {
      Json line = Json::array();
      for (const auto& p : pl) line.push_back(label_point(p));
      a.push_back(std::move(line));
    }
    j[key] = std::move(a);
  }
  Json pts = Json::array();
  for (const auto& p : r.points) {
    Json e = label_point(p.where);
    e["kind"] = special_name(p.kind);
    e["d1"] = number(p.d1);
    e["d2"] = number(p.d2);
    e["degenerate"] = p.degenerate;
    pts.push_back(std::move(e));
  }
  j["points"] = std::move(pts);
  return j;
}

Json as_json(const NormSample& s) {
  Json I = Json::array();
  for (Scalar v : s.norm.I) I.push_back(number(v));
  return Json{{"tau", s.tau}, {"norm", number(s.norm.total)}, {"I", I}, {"a", number(s.a)}, {"energy", number(s.energy)}};
}

Json as_json(const PathLength& p) {
  Json samples = Json::array();
  for (std::size_t k = 0; k < p.samples.size(); ++k) {
    Json s = as_json(p.samples[k]);
    s["theta"] = p.thetas[k];
    samples.push_back(std::move(s));
  }
  return Json{{"length", number(p.length)}, {"samples", samples}};
}

Json as_json(const LipschitzTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows)
    rows.push_back(Json{{"tau", r.tau},
                        {"length", number(r.length)},
                        {"ratio", number(r.ratio)},
                        {"a_integral", number(r.a_integral)},
                        {"envelope", number(r.envelope)},
                        {"violation", r.violation},
                        {"distance", number(r.endpoint.value)},
                        {"distance_exceeds_cap", r.endpoint.exceeds_cap},
                        {"distance_ratio", number(r.distance_ratio)}});
  return Json{{"label", t.label}, {"C", number(t.C)}, {"violations", t.violations}, {"degenerate", t.degenerate},
              {"rows", rows}};
}

Json as_json(const BoundReport& r) {
  const auto& s = r.sobolev;
  return Json{{"label", r.label},
              {"length", number(r.length)},
              {"sobolev", {{"h1_u0", s.h1_u0}, {"w11_u0", s.w11_u0}, {"l2_u1", s.l2_u1}, {"l1_u1", s.l1_u1},
                           {"total", s.total()}}},
              {"l1", number(r.transport.l1)},
              {"wasserstein", number(r.transport.wasserstein)},
              {"mass_gap", number(r.transport.mass_gap)},
              {"upper_ratio", number(r.upper_ratio)},
              {"lower_ratio", number(r.lower_ratio)}};
}

Json as_json(const ChainCheck& c) {
  return Json{{"C_upper", number(c.C_upper)},
              {"delta0", number(c.delta0)},
              {"upper_violations", c.upper_violations},
              {"lower_violations", c.lower_violations}};
}

Json as_json(const GronwallSeries& g) {
  auto arr = [](const std::vector<Scalar>& v) {
    Json a = Json::array();
    for (Scalar x : v) a.push_back(number(x));
    return a;
  };
  return Json{{"label", g.label}, {"tau", arr(g.taus)}, {"norm", arr(g.norms)}, {"a", arr(g.a)},
              {"error", arr(g.errors)}};
}

Json as_json(const GronwallResult& r) {
  return Json{{"C", number(r.C)}, {"violations", r.violations}, {"samples", r.samples},
              {"worst_excess", number(r.worst_excess)}};
}

void write_slice_csv(std::ostream& os, const SliceSamples& s) {
  os << "x,u,ut,ux,R,S,e\n";
  for (Index k = 0; k < s.x.size(); ++k)
    os << fmt(s.x(k)) << ',' << fmt(s.u(k)) << ',' << fmt(s.ut(k)) << ',' << fmt(s.ux(k)) << ',' << fmt(s.R(k))
       << ',' << fmt(s.S(k)) << ',' << fmt(s.e(k)) << '\n';
}

SliceSamples read_slice_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "x,u,ut,ux,R,S,e") throw ConfigError("slice CSV: unexpected header");
  std::vector<std::array<Scalar, 7>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::array<Scalar, 7> r{};
    const char* p = line.data();
    const char* end = p + line.size();
    for (int c = 0; c < 7; ++c) {
      auto [q, ec] = std::from_chars(p, end, r[static_cast<std::size_t>(c)]);
      if (ec != std::errc()) throw ConfigError("slice CSV: bad number in '" + line + "'");
      p = q;
      if (c < 6) {
        if (p == end || *p != ',') throw ConfigError("slice CSV: expected 7 columns in '" + line + "'");
        ++p;
      }
    }
    rows.push_back(r);
  }
  const auto n = static_cast<Index>(rows.size());
  SliceSamples s;
  std::array<Samples*, 7> cols{&s.x, &s.u, &s.ut, &s.ux, &s.R, &s.S, &s.e};
  for (int c = 0; c < 7; ++c) {
    cols[static_cast<std::size_t>(c)]->resize(n);
    for (Index k = 0; k < n; ++k) (*cols[static_cast<std::size_t>(c)])(k) = rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
  }
  return s;
}

void write_chart(const std::filesystem::path& file, const CharChart& chart, const Json& meta) {
  Json h;
  h["format"] = "cwave-chart";
  h["version"] = kChartFormatVersion;
  h["speed"] = as_json(chart.speed());
  h["nx"] = chart.nx();
  h["ny"] = chart.ny();
  h["dtype"] = "float64-le";
  Json blocks = {"X", "Y"};
  for (const char* f : CharChart::kFieldNames) blocks.push_back(f);
  h["blocks"] = blocks;
  h["layout"] = "column-major, X index fastest";
  h["iterations"] = chart.iterations;
  h["meta"] = meta;
  const std::string header = h.dump();

  std::ofstream os(file, std::ios::binary);
  if (!os) throw Error("cannot open " + file.string() + " for writing");
  os.write(kMagic, sizeof kMagic);
  const std::uint32_t version = kChartFormatVersion, reserved = 0;
  const std::uint64_t len = header.size();
  os.write(reinterpret_cast<const char*>(&version), sizeof version);
  os.write(reinterpret_cast<const char*>(&reserved), sizeof reserved);
  os.write(reinterpret_cast<const char*>(&len), sizeof len);
  os.write(header.data(), static_cast<std::streamsize>(len));
  write_block(os, chart.X().data(), static_cast<std::size_t>(chart.nx()));
  write_block(os, chart.Y().data(), static_cast<std::size_t>(chart.ny()));
  for (int k = 0; k < 7; ++k) write_block(os, chart.field(k).data(), static_cast<std::size_t>(chart.field(k).size()));
  if (!os) throw Error("write failed: " + file.string());
}

CharChart read_chart(const std::filesystem::path& file, Json* header) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw ConfigError("cannot open chart file " + file.string());
  char magic[8];
  std::uint32_t version = 0, reserved = 0;
  std::uint64_t len = 0;
  is.read(magic, sizeof magic);
  is.read(reinterpret_cast<char*>(&version), sizeof version);
  is.read(reinterpret_cast<char*>(&reserved), sizeof reserved);
  is.read(reinterpret_cast<char*>(&len), sizeof len);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) throw ConfigError(file.string() + ": not a chart file");
  if (version != kChartFormatVersion)
    throw ConfigError(file.string() + ": unsupported chart format version " + std::to_string(version));
  if (len > (std::uint64_t{1} << 32)) throw ConfigError(file.string() + ": header too large");
  std::string text(len, '\0');
  is.read(text.data(), static_cast<std::streamsize>(len));
  if (!is) throw ConfigError(file.string() + ": truncated header");
  Json h;
  try {
    h = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ConfigError(file.string() + ": bad header: " + e.what());
  }
  const auto nx = h.at("nx").get<Index>(), ny = h.at("ny").get<Index>();
  if (nx < 2 || ny < 2) throw ConfigError(file.string() + ": bad grid size");
  Samples X(nx), Y(ny);
  read_block(is, X.data(), static_cast<std::size_t>(nx), file);
  read_block(is, Y.data(), static_cast<std::size_t>(ny), file);
  CharChart chart(speed_from_json(h.at("speed")), X, Y);
  for (int k = 0; k < 7; ++k) read_block(is, chart.field(k).data(), static_cast<std::size_t>(nx * ny), file);
  chart.iterations = h.value("iterations", 0LL);
  if (header) *header = std::move(h);
  return chart;
}

void write_json(const std::filesystem::path& file, const Json& j) {
  std::ofstream os(file);
  if (!os) throw Error("cannot open " + file.string() + " for writing");
  os << j.dump(2) << '\n';
  if (!os) throw Error("write failed: " + file.string());
}

Json read_json(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot open " + file.string());
  try {
    return Json::parse(is, nullptr, true, true);
  } catch (const Json::exception& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
}

}  // namespace cwave
