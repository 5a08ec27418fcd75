#include "cwave/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace cwave {

namespace {

using std::filesystem::path;

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void require_positive(Scalar v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive");
}

VelocityMode mode_from_name(const std::string& s) {
  if (s == "given") return VelocityMode::Given;
  if (s == "right") return VelocityMode::RightMoving;
  if (s == "left") return VelocityMode::LeftMoving;
  throw ConfigError("velocity mode must be one of given, right, left (got '" + s + "')");
}

std::vector<Scalar> scalar_list(const Json& j, const char* key, std::vector<Scalar> fallback) {
  auto v = get_or<std::vector<Scalar>>(j, key, std::move(fallback));
  for (Scalar t : v)
    if (!std::isfinite(t) || t < 0) throw ConfigError(std::string(key) + ": times must be finite and nonnegative");
  if (!std::is_sorted(v.begin(), v.end())) throw ConfigError(std::string(key) + ": times must be sorted");
  return v;
}

// Samples file: CSV with header x,u0,u1 on a uniform grid.
InitialDatum datum_from_file(const path& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot open datum file " + file.string());
  std::string line;
  if (!std::getline(is, line) || line != "x,u0,u1") throw ConfigError(file.string() + ": expected header x,u0,u1");
  std::vector<Scalar> x, u0, u1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Scalar a, b, c;
    char k1, k2;
    if (!(ls >> a >> k1 >> b >> k2 >> c) || k1 != ',' || k2 != ',') throw ConfigError(file.string() + ": bad row");
    x.push_back(a), u0.push_back(b), u1.push_back(c);
  }
  if (x.size() < 4) throw ConfigError(file.string() + ": need at least four samples");
  auto to = [](const std::vector<Scalar>& v) { return Samples(Eigen::Map<const Samples>(v.data(), static_cast<Index>(v.size()))); };
  try {
    return InitialDatum::from_samples(to(x), to(u0), to(u1));
  } catch (const DomainError& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
}

struct BumpData {
  std::vector<Bump> u0, u1;
};

BumpData random_bumps(std::mt19937_64& rng) {
  std::uniform_real_distribution<Scalar> center(0.3, 0.7), width(0.35, 0.6), amp(-0.7, 0.7);
  BumpData d;
  d.u0.push_back({center(rng), width(rng), amp(rng)});
  d.u1.push_back({center(rng), width(rng), amp(rng)});
  return d;
}

InitialDatum scaled_to_cap(BumpData d, const WaveSpeed& ws, Scalar cap) {
  for (int it = 0; it < 60; ++it) {
    InitialDatum D = InitialDatum::from_bumps(d.u0, d.u1, VelocityMode::Given, ws);
    if (energy(D, ws) <= cap) return D;
    for (auto* v : {&d.u0, &d.u1})
      for (auto& b : *v) b.amplitude *= 0.9;
  }
  throw DomainError("random datum: cannot meet the energy cap");
}

// Datum file names become absolute so that a manifest can be re-run from anywhere.
void absolutize(Json& j, const path& base) {
  if (j.is_object()) {
    for (auto& [k, v] : j.items()) {
      if (k == "file" && v.is_string()) {
        const path f = v.get<std::string>();
        v = std::filesystem::absolute(f.is_absolute() ? f : base / f).lexically_normal().string();
      } else {
        absolutize(v, base);
      }
    }
  } else if (j.is_array()) {
    for (auto& v : j) absolutize(v, base);
  }
}

void write_text(const path& file, const std::string& s) {
  std::ofstream os(file, std::ios::binary);
  os << s;
  if (!os) throw Error("write failed: " + file.string());
}

}  // namespace

std::vector<Bump> bumps_from_json(const Json& j) {
  std::vector<Bump> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw ConfigError("bump list must be an array");
  for (const auto& b : j) {
    Bump x;
    if (b.is_array()) {
      if (b.size() != 3) throw ConfigError("bump arrays are [center, width, amplitude]");
      x = {b[0].get<Scalar>(), b[1].get<Scalar>(), b[2].get<Scalar>()};
    } else {
      x = {get_or<Scalar>(b, "center", 0.5), get_or<Scalar>(b, "width", 0.5), get_or<Scalar>(b, "amplitude", 0)};
    }
    require_positive(x.width, "bump width");
    out.push_back(x);
  }
  return out;
}

InitialDatum datum_from_json(const Json& j, const WaveSpeed& ws, const path& base_dir) {
  if (!j.is_object()) throw ConfigError("datum must be an object");
  if (j.contains("file")) return datum_from_file(base_dir / j.at("file").get<std::string>());
  if (get_or<bool>(j, "zero", false)) return InitialDatum::zero();
  const auto u0 = bumps_from_json(j.value("u0", Json()));
  const auto u1 = bumps_from_json(j.value("u1", Json()));
  if (u0.empty() && u1.empty()) throw ConfigError("datum needs u0 or u1 bumps, a file, or \"zero\": true");
  return InitialDatum::from_bumps(u0, u1, mode_from_name(get_or<std::string>(j, "mode", "given")), ws);
}

PathOfData path_from_json(const Json& j, const WaveSpeed& ws, int M, const path& base_dir) {
  if (!j.is_object()) throw ConfigError("path must be an object");
  const std::string type = get_or<std::string>(j, "type", "");
  Scalar cap = get_or<Scalar>(j, "energy_cap", 0);
  auto finish = [&](PathOfData p) {
    if (cap > 0) return PathOfData(
        [p](Scalar th) { return p.at(th); }, p.thetas(), cap, p.label());
    Scalar E = 0;
    for (Scalar th : p.thetas()) E = std::max(E, energy(p.at(th), ws));
    return PathOfData([p](Scalar th) { return p.at(th); }, p.thetas(), std::max<Scalar>(E * 1.01, 1e-12), p.label());
  };
  if (type == "constant") return finish(constant_path(datum_from_json(j.at("datum"), ws, base_dir), M, 1));
  if (type == "translation")
    return finish(translation_path(datum_from_json(j.at("datum"), ws, base_dir), get_or<Scalar>(j, "shift", 0.1), M, 1));
  if (type == "vertical_velocity")
    return finish(vertical_velocity_path(datum_from_json(j.at("datum"), ws, base_dir), bumps_from_json(j.at("g")), M, 1));
  if (type == "amplitude")
    return finish(amplitude_path(bumps_from_json(j.value("u0", Json())), bumps_from_json(j.value("u1", Json())),
                                 mode_from_name(get_or<std::string>(j, "mode", "given")), ws,
                                 get_or<Scalar>(j, "a0", 0), get_or<Scalar>(j, "a1", 1), M, 1));
  if (type == "interpolated")
    return interpolated_path(datum_from_json(j.at("A"), ws, base_dir), datum_from_json(j.at("B"), ws, base_dir), ws, M,
                             cap);
  throw ConfigError("path type must be one of constant, translation, vertical_velocity, amplitude, interpolated");
}

ChartDomain domain_for(const std::vector<InitialDatum>& data, const WaveSpeed& ws, const GridConfig& g) {
  Interval s{std::numeric_limits<Scalar>::infinity(), -std::numeric_limits<Scalar>::infinity()};
  Scalar cmax = 0;
  for (const auto& d : data) {
    s.lo = std::min(s.lo, d.support().lo);
    s.hi = std::max(s.hi, d.support().hi);
    cmax = std::max(cmax, a_priori_speed_bound(d, ws, g.T).c_max);
  }
  return ChartDomain::covering(s, g.T, cmax, g.h, g.margin);
}

InitialDatum random_datum(std::uint64_t seed, const WaveSpeed& ws, Scalar cap) {
  std::mt19937_64 rng(seed);
  return scaled_to_cap(random_bumps(rng), ws, cap);
}

std::vector<std::pair<InitialDatum, InitialDatum>> random_pairs(std::uint64_t seed, int count, const WaveSpeed& ws,
                                                                Scalar cap) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Scalar> logscale(-2, -0.5), center(0.2, 0.8), width(0.3, 0.5), sign(-1, 1);
  std::vector<std::pair<InitialDatum, InitialDatum>> out;
  for (int k = 0; k < count; ++k) {
    BumpData a = random_bumps(rng);
    BumpData b = a;
    // perturbations of varying size, in u0, u1 or both
    const int which = k % 3;
    const Scalar s = std::pow(10.0, logscale(rng));
    if (which != 1) b.u0.push_back({center(rng), width(rng), s * (sign(rng) < 0 ? -1 : 1)});
    if (which != 0) b.u1.push_back({center(rng), width(rng), s * (sign(rng) < 0 ? -1 : 1)});
    out.emplace_back(scaled_to_cap(a, ws, cap), scaled_to_cap(b, ws, cap));
  }
  return out;
}

Json ExperimentConfig::resolved() const {
  Json j;
  j["kind"] = kind;
  j["speed"] = speed;
  if (!datum.is_null()) j["datum"] = datum;
  if (!path.is_null()) j["path"] = path;
  if (!pairs.is_null()) j["pairs"] = pairs;
  j["grid"] = {{"h", grid.h}, {"margin", grid.margin}, {"T", grid.T}};
  j["metric"] = {{"thetas", metric.thetas}, {"eps", metric.eps}, {"delta", metric.delta}, {"taus", metric.taus}};
  j["slice_times"] = slice_times;
  Json frozen = Json::object();
  if (frozen_C) frozen["C"] = *frozen_C;
  if (frozen_C_upper) frozen["C_upper"] = *frozen_C_upper;
  if (frozen_delta0) frozen["delta0"] = *frozen_delta0;
  j["frozen"] = frozen;
  j["seed"] = seed;
  j["threads"] = threads;
  return j;
}

ExperimentConfig parse_config(const Json& j, const path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  c.base_dir = base_dir;
  c.kind = get_or<std::string>(j, "kind", "");
  if (std::find(kExperimentKinds.begin(), kExperimentKinds.end(), c.kind) == kExperimentKinds.end())
    throw ConfigError("unknown experiment kind '" + c.kind + "'");
  if (!j.contains("speed")) throw ConfigError("config needs a \"speed\" section");
  c.speed = j.at("speed");
  (void)speed_from_json(c.speed);
  c.datum = j.value("datum", Json());
  c.path = j.value("path", Json());
  c.pairs = j.value("pairs", Json());
  absolutize(c.datum, base_dir);
  absolutize(c.path, base_dir);
  absolutize(c.pairs, base_dir);

  const Json g = j.value("grid", Json::object());
  c.grid.h = get_or<Scalar>(g, "h", c.grid.h);
  c.grid.margin = get_or<Scalar>(g, "margin", c.grid.margin);
  c.grid.T = get_or<Scalar>(g, "T", c.grid.T);
  require_positive(c.grid.h, "grid.h");
  require_positive(c.grid.margin, "grid.margin");
  require_positive(c.grid.T, "grid.T");

  const Json m = j.value("metric", Json::object());
  c.metric.thetas = get_or<int>(m, "thetas", c.metric.thetas);
  c.metric.eps = get_or<Scalar>(m, "eps", c.metric.eps);
  c.metric.delta = get_or<Scalar>(m, "delta", c.metric.delta);
  c.metric.taus = scalar_list(m, "taus", c.metric.taus);
  if (c.metric.thetas < 1) throw ConfigError("metric.thetas must be positive");
  require_positive(c.metric.eps, "metric.eps");
  require_positive(c.metric.delta, "metric.delta");
  c.slice_times = scalar_list(j, "slice_times", {});

  const Json f = j.value("frozen", Json::object());
  if (f.contains("C")) c.frozen_C = f.at("C").get<Scalar>();
  if (f.contains("C_upper")) c.frozen_C_upper = f.at("C_upper").get<Scalar>();
  if (f.contains("delta0")) c.frozen_delta0 = f.at("delta0").get<Scalar>();
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.threads = get_or<int>(j, "threads", c.threads);
  if (c.threads < 1) throw ConfigError("threads must be positive");

  for (Scalar t : c.slice_times)
    if (t > c.grid.T) throw ConfigError("slice time beyond grid.T");
  for (Scalar t : c.metric.taus)
    if (t > c.grid.T) throw ConfigError("metric time beyond grid.T");

  const bool needs_datum = c.kind == "solve" || c.kind == "slice" || c.kind == "singularities";
  const bool needs_path = c.kind == "metric" || c.kind == "lipschitz";
  if (needs_datum && c.datum.is_null()) throw ConfigError(c.kind + " needs a \"datum\" section");
  if (needs_path && c.path.is_null()) throw ConfigError(c.kind + " needs a \"path\" section");
  if (c.kind == "bounds" && c.pairs.is_null()) throw ConfigError("bounds needs a \"pairs\" section");
  if (c.kind == "slice" && c.slice_times.empty()) throw ConfigError("slice needs \"slice_times\"");
  if (c.kind == "lipschitz" && (c.metric.taus.empty() || c.metric.taus.front() != 0))
    throw ConfigError("lipschitz: metric.taus must start at 0");
  return c;
}

std::string file_digest(const path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw Error("cannot read " + file.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (is.read(buf, sizeof buf) || is.gcount() > 0) {
    for (std::streamsize k = 0; k < is.gcount(); ++k) {
      h ^= static_cast<unsigned char>(buf[k]);
      h *= 0x100000001b3ULL;
    }
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  const WaveSpeed ws = speed_from_json(cfg.speed);
  std::filesystem::create_directories(cfg.out);
  RunResult res;
  auto emit_json = [&](const std::string& name, const Json& j) {
    write_json(cfg.out / name, j);
    res.files.push_back(cfg.out / name);
  };
  SolveOptions so;
  so.threads = cfg.threads;

  if (cfg.kind == "solve" || cfg.kind == "slice" || cfg.kind == "singularities") {
    const InitialDatum d = datum_from_json(cfg.datum, ws, cfg.base_dir);
    const ChartDomain dom = domain_for({d}, ws, cfg.grid);
    so.t_stop = cfg.grid.T + std::max<Scalar>(0.05, 10 * cfg.grid.h);
    const CharChart chart = solve_chart(d, ws, dom, so);
    if (cfg.kind == "solve") {
      write_chart(cfg.out / "chart.bin", chart, Json{{"T", cfg.grid.T}});
      res.files.push_back(cfg.out / "chart.bin");
      const auto rr = residuals(chart);
      emit_json("solve.json", Json{{"nx", chart.nx()},
                                   {"ny", chart.ny()},
                                   {"h", chart.h()},
                                   {"domain", {dom.a, dom.b}},
                                   {"iterations", chart.iterations},
                                   {"max_residual", number(rr.worst())}});
    } else if (cfg.kind == "slice") {
      Json index = Json::array();
      for (std::size_t k = 0; k < cfg.slice_times.size(); ++k) {
        const Scalar tau = cfg.slice_times[k];
        const PhysicalSlice s = reconstruct_slice(chart, extract_level_curve(chart, tau));
        char name[32];
        std::snprintf(name, sizeof name, "slice_%03zu.csv", k);
        std::ostringstream os;
        write_slice_csv(os, s.grid);
        write_text(cfg.out / name, os.str());
        res.files.push_back(cfg.out / name);
        index.push_back(Json{{"tau", tau}, {"file", name}, {"energy", s.energy},
                             {"energy_backward", s.energy_backward}, {"energy_forward", s.energy_forward}});
      }
      emit_json("slices.json", Json{{"E0", energy(d, ws)}, {"slices", index}});
    } else {
      emit_json("singularities.json", as_json(detect_singularities(chart)));
    }
  } else if (cfg.kind == "metric" || cfg.kind == "lipschitz") {
    const PathOfData p = path_from_json(cfg.path, ws, cfg.metric.thetas, cfg.base_dir);
    std::vector<InitialDatum> data;
    for (Scalar th : p.thetas()) data.push_back(p.at(th));
    const ChartDomain dom = domain_for(data, ws, cfg.grid);
    PathLengthOptions po;
    po.tangent.eps = cfg.metric.eps;
    po.tangent.solve = so;
    po.weights.delta = cfg.metric.delta;
    if (cfg.kind == "metric") {
      const auto lengths = path_lengths(p, cfg.metric.taus, ws, dom, po);
      Json rows = Json::array();
      for (std::size_t k = 0; k < lengths.size(); ++k) {
        Json r = as_json(lengths[k]);
        r["tau"] = cfg.metric.taus[k];
        rows.push_back(std::move(r));
      }
      emit_json("metric.json", Json{{"path", p.label()}, {"energy_cap", p.energy_cap()}, {"times", rows}});
    } else {
      const auto tab = lipschitz_experiment(p, cfg.metric.taus, ws, dom, po, cfg.frozen_C);
      std::ostringstream os;
      os << "tau,length,ratio,a_integral,envelope,violation,distance,distance_ratio,distance_exceeds_cap\n";
      os.precision(17);
      for (const auto& r : tab.rows)
        os << r.tau << ',' << r.length << ',' << r.ratio << ',' << r.a_integral << ',' << r.envelope << ','
           << r.violation << ',' << r.endpoint.value << ',' << r.distance_ratio << ',' << r.endpoint.exceeds_cap
           << '\n';
      write_text(cfg.out / "lipschitz.csv", os.str());
      res.files.push_back(cfg.out / "lipschitz.csv");
      emit_json("lipschitz.json", as_json(tab));
    }
  } else if (cfg.kind == "bounds") {
    std::vector<std::pair<InitialDatum, InitialDatum>> pairs;
    std::vector<std::string> labels;
    const Json& P = cfg.pairs;
    if (P.is_object() && P.contains("random")) {
      const Json& r = P.at("random");
      const int count = get_or<int>(r, "count", 10);
      const Scalar cap = get_or<Scalar>(r, "energy_cap", 1);
      pairs = random_pairs(cfg.seed, count, ws, cap);
      for (int k = 0; k < count; ++k) labels.push_back("random-" + std::to_string(k));
    } else if (P.is_array()) {
      for (std::size_t k = 0; k < P.size(); ++k) {
        pairs.emplace_back(datum_from_json(P[k].at("A"), ws, cfg.base_dir), datum_from_json(P[k].at("B"), ws, cfg.base_dir));
        labels.push_back(get_or<std::string>(P[k], "label", "pair-" + std::to_string(k)));
      }
    } else {
      throw ConfigError("pairs must be an array of {A, B} or {\"random\": {...}}");
    }
    PathLengthOptions po;
    po.tangent.eps = cfg.metric.eps;
    po.tangent.solve = so;
    po.weights.delta = cfg.metric.delta;
    std::vector<BoundReport> reports;
    Json arr = Json::array();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      GridConfig g = cfg.grid;
      g.T = std::max<Scalar>(0.05, 10 * g.h);
      const ChartDomain dom = domain_for({pairs[k].first, pairs[k].second}, ws, g);
      reports.push_back(bound_report(pairs[k].first, pairs[k].second, ws, dom, cfg.metric.thetas, po, labels[k]));
      arr.push_back(as_json(reports.back()));
    }
    const ChainCheck fitted = check_chains(reports);
    Json out{{"reports", arr}, {"fitted", as_json(fitted)}};
    if (cfg.frozen_C_upper || cfg.frozen_delta0)
      out["frozen"] = as_json(check_chains(reports, cfg.frozen_C_upper, cfg.frozen_delta0));
    emit_json("bounds.json", out);
  }

  Json outputs = Json::array();
  for (const auto& f : res.files)
    outputs.push_back(Json{{"file", f.filename().string()},
                           {"bytes", std::filesystem::file_size(f)},
                           {"fnv1a64", file_digest(f)}});
  const Json manifest{{"program", "cwave"}, {"version", CWAVE_VERSION}, {"config", cfg.resolved()},
                      {"outputs", outputs}};
  write_json(cfg.out / "manifest.json", manifest);
  res.files.push_back(cfg.out / "manifest.json");
  return res;
}

}  // namespace cwave
