#include "cwave/bounds.hpp"

#include "cwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cwave {

namespace {

Interval hull(Interval a, Interval b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

// Adaptive Simpson over equal panels, so that kinks of |f| stay local.
Scalar panel_integral(const std::function<Scalar(Scalar)>& f, Interval I, Scalar tol, int panels = 64) {
  if (!(I.hi > I.lo)) return 0;
  const Scalar w = I.length() / panels;
  std::vector<Scalar> parts(static_cast<std::size_t>(panels));
  for (int k = 0; k < panels; ++k)
    parts[static_cast<std::size_t>(k)] = adaptive_simpson(f, I.lo + k * w, I.lo + (k + 1) * w, tol / panels);
  return pairwise_sum(parts);
}

Samples uniform_grid(Interval I, Index n) { return Samples::LinSpaced(n, I.lo, I.hi); }

LevelCurve every_other(const LevelCurve& c) {
  const Index n = c.size();
  std::vector<Index> keep;
  for (Index k = 0; k < n; k += 2) keep.push_back(k);
  if (keep.back() != n - 1) keep.push_back(n - 1);
  const auto m = static_cast<Index>(keep.size());
  LevelCurve s;
  s.tau = c.tau;
  const std::array<std::pair<const Samples*, Samples*>, 9> F{{{&c.X, &s.X},
                                                             {&c.Y, &s.Y},
                                                             {&c.u, &s.u},
                                                             {&c.alpha, &s.alpha},
                                                             {&c.beta, &s.beta},
                                                             {&c.p, &s.p},
                                                             {&c.q, &s.q},
                                                             {&c.x, &s.x},
                                                             {&c.t, &s.t}}};
  for (auto [src, dst] : F) {
    dst->resize(m);
    for (Index k = 0; k < m; ++k) (*dst)(k) = (*src)(keep[static_cast<std::size_t>(k)]);
  }
  for (Index k : keep) s.edges.push_back(c.edges[static_cast<std::size_t>(k)]);
  return s;
}

Scalar norm_on(const TangentField& tf, const LevelCurve& c, const NormWeights& nw) {
  const CurveTangent ct = shifts_and_vertical(tf, c);
  return tangent_norm(c, integrands(c, ct, tf.base.speed()), weights_along_curve(c), nw).total;
}

}  // namespace

PathOfData interpolated_path(const InitialDatum& A, const InitialDatum& B, const WaveSpeed& ws, int M,
                             Scalar energy_cap) {
  if (!(energy_cap > 0)) energy_cap = std::max(energy(A, ws), energy(B, ws)) * (1 + 1e-9);
  const Interval supp = hull(A.support(), B.support());
  auto family = [A, B, ws, supp](Scalar th) -> InitialDatum {
    if (th == 0) return A;
    if (th == 1) return B;
    auto eval = [A, B, ws, th](Scalar x) {
      const DatumPoint a = A(x), b = B(x);
      DatumPoint r;
      r.u1 = th * b.u1 + (1 - th) * a.u1;
      if (a.u0 == b.u0) {
        r.u0 = a.u0;
      } else {
        const Scalar target = th * ws.psi(b.u0) + (1 - th) * ws.psi(a.u0);
        r.u0 = ws.psi_inv(target, 1e-14);
      }
      r.u0x = (th * ws(b.u0) * b.u0x + (1 - th) * ws(a.u0) * a.u0x) / ws(r.u0);
      return r;
    };
    std::ostringstream os;
    os << "interp(" << A.label() << ", " << B.label() << ", " << th << ")";
    return {eval, supp, os.str()};
  };
  return {family, uniform_thetas(M), energy_cap, "interpolated"};
}

SobolevParts sobolev_rhs(const InitialDatum& A, const InitialDatum& B, Scalar tol) {
  const Interval I = hull(A.support(), B.support());
  SobolevParts s;
  auto diff = [&](Scalar x) {
    const DatumPoint a = A(x), b = B(x);
    return DatumPoint{a.u0 - b.u0, a.u0x - b.u0x, a.u1 - b.u1};
  };
  const Scalar l2 = panel_integral([&](Scalar x) { return std::pow(diff(x).u0, 2); }, I, tol);
  const Scalar l2x = panel_integral([&](Scalar x) { return std::pow(diff(x).u0x, 2); }, I, tol);
  s.h1_u0 = std::sqrt(l2 + l2x);
  s.w11_u0 = panel_integral([&](Scalar x) { return std::abs(diff(x).u0); }, I, tol) +
             panel_integral([&](Scalar x) { return std::abs(diff(x).u0x); }, I, tol);
  s.l2_u1 = std::sqrt(panel_integral([&](Scalar x) { return std::pow(diff(x).u1, 2); }, I, tol));
  s.l1_u1 = panel_integral([&](Scalar x) { return std::abs(diff(x).u1); }, I, tol);
  return s;
}

TransportBounds transport_lower_bounds(const InitialDatum& A, const InitialDatum& B, const WaveSpeed& ws,
                                       Index samples) {
  if (samples < 3) throw DomainError("transport bounds: need at least three samples");
  const Interval I = hull(A.support(), B.support());
  TransportBounds tb;
  tb.l1 = panel_integral([&](Scalar x) { return std::abs(A(x).u0 - B(x).u0); }, I, 1e-12);

  // rho = density(A) - density(B); F its distribution function.
  const Samples xs = uniform_grid(I, samples);
  Samples rho(samples);
  for (Index k = 0; k < samples; ++k) {
    const DatumPoint a = A(xs(k)), b = B(xs(k));
    const Scalar ea = a.u1 * a.u1 + std::pow(ws(a.u0) * a.u0x, 2);
    const Scalar eb = b.u1 * b.u1 + std::pow(ws(b.u0) * b.u0x, 2);
    rho(k) = ea - eb;
  }
  const Samples F = cumulative_trapezoid(xs, rho);
  const Scalar delta = F(samples - 1);
  const Scalar absF = trapezoid(xs, F.abs());
  tb.mass_gap = std::abs(delta);
  tb.wasserstein = tb.mass_gap;
  if (!(absF > 0)) return tb;

  // f = b - G with G' = sign(F), G(center) = 0: int f rho = b delta - (G(end) delta - int |F|).
  const Samples sg = F.unaryExpr([](Scalar v) { return static_cast<Scalar>((v > 0) - (v < 0)); });
  const Samples G0 = cumulative_trapezoid(xs, sg);
  constexpr int kCenters = 9, kLevels = 801;
  for (int ci = 0; ci < kCenters; ++ci) {
    const Index kc = (samples - 1) * ci / (kCenters - 1);
    const Samples G = G0 - G0(kc);
    const Scalar gmin = G.minCoeff(), gmax = G.maxCoeff(), gend = G(samples - 1);
    const Scalar span = gmax - gmin + 1;
    for (int bi = 0; bi < kLevels; ++bi) {
      const Scalar b = gmin - span + 3 * span * bi / (kLevels - 1);
      const Scalar value = std::abs(b * delta - (gend * delta - absF));
      const Scalar c1 = std::max(std::abs(b - gmin), std::abs(b - gmax)) + 1;
      tb.wasserstein = std::max(tb.wasserstein, value / c1);
    }
  }
  return tb;
}

BoundReport bound_report(const InitialDatum& A, const InitialDatum& B, const WaveSpeed& ws, const ChartDomain& dom,
                         int M, const PathLengthOptions& opts, std::string label) {
  BoundReport r;
  r.label = std::move(label);
  r.length = path_length(interpolated_path(A, B, ws, M), 0, ws, dom, opts).length;
  r.sobolev = sobolev_rhs(A, B);
  r.transport = transport_lower_bounds(A, B, ws);
  const Scalar rhs = r.sobolev.total();
  r.upper_ratio = rhs > 0 ? r.length / rhs : 0;
  const Scalar lower = std::max(r.transport.l1, r.transport.wasserstein);
  r.lower_ratio = r.length > 0 ? lower / r.length : (lower > 0 ? std::numeric_limits<Scalar>::infinity() : 0);
  return r;
}

ChainCheck check_chains(const std::vector<BoundReport>& suite, std::optional<Scalar> C_upper,
                        std::optional<Scalar> delta0) {
  ChainCheck out;
  for (const auto& r : suite) {
    out.C_upper = std::max(out.C_upper, r.upper_ratio);
    out.delta0 = std::max(out.delta0, r.lower_ratio);
  }
  if (C_upper) {
    out.C_upper = *C_upper;
    for (const auto& r : suite)
      if (r.length > *C_upper * r.sobolev.total()) ++out.upper_violations;
  }
  if (delta0) {
    out.delta0 = *delta0;
    for (const auto& r : suite)
      if (std::max(r.transport.l1, r.transport.wasserstein) > *delta0 * r.length) ++out.lower_violations;
  }
  return out;
}

SliceDistance h1l2_distance(const PhysicalSlice& a, const PhysicalSlice& b) {
  const SliceSamples& A = a.grid;
  const SliceSamples& B = b.grid;
  SliceDistance d;
  auto at_clip = [](const PhysicalSlice& s) {
    const Scalar m = std::max(s.points.R.abs().maxCoeff(), s.points.S.abs().maxCoeff());
    return m >= s.clip * (1 - 1e-12);
  };
  d.exceeds_cap = at_clip(a) || at_clip(b);

  const Scalar lo = std::min(A.x(0), B.x(0));
  const Scalar hi = std::max(A.x(A.x.size() - 1), B.x(B.x.size() - 1));
  const Scalar dx = std::min(A.x(1) - A.x(0), B.x(1) - B.x(0));
  const Index n = std::max<Index>(2, static_cast<Index>(std::ceil((hi - lo) / dx)) + 1);
  const Samples xs = uniform_grid({lo, hi}, n);
  Samples du(n), dux(n), dut(n);
  // u is extended by its end values, u_x and u_t by zero
  auto ext0 = [](const Samples& x, const Samples& f, Scalar v) {
    return (v < x(0) || v > x(x.size() - 1)) ? 0.0 : interp_linear(x, f, v);
  };
  for (Index k = 0; k < n; ++k) {
    const Scalar v = xs(k);
    du(k) = interp_linear(A.x, A.u, v) - interp_linear(B.x, B.u, v);
    dux(k) = ext0(A.x, A.ux, v) - ext0(B.x, B.ux, v);
    dut(k) = ext0(A.x, A.ut, v) - ext0(B.x, B.ut, v);
  }
  d.value = std::sqrt(trapezoid(xs, du.square()) + trapezoid(xs, dux.square())) +
            std::sqrt(trapezoid(xs, dut.square()));
  return d;
}

LipschitzTable lipschitz_experiment(const PathOfData& path, const std::vector<Scalar>& taus, const WaveSpeed& ws,
                                    const ChartDomain& dom, const PathLengthOptions& opts,
                                    std::optional<Scalar> C_frozen, Scalar slack) {
  if (taus.empty() || taus.front() != 0) throw DomainError("lipschitz: the time grid must start at 0");
  for (std::size_t k = 1; k < taus.size(); ++k)
    if (!(taus[k] > taus[k - 1])) throw DomainError("lipschitz: times must increase");

  LipschitzTable tab;
  tab.label = path.label();
  const auto lengths = path_lengths(path, taus, ws, dom, opts);
  const std::size_t nt = taus.size(), nth = path.thetas().size();
  const Scalar L0 = lengths.front().length;
  tab.degenerate = !(L0 > 0);

  // endpoint slices
  SolveOptions so = opts.tangent.solve;
  if (!std::isfinite(so.t_stop)) so.t_stop = taus.back() + std::max<Scalar>(0.05, 10 * dom.h());
  const CharChart c0 = solve_chart(path.at(path.thetas().front()), ws, dom, so);
  const CharChart c1 = solve_chart(path.at(path.thetas().back()), ws, dom, so);

  tab.rows.resize(nt);
  std::vector<Scalar> acc(nth, 0);
  for (std::size_t k = 0; k < nt; ++k) {
    LipschitzRow& row = tab.rows[k];
    row.tau = taus[k];
    row.length = lengths[k].length;
    row.ratio = tab.degenerate ? 1 : (k == 0 ? 1 : row.length / L0);
    if (k > 0) {
      const Scalar dt = taus[k] - taus[k - 1];
      for (std::size_t m = 0; m < nth; ++m)
        acc[m] += 0.5 * dt * (lengths[k].samples[m].a + lengths[k - 1].samples[m].a);
    }
    row.a_integral = *std::max_element(acc.begin(), acc.end());
    try {
      const PhysicalSlice s0 = reconstruct_slice(c0, extract_level_curve(c0, row.tau, opts.curve));
      const PhysicalSlice s1 = reconstruct_slice(c1, extract_level_curve(c1, row.tau, opts.curve));
      row.endpoint = h1l2_distance(s0, s1);
    } catch (const SolverError& e) {
      std::ostringstream os;
      os << "lipschitz '" << path.label() << "' at tau = " << row.tau << ": " << e.what();
      throw SolverError(os.str(), e.node_i(), e.node_j());
    }
  }
  const Scalar d0 = tab.rows.front().endpoint.value;
  for (auto& row : tab.rows)
    row.distance_ratio = d0 > 0 ? row.endpoint.value / d0
                                : (row.endpoint.value > 0 ? std::numeric_limits<Scalar>::infinity() : 1);

  if (C_frozen) {
    tab.C = *C_frozen;
  } else {
    tab.C = 0;
    for (const auto& row : tab.rows)
      if (row.tau > 0) tab.C = std::max(tab.C, (std::log(row.ratio) - row.a_integral) / row.tau);
  }
  for (auto& row : tab.rows) {
    row.envelope = std::exp(tab.C * row.tau + row.a_integral);
    row.violation = row.ratio > row.envelope * (1 + slack);
    if (row.violation) ++tab.violations;
  }
  return tab;
}

GronwallSeries gronwall_series(const TangentField& tf, const std::vector<Scalar>& taus, const NormWeights& nw,
                               std::string label) {
  GronwallSeries g;
  g.label = std::move(label);
  for (Scalar tau : taus) {
    const LevelCurve c = extract_level_curve(tf.base, tau);
    const Scalar full = norm_on(tf, c, nw);
    const Scalar half = norm_on(tf, every_other(c), nw);
    g.taus.push_back(tau);
    g.norms.push_back(full);
    g.a.push_back(interaction_rate(c, tf.base.speed()));
    // trapezoid error scales by 4 on halving
    g.errors.push_back(std::abs(half - full) / 3);
  }
  return g;
}

GronwallResult gronwall_check(const std::vector<GronwallSeries>& suite, std::optional<Scalar> C_frozen,
                              Scalar tol_factor) {
  struct Sample {
    Scalar excess, tol;
  };
  std::vector<Sample> all;
  for (const auto& g : suite) {
    const std::size_t n = g.taus.size();
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const Scalar Nm = g.norms[k - 1], Np = g.norms[k + 1];
      if (!(Nm > 0) || !(Np > 0)) continue;
      const Scalar dt = g.taus[k + 1] - g.taus[k - 1];
      const Scalar D = (std::log(Np) - std::log(Nm)) / dt;
      const Scalar err = (g.errors[k + 1] / Np + g.errors[k - 1] / Nm) / dt;
      all.push_back({D - g.a[k], tol_factor * err});
    }
  }
  GronwallResult r;
  r.samples = static_cast<int>(all.size());
  if (C_frozen) {
    r.C = *C_frozen;
  } else {
    r.C = 0;
    for (const auto& s : all) r.C = std::max(r.C, s.excess);
  }
  r.worst_excess = -std::numeric_limits<Scalar>::infinity();
  for (const auto& s : all) {
    const Scalar e = s.excess - r.C - s.tol;
    r.worst_excess = std::max(r.worst_excess, e);
    if (e > 0) ++r.violations;
  }
  if (all.empty()) r.worst_excess = 0;
  return r;
}

}  // namespace cwave
