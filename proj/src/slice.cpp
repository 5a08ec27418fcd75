#include "cwave/slice.hpp"

#include "cwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cwave {

namespace {

struct RawPoint {
  Scalar X, Y;
  EdgeRef e;
};

}  // namespace

Samples LevelCurve::dX() const {
  const Index n = size();
  if (n < 2) return Samples(0);
  return X.tail(n - 1) - X.head(n - 1);
}

Samples LevelCurve::dY() const {
  const Index n = size();
  if (n < 2) return Samples(0);
  return Y.head(n - 1) - Y.tail(n - 1);
}

Samples LevelCurve::sample(const Field& f) const {
  Samples out(size());
  for (Index k = 0; k < size(); ++k) {
    const EdgeRef& e = edges[k];
    const Scalar a = f(e.i0, e.j0);
    out(k) = e.lambda == 0 ? a : (1 - e.lambda) * a + e.lambda * f(e.i1, e.j1);
  }
  return out;
}

LevelCurve extract_level_curve(const CharChart& chart, Scalar tau, const CurveOptions& opts) {
  const Field& t = chart.t;
  Scalar tmin = std::numeric_limits<Scalar>::infinity(), tmax = -tmin;
  for (Index k = 0; k < t.size(); ++k)
    if (std::isfinite(t.data()[k])) {
      tmin = std::min(tmin, t.data()[k]);
      tmax = std::max(tmax, t.data()[k]);
    }
  if (!(tau >= tmin && tau <= tmax)) {
    std::ostringstream os;
    os << "level curve: tau = " << tau << " outside the chart time range [" << tmin << ", " << tmax << "]";
    throw DomainError(os.str());
  }

  std::vector<RawPoint> raw;
  const Samples& X = chart.X();
  const Samples& Y = chart.Y();
  // t is nondecreasing along both grid directions; take the first crossing per line.
  auto scan = [&](Index count, auto at, auto node) {
    Index k = 0;
    while (k < count && !(at(k) >= tau)) ++k;
    if (k == count || !std::isfinite(at(k))) return;
    if (at(k) == tau) {
      const auto [i, j] = node(k);
      raw.push_back({X(i), Y(j), {i, j, i, j, 0}});
      return;
    }
    if (k == 0 || !std::isfinite(at(k - 1))) return;
    const Scalar lam = (tau - at(k - 1)) / (at(k) - at(k - 1));
    const auto [i0, j0] = node(k - 1);
    const auto [i1, j1] = node(k);
    raw.push_back({(1 - lam) * X(i0) + lam * X(i1), (1 - lam) * Y(j0) + lam * Y(j1), {i0, j0, i1, j1, lam}});
  };
  for (Index i = 0; i < chart.nx(); ++i)
    scan(chart.ny(), [&](Index j) { return t(i, j); }, [&](Index j) { return std::pair{i, j}; });
  for (Index j = 0; j < chart.ny(); ++j)
    scan(chart.nx(), [&](Index i) { return t(i, j); }, [&](Index i) { return std::pair{i, j}; });

  std::sort(raw.begin(), raw.end(), [](const RawPoint& a, const RawPoint& b) {
    const Scalar ka = a.X - a.Y, kb = b.X - b.Y;
    return ka != kb ? ka < kb : a.X < b.X;
  });
  const Scalar h = chart.h();
  const Scalar dup = h * h / 10;
  std::vector<RawPoint> pts;
  for (const RawPoint& r : raw) {
    if (!pts.empty() && std::abs(r.X - pts.back().X) <= dup && std::abs(r.Y - pts.back().Y) <= dup) continue;
    pts.push_back(r);
  }
  if (pts.size() < 2) throw DomainError("level curve: fewer than two crossings found");

  LevelCurve c;
  c.tau = tau;
  const Index n = static_cast<Index>(pts.size());
  c.X.resize(n), c.Y.resize(n);
  c.edges.resize(pts.size());
  for (Index k = 0; k < n; ++k) {
    c.X(k) = pts[k].X;
    c.Y(k) = pts[k].Y;
    c.edges[k] = pts[k].e;
  }
  // Neighbouring crossings can invert by roundoff on flat stretches of t.
  for (Index k = 1; k < n; ++k) {
    c.X(k) = std::max(c.X(k), c.X(k - 1));
    c.Y(k) = std::min(c.Y(k), c.Y(k - 1));
  }
  c.u = c.sample(chart.u);
  c.alpha = c.sample(chart.alpha);
  c.beta = c.sample(chart.beta);
  c.p = c.sample(chart.p);
  c.q = c.sample(chart.q);
  c.x = c.sample(chart.x);
  c.t = c.sample(chart.t);

  if (!c.u.allFinite() || !c.p.allFinite() || !c.q.allFinite() || !c.x.allFinite())
    throw DomainError("level curve: crosses unsolved nodes (domain too small or t_stop too early)");
  if (opts.require_quiescent_ends) {
    for (Index k : {Index(0), n - 1}) {
      const Scalar m = std::abs(std::sin(c.alpha(k) / 2)) + std::abs(std::sin(c.beta(k) / 2));
      if (m > opts.quiescence_tol) {
        std::ostringstream os;
        os << "level curve at tau = " << tau << " leaves the chart where the solution is not at rest "
           << "(domain too small)";
        throw DomainError(os.str());
      }
    }
  }
  return c;
}

Samples cumulative_line_integral(const LevelCurve& c, const Samples& f, const Samples& g) {
  const Index n = c.size();
  Samples out = Samples::Zero(n);
  const Samples dX = c.dX(), dY = c.dY();
  for (Index k = 0; k + 1 < n; ++k)
    out(k + 1) = out(k) + 0.5 * ((f(k) + f(k + 1)) * dX(k) + (g(k) + g(k + 1)) * dY(k));
  return out;
}

Scalar line_integral(const LevelCurve& c, const Samples& f, const Samples& g) {
  const Index n = c.size();
  if (n < 2) return 0;
  const Samples dX = c.dX(), dY = c.dY();
  Samples terms(n - 1);
  for (Index k = 0; k + 1 < n; ++k)
    terms(k) = 0.5 * ((f(k) + f(k + 1)) * dX(k) + (g(k) + g(k + 1)) * dY(k));
  return pairwise_sum({terms.data(), static_cast<std::size_t>(terms.size())});
}

CurveEnergy curve_energy(const LevelCurve& c) {
  const Samples zero = Samples::Zero(c.size());
  const Samples fr = c.p * (c.alpha / 2).sin().square();
  const Samples fs = c.q * (c.beta / 2).sin().square();
  return {0.5 * line_integral(c, fr, zero), 0.5 * line_integral(c, zero, fs)};
}

Scalar interp_linear(const Samples& xs, const Samples& fs, Scalar x) {
  const Index n = xs.size();
  if (n == 0) return 0;
  if (x <= xs(0)) return fs(0);
  if (x >= xs(n - 1)) return fs(n - 1);
  const Scalar* it = std::upper_bound(xs.data(), xs.data() + n, x);
  const Index k = static_cast<Index>(it - xs.data());
  const Scalar dx = xs(k) - xs(k - 1);
  if (dx <= 0) return fs(k);
  const Scalar lam = (x - xs(k - 1)) / dx;
  return (1 - lam) * fs(k - 1) + lam * fs(k);
}

PhysicalSlice reconstruct_slice(const CharChart& chart, const LevelCurve& c, Scalar dx) {
  const Index n = c.size();
  const Scalar h = chart.h();
  PhysicalSlice s;
  s.tau = c.tau;
  s.clip = 1 / h;

  Samples x = c.x;
  const Scalar tol = 10 * h * h + 1e-12;
  for (Index k = 1; k < n; ++k) {
    if (x(k) < x(k - 1) - tol) {
      std::ostringstream os;
      os << "slice: x decreases along the level curve at point " << k << " (invalid chart)";
      throw SolverError(os.str());
    }
    x(k) = std::max(x(k), x(k - 1));
  }

  auto clipped_tan = [&](Scalar a) { return std::clamp(std::tan(a / 2), -s.clip, s.clip); };
  SliceSamples& P = s.points;
  P.x = x;
  P.u = c.u;
  P.R = c.alpha.unaryExpr(clipped_tan);
  P.S = c.beta.unaryExpr(clipped_tan);
  P.ut = (P.R + P.S) / 2;
  Samples cu(n);
  for (Index k = 0; k < n; ++k) cu(k) = chart.speed()(c.u(k));
  P.ux = (P.R - P.S) / (2 * cu);
  P.e = (P.R.square() + P.S.square()) / 2;

  const Samples zero = Samples::Zero(n);
  const Samples mm = 0.5 * cumulative_line_integral(c, c.p * (c.alpha / 2).sin().square(), zero);
  const Samples mp = 0.5 * cumulative_line_integral(c, zero, c.q * (c.beta / 2).sin().square());
  s.energy_backward = mm(n - 1);
  s.energy_forward = mp(n - 1);
  s.energy = s.energy_backward + s.energy_forward;

  if (!(dx > 0)) dx = h;
  const Index m = std::max<Index>(2, static_cast<Index>(std::floor((x(n - 1) - x(0)) / dx)) + 1);
  SliceSamples& G = s.grid;
  G.x = Samples::LinSpaced(m, x(0), x(0) + dx * static_cast<Scalar>(m - 1));
  for (Samples* f : {&G.u, &G.ut, &G.ux, &G.R, &G.S, &G.e}) f->resize(m);
  s.mu_minus.resize(m), s.mu_plus.resize(m);
  for (Index k = 0; k < m; ++k) {
    const Scalar xv = G.x(k);
    G.u(k) = interp_linear(x, P.u, xv);
    G.R(k) = interp_linear(x, P.R, xv);
    G.S(k) = interp_linear(x, P.S, xv);
    G.ut(k) = interp_linear(x, P.ut, xv);
    G.ux(k) = interp_linear(x, P.ux, xv);
    G.e(k) = interp_linear(x, P.e, xv);
    s.mu_minus(k) = interp_linear(x, mm, xv);
    s.mu_plus(k) = interp_linear(x, mp, xv);
  }
  return s;
}

JacobianInfo jacobian(const NodeState& s, const WaveSpeed& ws) {
  const Scalar c = ws(s.u);
  JacobianInfo J;
  J.x_X = (1 + std::cos(s.alpha)) * s.p / 4;
  J.x_Y = -(1 + std::cos(s.beta)) * s.q / 4;
  J.t_X = J.x_X / c;
  J.t_Y = -J.x_Y / c;
  J.det = (1 + std::cos(s.alpha)) * (1 + std::cos(s.beta)) * s.p * s.q / (8 * c);
  return J;
}

JacobianInfo jacobian(const CharChart& chart, Index i, Index j) {
  return jacobian(chart.state(i, j), chart.speed());
}

}  // namespace cwave
