#include "cwave/metric.hpp"

#include "cwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cwave {

namespace {

Scalar clip_abs(Scalar v, Scalar cap) { return std::clamp(v, -cap, cap); }

// Second-order derivative along X (axis 0) or Y (axis 1). Central where both
// neighbours are solved, one-sided three-point otherwise. Nodes with no usable
// stencil are the chart corners on the initial line, which are at rest; they get 0.
Field grid_derivative(const Field& f, Scalar h, int axis) {
  const Index n0 = f.rows(), n1 = f.cols();
  Field d(n0, n1);
  const Index n = axis == 0 ? n0 : n1;
  for (Index j = 0; j < n1; ++j)
    for (Index i = 0; i < n0; ++i) {
      const Index k = axis == 0 ? i : j;
      auto at = [&](Index m) {
        if (m < 0 || m >= n) return std::numeric_limits<Scalar>::quiet_NaN();
        return axis == 0 ? f(m, j) : f(i, m);
      };
      const Scalar f0 = at(k), fm = at(k - 1), fp = at(k + 1);
      if (std::isfinite(fm) && std::isfinite(fp)) {
        d(i, j) = (fp - fm) / (2 * h);
      } else if (const Scalar fpp = at(k + 2); std::isfinite(fp) && std::isfinite(fpp)) {
        d(i, j) = (-3 * f0 + 4 * fp - fpp) / (2 * h);
      } else if (const Scalar fmm = at(k - 2); std::isfinite(fm) && std::isfinite(fmm)) {
        d(i, j) = (3 * f0 - 4 * fm + fmm) / (2 * h);
      } else {
        d(i, j) = std::isfinite(f0) ? 0 : f0;
      }
    }
  return d;
}

struct RawTangent {
  std::array<Field, 7> d;  // in chart field order u, alpha, beta, p, q, x, t
};

// Difference quotient of the seven chart fields with step eps around theta.
RawTangent difference(const PathOfData& path, Scalar theta, Scalar eps, const WaveSpeed& ws,
                      const ChartDomain& dom, const SolveOptions& so, const CharChart& base) {
  auto chart_at = [&](Scalar th) { return solve_chart(path.at(th), ws, dom, so); };
  RawTangent r;
  if (theta - eps >= 0 && theta + eps <= 1) {
    const CharChart plus = chart_at(theta + eps), minus = chart_at(theta - eps);
    for (int k = 0; k < 7; ++k) r.d[k] = (plus.field(k) - minus.field(k)) / (2 * eps);
  } else if (theta - eps < 0) {
    const CharChart c1 = chart_at(theta + eps), c2 = chart_at(theta + 2 * eps);
    for (int k = 0; k < 7; ++k)
      r.d[k] = (4 * (c1.field(k) - base.field(k)) - (c2.field(k) - base.field(k))) / (2 * eps);
  } else {
    const CharChart c1 = chart_at(theta - eps), c2 = chart_at(theta - 2 * eps);
    for (int k = 0; k < 7; ++k)
      r.d[k] = (4 * (base.field(k) - c1.field(k)) - (base.field(k) - c2.field(k))) / (2 * eps);
  }
  return r;
}

Scalar finite_max(const Field& f) {
  Scalar m = 0;
  for (Index k = 0; k < f.size(); ++k)
    if (std::isfinite(f.data()[k])) m = std::max(m, std::abs(f.data()[k]));
  return m;
}

void apply_gauge(TangentField& tf, const Gauge& g) {
  if (g.zero) return;
  const CharChart& b = tf.base;
  const Scalar hX = b.hX(), hY = b.hY();
  const Index nx = b.nx(), ny = b.ny();
  Samples xi(nx), dxi(nx), eta(ny), deta(ny);
  for (Index i = 0; i < nx; ++i) xi(i) = g.xi(b.X()(i)), dxi(i) = g.dxi(b.X()(i));
  for (Index j = 0; j < ny; ++j) eta(j) = g.eta(b.Y()(j)), deta(j) = g.deta(b.Y()(j));
  // Exact X- and Y-rates where the system provides them, differences otherwise.
  std::array<Field, 7> dX, dY;
  for (auto& f : dX) f.resize(nx, ny);
  for (auto& f : dY) f.resize(nx, ny);
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i) {
      if (!b.solved(i, j)) continue;
      const NodeState s = b.state(i, j);
      const XRates rx = x_rates(s, b.speed());
      const YRates ry = y_rates(s, b.speed());
      dX[0](i, j) = rx.u, dX[2](i, j) = rx.beta, dX[4](i, j) = rx.q, dX[5](i, j) = rx.x, dX[6](i, j) = rx.t;
      dY[0](i, j) = ry.u, dY[1](i, j) = ry.alpha, dY[3](i, j) = ry.p, dY[5](i, j) = ry.x, dY[6](i, j) = ry.t;
    }
  dX[1] = grid_derivative(b.alpha, hX, 0);
  dX[3] = grid_derivative(b.p, hX, 0);
  dY[2] = grid_derivative(b.beta, hY, 1);
  dY[4] = grid_derivative(b.q, hY, 1);
  // tangent fields in chart order u, alpha, beta, p, q, x, t
  const std::array<Field*, 7> F{&tf.U, &tf.A, &tf.B, &tf.P, &tf.Q, &tf.X, &tf.T};
  for (int k = 0; k < 7; ++k)
    for (Index j = 0; j < ny; ++j)
      for (Index i = 0; i < nx; ++i) {
        if (!b.solved(i, j)) continue;
        Scalar v = dX[k](i, j) * xi(i) + dY[k](i, j) * eta(j);
        if (k == 3) v += b.p(i, j) * dxi(i);
        if (k == 4) v += b.q(i, j) * deta(j);
        (*F[k])(i, j) += v;
      }
}

// Per gauge, per tau.
std::vector<std::vector<PathLength>> lengths_for_gauges(const PathOfData& path, const std::vector<Scalar>& taus,
                                                        const std::vector<Gauge>& gauges, const WaveSpeed& ws,
                                                        const ChartDomain& dom, const PathLengthOptions& opts) {
  if (taus.empty()) throw DomainError("path length: no times requested");
  path.check_energy(ws);
  const Scalar tmax = *std::max_element(taus.begin(), taus.end());
  TangentOptions to = opts.tangent;
  if (!std::isfinite(to.solve.t_stop)) to.solve.t_stop = tmax + std::max<Scalar>(0.05, 10 * dom.h());
  to.gauge = Gauge::none();

  const auto& thetas = path.thetas();
  std::vector<std::vector<PathLength>> out(gauges.size(), std::vector<PathLength>(taus.size()));
  for (auto& per_gauge : out)
    for (auto& pl : per_gauge) pl.thetas = thetas;
  for (Scalar th : thetas) {
    TangentField raw = [&] {
      try {
        return tangent_by_theta(path, th, ws, dom, to);
      } catch (const SolverError& e) {
        std::ostringstream os;
        os << "path '" << path.label() << "' at theta = " << th << ": " << e.what();
        throw SolverError(os.str(), e.node_i(), e.node_j());
      }
    }();
    for (std::size_t g = 0; g < gauges.size(); ++g) {
      TangentField tf = raw;
      apply_gauge(tf, gauges[g]);
      for (std::size_t k = 0; k < taus.size(); ++k)
        out[g][k].samples.push_back(norm_at(tf, taus[k], opts.weights, opts.curve));
    }
  }
  for (auto& per_gauge : out)
    for (std::size_t k = 0; k < taus.size(); ++k) {
      PathLength& pl = per_gauge[k];
      Samples th(static_cast<Index>(thetas.size())), f(th.size());
      for (Index m = 0; m < th.size(); ++m) {
        th(m) = thetas[static_cast<std::size_t>(m)];
        f(m) = pl.samples[static_cast<std::size_t>(m)].norm.total;
      }
      pl.length = th.size() > 1 ? trapezoid(th, f) : 0;
    }
  return out;
}

}  // namespace

std::array<Scalar, 6> NormWeights::kappa() const {
  const Scalar d = delta;
  return {1, d, d * d * d, d, d * d, d * d * d};
}

PathOfData::PathOfData(Family family, std::vector<Scalar> thetas, Scalar energy_cap, std::string label)
    : family_(std::move(family)), thetas_(std::move(thetas)), cap_(energy_cap), label_(std::move(label)) {
  if (thetas_.empty()) throw DomainError("path: no theta samples");
  for (std::size_t k = 0; k < thetas_.size(); ++k) {
    if (thetas_[k] < 0 || thetas_[k] > 1) throw DomainError("path: theta samples must lie in [0, 1]");
    if (k > 0 && !(thetas_[k] > thetas_[k - 1])) throw DomainError("path: theta samples must increase");
  }
  if (!(cap_ > 0)) throw DomainError("path: energy cap must be positive");
}

PathOfData PathOfData::resampled(std::vector<Scalar> thetas) const {
  return {family_, std::move(thetas), cap_, label_};
}

void PathOfData::check_energy(const WaveSpeed& ws) const {
  for (Scalar th : thetas_) {
    const Scalar E = energy(at(th), ws);
    if (E > cap_) {
      std::ostringstream os;
      os << "path '" << label_ << "': energy " << E << " at theta = " << th << " exceeds the cap " << cap_;
      throw DomainError(os.str());
    }
  }
}

std::vector<Scalar> uniform_thetas(int M) {
  if (M < 1) throw DomainError("path: need at least two theta samples");
  std::vector<Scalar> t(static_cast<std::size_t>(M) + 1);
  for (int k = 0; k <= M; ++k) t[static_cast<std::size_t>(k)] = static_cast<Scalar>(k) / M;
  return t;
}

PathOfData constant_path(const InitialDatum& d, int M, Scalar energy_cap) {
  return {[d](Scalar) { return d; }, uniform_thetas(M), energy_cap, "constant"};
}

PathOfData translation_path(const InitialDatum& d, Scalar shift, int M, Scalar energy_cap) {
  return {[d, shift](Scalar th) { return d.translated(shift * th); }, uniform_thetas(M), energy_cap, "translation"};
}

PathOfData vertical_velocity_path(const InitialDatum& d, const std::vector<Bump>& g, int M, Scalar energy_cap) {
  Interval s = d.support();
  for (const Bump& b : g) s = {std::min(s.lo, b.support().lo), std::max(s.hi, b.support().hi)};
  auto family = [d, g, s](Scalar th) {
    return InitialDatum(
        [d, g, th](Scalar x) {
          DatumPoint p = d(x);
          for (const Bump& b : g) p.u1 += th * b.value(x);
          return p;
        },
        s, "vertical-velocity");
  };
  return {family, uniform_thetas(M), energy_cap, "vertical-velocity"};
}

PathOfData amplitude_path(const std::vector<Bump>& u0, const std::vector<Bump>& u1, VelocityMode mode,
                          const WaveSpeed& ws, Scalar a0, Scalar a1, int M, Scalar energy_cap) {
  auto family = [u0, u1, mode, ws, a0, a1](Scalar th) {
    const Scalar a = a0 + th * (a1 - a0);
    auto scale = [a](std::vector<Bump> bs) {
      for (Bump& b : bs) b.amplitude *= a;
      return bs;
    };
    return InitialDatum::from_bumps(scale(u0), scale(u1), mode, ws);
  };
  return {family, uniform_thetas(M), energy_cap, "amplitude"};
}

Gauge Gauge::none() {
  auto zero = [](Scalar) { return Scalar(0); };
  return {zero, zero, zero, zero, true};
}

Gauge Gauge::affine(Scalar xi0, Scalar xi1, Scalar eta0, Scalar eta1) {
  Gauge g{[=](Scalar X) { return xi0 + xi1 * X; }, [=](Scalar) { return xi1; },
          [=](Scalar Y) { return eta0 + eta1 * Y; }, [=](Scalar) { return eta1; }, false};
  g.zero = xi0 == 0 && xi1 == 0 && eta0 == 0 && eta1 == 0;
  return g;
}

Gauge Gauge::translation() { return affine(1, 0, -1, 0); }

std::vector<Gauge> slope_family(const std::vector<Scalar>& slopes) {
  std::vector<Gauge> out;
  for (Scalar s : slopes) out.push_back(Gauge::affine(0, s - 1, 0, s - 1));
  return out;
}

TangentField tangent_by_theta(const PathOfData& path, Scalar theta, const WaveSpeed& ws, const ChartDomain& dom,
                              const TangentOptions& opts) {
  if (!(opts.eps > 0) || 2 * opts.eps > 1) throw DomainError("tangent: bad step eps");
  if (theta < 0 || theta > 1) throw DomainError("tangent: theta outside [0, 1]");
  CharChart base = solve_chart(path.at(theta), ws, dom, opts.solve);
  RawTangent r = difference(path, theta, opts.eps, ws, dom, opts.solve, base);
  Scalar gap = 0;
  if (opts.richardson) {
    const RawTangent half = difference(path, theta, opts.eps / 2, ws, dom, opts.solve, base);
    Scalar num = 0, den = 0;
    for (int k = 0; k < 7; ++k) {
      num = std::max(num, finite_max(r.d[k] - half.d[k]));
      den = std::max(den, finite_max(r.d[k]));
    }
    gap = den > 0 ? num / den : 0;
  }
  TangentField tf{theta,
                  opts.eps,
                  std::move(base),
                  std::move(r.d[6]),
                  std::move(r.d[5]),
                  std::move(r.d[0]),
                  std::move(r.d[1]),
                  std::move(r.d[2]),
                  std::move(r.d[3]),
                  std::move(r.d[4]),
                  gap};
  apply_gauge(tf, opts.gauge);
  return tf;
}

CurveTangent shifts_and_vertical(const TangentField& tf, const LevelCurve& c, Scalar clip) {
  const WaveSpeed& ws = tf.base.speed();
  if (!(clip > 0)) clip = 1 / tf.base.h();
  CurveTangent ct;
  ct.T = c.sample(tf.T);
  ct.X = c.sample(tf.X);
  ct.U = c.sample(tf.U);
  ct.A = c.sample(tf.A);
  ct.B = c.sample(tf.B);
  ct.P = c.sample(tf.P);
  ct.Q = c.sample(tf.Q);
  const Index n = c.size();
  ct.w.resize(n), ct.z.resize(n), ct.rt.resize(n), ct.st.resize(n);
  for (Index k = 0; k < n; ++k) {
    const SpeedDerivs d = ws.eval(c.u(k));
    const Scalar ta = clip_abs(std::tan(c.alpha(k) / 2), clip), tb = clip_abs(std::tan(c.beta(k) / 2), clip);
    const Scalar ca = std::cos(c.alpha(k)), cb = std::cos(c.beta(k));
    const Scalar kk = d.dc / (8 * d.c * d.c);
    const Scalar T = ct.T(k);
    ct.w(k) = ct.X(k) + d.c * T;
    ct.z(k) = ct.X(k) - d.c * T;
    // 4 c alpha_Y / ((1 + cos beta) q), with 1/(1 + cos beta) = (1 + tan^2(beta/2))/2
    const Scalar a_shift = 4 * d.c * kk * (cb - ca) * (1 + tb * tb) / 2;
    const Scalar b_shift = 4 * d.c * kk * (ca - cb) * (1 + ta * ta) / 2;
    ct.rt(k) = 0.5 * (ct.A(k) - T * a_shift) * (1 + ta * ta) - d.dc / (4 * d.c) * T * tb * tb;
    ct.st(k) = 0.5 * (ct.B(k) - T * b_shift) * (1 + tb * tb) - d.dc / (4 * d.c) * T * ta * ta;
  }
  ct.vcomb = ct.U;
  return ct;
}

Integrands integrands(const LevelCurve& c, const CurveTangent& ct, const WaveSpeed& ws) {
  const Index n = c.size();
  Integrands in;
  for (int l = 0; l < 6; ++l) in.J[l].resize(n), in.H[l].resize(n);
  for (Index k = 0; k < n; ++k) {
    const SpeedDerivs d = ws.eval(c.u(k));
    const Scalar K = d.dc / (4 * d.c);
    const Scalar a = c.alpha(k), b = c.beta(k), p = c.p(k), q = c.q(k);
    const Scalar sa = std::sin(a), sb = std::sin(b);
    const Scalar s2a = std::pow(std::sin(a / 2), 2), s2b = std::pow(std::sin(b / 2), 2);
    const Scalar c2a = std::pow(std::cos(a / 2), 2), c2b = std::pow(std::cos(b / 2), 2);
    const Scalar T = ct.T(k), A = ct.A(k), B = ct.B(k), P = ct.P(k), Q = ct.Q(k), U = ct.vcomb(k);

    in.J[0](k) = ct.w(k) * p;
    in.J[1](k) = 0.5 * A * p - K * p * T * s2a;
    in.J[2](k) = U * p;
    in.J[3](k) = P * c2a - 0.5 * p * sa * A + K * T * p * sa;
    in.J[4](k) = 0.5 * P * sa - p * A * s2a + 2 * K * T * p * s2a;
    in.J[5](k) = P * s2a + 0.5 * p * sa * A;

    in.H[0](k) = ct.z(k) * q;
    in.H[1](k) = 0.5 * B * q - K * q * T * s2b;
    in.H[2](k) = U * q;
    in.H[3](k) = Q * c2b - 0.5 * q * sb * B + K * T * q * sb;
    in.H[4](k) = 0.5 * Q * sb - q * B * s2b + 2 * K * T * q * s2b;
    in.H[5](k) = Q * s2b + 0.5 * q * sb * B;
  }
  return in;
}

CurveWeights weights_along_curve(const LevelCurve& c) {
  const Index n = c.size();
  Samples s2(n), r2(n);
  for (Index k = 0; k < n; ++k) {
    s2(k) = c.q(k) * std::pow(std::sin(c.beta(k) / 2), 2);
    r2(k) = c.p(k) * std::pow(std::sin(c.alpha(k) / 2), 2);
  }
  const Samples zero = Samples::Zero(n);
  CurveWeights W;
  W.minus = 1 + cumulative_line_integral(c, zero, s2);
  const Samples rc = cumulative_line_integral(c, r2, zero);
  W.plus = 1 + (rc(n - 1) - rc);
  return W;
}

Scalar interaction_rate(const LevelCurve& c, const WaveSpeed& ws) {
  const Index n = c.size();
  if (n < 2) return 0;
  Samples gX(n), gY(n), absR(n), absS(n);
  for (Index k = 0; k < n; ++k) {
    const SpeedDerivs d = ws.eval(c.u(k));
    const Scalar f = std::abs(d.dc) / (2 * d.c);
    const Scalar a = c.alpha(k), b = c.beta(k);
    const Scalar R = std::tan(a / 2), S = std::tan(b / 2);
    const Scalar s2a = std::pow(std::sin(a / 2), 2), s2b = std::pow(std::sin(b / 2), 2);
    absR(k) = std::isfinite(R) ? std::abs(R) : std::numeric_limits<Scalar>::infinity();
    absS(k) = std::isfinite(S) ? std::abs(S) : std::numeric_limits<Scalar>::infinity();
    // R S (R - S) dx written against p dX where |R| dominates, against q |dY| otherwise
    gX(k) = std::isfinite(S) ? f * std::abs(S) * c.p(k) * std::abs(s2a - S * std::sin(a) / 2) : 0;
    gY(k) = std::isfinite(R) ? f * std::abs(R) * c.q(k) * std::abs(R * std::sin(b) / 2 - s2b) : 0;
  }
  const Samples dX = c.dX(), dY = c.dY();
  Samples seg(n - 1);
  for (Index k = 0; k + 1 < n; ++k) {
    const bool use_x = std::max(absS(k), absS(k + 1)) <= std::max(absR(k), absR(k + 1));
    seg(k) = use_x ? 0.5 * (gX(k) + gX(k + 1)) * dX(k) : 0.5 * (gY(k) + gY(k + 1)) * dY(k);
  }
  return pairwise_sum(std::span<const Scalar>(seg.data(), static_cast<std::size_t>(seg.size())));
}

NormValue tangent_norm(const LevelCurve& c, const Integrands& in, const CurveWeights& W, const NormWeights& nw) {
  const auto kappa = nw.kappa();
  NormValue v;
  for (int l = 0; l < 6; ++l) {
    v.I[l] = line_integral(c, in.J[l].abs() * W.minus, in.H[l].abs() * W.plus);
    v.total += kappa[l] * v.I[l];
  }
  return v;
}

NormSample norm_at(const TangentField& tf, Scalar tau, const NormWeights& nw, const CurveOptions& copts) {
  const LevelCurve c = extract_level_curve(tf.base, tau, copts);
  const CurveTangent ct = shifts_and_vertical(tf, c);
  const Integrands in = integrands(c, ct, tf.base.speed());
  NormSample s;
  s.tau = tau;
  s.norm = tangent_norm(c, in, weights_along_curve(c), nw);
  s.a = interaction_rate(c, tf.base.speed());
  s.energy = curve_energy(c).total();
  return s;
}

PhysicalWeights physical_weights(const DirectState& s, const WaveSpeed& ws) {
  const Samples xs = s.xs();
  const Index n = s.size();
  PhysicalWeights W;
  W.minus = 1 + cumulative_trapezoid(xs, s.S.square());
  const Samples rc = cumulative_trapezoid(xs, s.R.square());
  W.plus = 1 + (rc(n - 1) - rc);
  Samples dens(n);
  for (Index i = 0; i < n; ++i) {
    const SpeedDerivs d = ws.eval(s.u(i));
    const Scalar R = s.R(i), S = s.S(i);
    dens(i) = std::abs(d.dc) / (2 * d.c) * std::abs(R * R * S - S * S * R);
  }
  W.a = trapezoid(dens, s.h);
  return W;
}

NormValue main_form_norm(const PhysicalTangentFrame& f, const WaveSpeed& ws, const NormWeights& nw,
                         std::optional<Interval> range) {
  const DirectState& b = f.base;
  const Index n = b.size();
  const PhysicalWeights W = physical_weights(b, ws);
  const Samples wx = central_derivative(f.w, b.h), zx = central_derivative(f.z, b.h);
  std::array<Samples, 6> g;
  for (auto& a : g) a.resize(n);
  for (Index i = 0; i < n; ++i) {
    const SpeedDerivs d = ws.eval(b.u(i));
    const Scalar R = b.R(i), S = b.S(i), w = f.w(i), z = f.z(i);
    const Scalar m = d.dc / (4 * d.c * d.c) * (w - z);
    const Scalar Wm = W.minus(i), Wp = W.plus(i);
    const Scalar vc = f.v(i) + R * w / (2 * d.c) - S * z / (2 * d.c);
    g[0](i) = std::abs(w) * (1 + R * R) * Wm + std::abs(z) * (1 + S * S) * Wp;
    g[1](i) = std::abs(f.rt(i)) * Wm + std::abs(f.st(i)) * Wp;
    g[2](i) = std::abs(vc) * ((1 + R * R) * Wm + (1 + S * S) * Wp);
    g[3](i) = std::abs(wx(i) + m * S) * Wm + std::abs(zx(i) + m * R) * Wp;
    g[4](i) = std::abs(R * wx(i) + m * S * R) * Wm + std::abs(S * zx(i) + m * R * S) * Wp;
    g[5](i) = std::abs(2 * R * f.rt(i) + R * R * wx(i) + m * R * R * S) * Wm +
              std::abs(2 * S * f.st(i) + S * S * zx(i) + m * S * S * R) * Wp;
  }
  // trapezoid weights restricted to the range
  Index lo = 0, hi = n - 1;
  if (range) {
    while (lo < n && b.x(lo) < range->lo) ++lo;
    while (hi >= 0 && b.x(hi) > range->hi) --hi;
  }
  const auto kappa = nw.kappa();
  NormValue v;
  if (hi <= lo) return v;
  for (int l = 0; l < 6; ++l) {
    v.I[l] = trapezoid(g[l].segment(lo, hi - lo + 1), b.h);
    v.total += kappa[l] * v.I[l];
  }
  return v;
}

PathLength path_length(const PathOfData& path, Scalar tau, const WaveSpeed& ws, const ChartDomain& dom,
                       const PathLengthOptions& opts) {
  return path_lengths(path, {tau}, ws, dom, opts).front();
}

std::vector<PathLength> path_lengths(const PathOfData& path, const std::vector<Scalar>& taus, const WaveSpeed& ws,
                                     const ChartDomain& dom, const PathLengthOptions& opts) {
  return lengths_for_gauges(path, taus, {opts.tangent.gauge}, ws, dom, opts).front();
}

RelabelingResult optimize_relabeling(const PathOfData& path, const std::vector<Gauge>& family, Scalar tau,
                                     const WaveSpeed& ws, const ChartDomain& dom, const PathLengthOptions& opts) {
  if (family.empty()) throw DomainError("relabeling: empty family");
  const auto all = lengths_for_gauges(path, {tau}, family, ws, dom, opts);
  RelabelingResult r;
  for (std::size_t g = 0; g < all.size(); ++g) {
    r.lengths.push_back(all[g].front().length);
    if (g == 0 || r.lengths.back() < r.best) {
      r.best = r.lengths.back();
      r.best_index = g;
    }
  }
  return r;
}

}  // namespace cwave
