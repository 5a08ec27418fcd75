#include "cwave/oracle.hpp"

#include "cwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace cwave {

namespace {

using Fields = std::vector<Samples>;
using Rhs = std::function<void(const Fields&, Fields&)>;

// zero-gradient ghost values
inline Scalar at(const Samples& f, Index k) {
  const Index n = f.size();
  return f(std::clamp<Index>(k, 0, n - 1));
}

// derivative for a field moving left (information arrives from the right)
Scalar dx_left_moving(const Samples& f, Index i, Scalar h) {
  return (-2 * at(f, i - 1) - 3 * f(i) + 6 * at(f, i + 1) - at(f, i + 2)) / (6 * h);
}

// derivative for a field moving right
Scalar dx_right_moving(const Samples& f, Index i, Scalar h) {
  return (at(f, i - 2) - 6 * at(f, i - 1) + 3 * f(i) + 2 * at(f, i + 1)) / (6 * h);
}

void rk3_step(Fields& y, Scalar dt, const Rhs& rhs) {
  Fields k(y.size()), y1(y.size()), y2(y.size());
  rhs(y, k);
  for (std::size_t m = 0; m < y.size(); ++m) y1[m] = y[m] + dt * k[m];
  rhs(y1, k);
  for (std::size_t m = 0; m < y.size(); ++m) y2[m] = 0.75 * y[m] + 0.25 * (y1[m] + dt * k[m]);
  rhs(y2, k);
  for (std::size_t m = 0; m < y.size(); ++m) y[m] = y[m] / 3 + (2.0 / 3) * (y2[m] + dt * k[m]);
}

void base_rhs(const WaveSpeed& ws, Scalar h, const Samples& u, const Samples& R, const Samples& S,
              Samples& du, Samples& dR, Samples& dS) {
  const Index n = u.size();
  du.resize(n), dR.resize(n), dS.resize(n);
  for (Index i = 0; i < n; ++i) {
    const SpeedDerivs d = ws.eval(u(i));
    const Scalar src = d.dc / (4 * d.c) * (R(i) * R(i) - S(i) * S(i));
    du(i) = 0.5 * (R(i) + S(i));
    dR(i) = d.c * dx_left_moving(R, i, h) + src;
    dS(i) = -d.c * dx_right_moving(S, i, h) - src;
  }
}

DirectState make_state(const InitialDatum& d, const WaveSpeed& ws, Interval x_range, Scalar h) {
  if (!(h > 0) || !(x_range.hi > x_range.lo)) throw DomainError("direct solve: bad grid");
  const Index n = static_cast<Index>(std::llround(x_range.length() / h)) + 1;
  DirectState s;
  s.x0 = x_range.lo;
  s.h = h;
  s.u.resize(n), s.R.resize(n), s.S.resize(n);
  for (Index k = 0; k < n; ++k) {
    const Scalar x = s.x(k);
    s.u(k) = d(x).u0;
    const auto [R, S] = d.riemann(x, ws);
    s.R(k) = R;
    s.S(k) = S;
  }
  return s;
}

Scalar max_speed_on(const Samples& u, const WaveSpeed& ws) {
  Scalar m = 0;
  for (Index k = 0; k < u.size(); ++k) m = std::max(m, ws(u(k)));
  return m;
}

std::vector<Scalar> targets(const DirectOptions& o, Scalar T) {
  std::vector<Scalar> ts;
  for (Scalar t : o.save_times)
    if (t >= 0 && t <= T) ts.push_back(t);
  ts.push_back(T);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

void check_cfl(Scalar cfl) {
  if (!(cfl > 0) || cfl > 0.9) {
    std::ostringstream os;
    os << "direct solve: CFL number " << cfl << " outside (0, 0.9]";
    throw DomainError(os.str());
  }
}

// Advances y from t0 to each target in turn with CFL-limited steps; `emit`
// fires at every target and `after_step` after every step (return false to stop).
void march(Fields& y, Scalar& t, const std::vector<Scalar>& ts, Scalar cfl, Scalar h, const WaveSpeed& ws,
           const Rhs& rhs, const std::function<void(Scalar)>& emit,
           const std::function<bool(Scalar, Scalar)>& after_step, long long& steps) {
  for (Scalar target : ts) {
    while (t < target) {
      Scalar dt = cfl * h / max_speed_on(y[0], ws);
      if (t + dt >= target - 1e-14 * std::max<Scalar>(1, target)) dt = target - t;
      rk3_step(y, dt, rhs);
      t = (t + dt >= target - 1e-14 * std::max<Scalar>(1, target)) ? target : t + dt;
      ++steps;
      if (!after_step(t, dt)) return;
    }
    emit(target);
  }
}

}  // namespace

Samples DirectState::xs() const {
  return Samples::LinSpaced(size(), x0, x0 + h * static_cast<Scalar>(size() - 1));
}

Scalar DirectState::energy() const { return trapezoid(0.5 * (R.square() + S.square()), h); }

DirectTrajectory direct_solve(const InitialDatum& d, const WaveSpeed& ws, Scalar T, Interval x_range, Scalar h,
                              const DirectOptions& opts) {
  check_cfl(opts.cfl);
  DirectState s0 = make_state(d, ws, x_range, h);
  s0.cfl = opts.cfl;
  const Scalar E0 = s0.energy();
  DirectTrajectory traj;
  Fields y{s0.u, s0.R, s0.S};
  Rhs rhs = [&](const Fields& in, Fields& out) {
    out.resize(3);
    base_rhs(ws, h, in[0], in[1], in[2], out[0], out[1], out[2]);
  };
  auto snapshot = [&](Scalar t) {
    DirectState s = s0;
    s.t = t;
    s.u = y[0], s.R = y[1], s.S = y[2];
    s.valid = traj.valid;
    return s;
  };
  Scalar t = 0;
  const Scalar cap = 1 / h;
  const Scalar g0 = std::max(s0.R.abs().maxCoeff(), s0.S.abs().maxCoeff());
  traj.peak_gradient = g0;
  const auto ts = targets(opts, T);
  if (ts.front() == 0) traj.frames.push_back(snapshot(0));
  march(
      y, t, ts, opts.cfl, h, ws, rhs,
      [&](Scalar tt) {
        if (tt > 0) traj.frames.push_back(snapshot(tt));
      },
      [&](Scalar tt, Scalar) {
        const Scalar m = std::max(y[1].abs().maxCoeff(), y[2].abs().maxCoeff());
        if (m > traj.peak_gradient) {
          traj.peak_gradient = m;
          traj.peak_time = tt;
        } else if (traj.resolved && m < 0.9 * traj.peak_gradient && traj.peak_gradient > 2 * g0) {
          traj.resolved = false;
        }
        if (!(m <= cap)) {
          traj.valid = false;
          traj.blowup_time = tt;
          traj.frames.push_back(snapshot(tt));
          return false;
        }
        if (E0 > 0) {
          const Scalar E = trapezoid(0.5 * (y[1].square() + y[2].square()), h);
          traj.max_energy_drift = std::max(traj.max_energy_drift, std::abs(E - E0) / E0);
        }
        return true;
      },
      traj.steps);
  return traj;
}

Scalar DirectTrajectory::singular_time() const {
  if (!valid) return blowup_time;
  if (!resolved) return peak_time;
  return std::numeric_limits<Scalar>::infinity();
}

Samples central_derivative(const Samples& f, Scalar h) {
  const Index n = f.size();
  Samples d(n);
  for (Index i = 0; i < n; ++i)
    d(i) = (at(f, i - 2) - 8 * at(f, i - 1) + 8 * at(f, i + 1) - at(f, i + 2)) / (12 * h);
  return d;
}

Scalar interp_cubic(Scalar x0, Scalar h, const Samples& f, Scalar x) {
  const Index n = f.size();
  const Scalar s = (x - x0) / h;
  if (s < 0 || s > static_cast<Scalar>(n - 1)) return 0;
  const Index k = std::clamp<Index>(static_cast<Index>(std::floor(s)), 1, std::max<Index>(1, n - 3));
  if (n < 4) {
    const Index k0 = std::clamp<Index>(static_cast<Index>(std::floor(s)), 0, n - 2);
    const Scalar l = s - static_cast<Scalar>(k0);
    return (1 - l) * f(k0) + l * f(k0 + 1);
  }
  const Scalar l = s - static_cast<Scalar>(k);
  const Scalar fm = f(k - 1), f0 = f(k), f1 = f(k + 1), f2 = f(k + 2);
  return fm * (-l * (l - 1) * (l - 2) / 6) + f0 * ((l + 1) * (l - 1) * (l - 2) / 2) +
         f1 * (-(l + 1) * l * (l - 2) / 2) + f2 * ((l + 1) * l * (l - 1) / 6);
}

Samples solve_v(const DirectState& b, const Samples& r, const Samples& s, const WaveSpeed& ws) {
  const Index n = b.size();
  Samples a(n), g(n), v(n);
  for (Index i = 0; i < n; ++i) {
    const SpeedDerivs d = ws.eval(b.u(i));
    a(i) = -(b.R(i) - b.S(i)) * d.dc / (2 * d.c * d.c);
    g(i) = (r(i) - s(i)) / (2 * d.c);
  }
  const Scalar h2 = 0.5 * b.h;
  v(0) = 0;
  for (Index i = 0; i + 1 < n; ++i)
    v(i + 1) = (v(i) * (1 + h2 * a(i)) + h2 * (g(i) + g(i + 1))) / (1 - h2 * a(i + 1));
  return v;
}

void vertical_displacements(const DirectState& b, const WaveSpeed& ws, const Samples& r, const Samples& s,
                            const Samples& w, const Samples& z, Samples& rt, Samples& st) {
  const Samples Rx = central_derivative(b.R, b.h), Sx = central_derivative(b.S, b.h);
  const Index n = b.size();
  rt.resize(n), st.resize(n);
  for (Index i = 0; i < n; ++i) {
    const SpeedDerivs d = ws.eval(b.u(i));
    const Scalar k = d.dc / (8 * d.c * d.c) * (w(i) - z(i));
    rt(i) = r(i) + w(i) * Rx(i) - k * b.S(i) * b.S(i);
    st(i) = s(i) + z(i) * Sx(i) - k * b.R(i) * b.R(i);
  }
}

PhysicalTangentTrajectory physical_tangent_solve(const InitialDatum& d, const WaveSpeed& ws,
                                                 const PhysicalTangentInit& init, Scalar T, Interval x_range,
                                                 Scalar h, const DirectOptions& opts) {
  check_cfl(opts.cfl);
  DirectState s0 = make_state(d, ws, x_range, h);
  s0.cfl = opts.cfl;
  const Index n = s0.size();
  if (init.w.size() != n || init.z.size() != n || init.r.size() != n || init.s.size() != n)
    throw DomainError("physical tangent: initial fields do not match the grid");
  Fields y{s0.u, s0.R, s0.S, init.w, init.z, init.r, init.s};
  DirectState scratch = s0;

  Rhs rhs = [&](const Fields& in, Fields& out) {
    out.resize(7);
    base_rhs(ws, h, in[0], in[1], in[2], out[0], out[1], out[2]);
    scratch.u = in[0], scratch.R = in[1], scratch.S = in[2];
    const Samples v = solve_v(scratch, in[5], in[6], ws);
    const Samples Rx = central_derivative(in[1], h), Sx = central_derivative(in[2], h);
    for (int m = 3; m < 7; ++m) out[m].resize(n);
    for (Index i = 0; i < n; ++i) {
      const SpeedDerivs cd = ws.eval(in[0](i));
      const Scalar R = in[1](i), S = in[2](i);
      const Scalar w = in[3](i), z = in[4](i), r = in[5](i), s = in[6](i);
      const Scalar ux = (R - S) / (2 * cd.c);
      const Scalar k2 = cd.d2c / (4 * cd.c) - cd.dc * cd.dc / (4 * cd.c * cd.c);
      out[3](i) = cd.c * dx_left_moving(in[3], i, h) - cd.dc * (v(i) + ux * w);
      out[4](i) = -cd.c * dx_right_moving(in[4], i, h) + cd.dc * (v(i) + ux * z);
      out[5](i) = cd.c * dx_left_moving(in[5], i, h) + cd.dc * Rx(i) * v(i) + k2 * (R * R - S * S) * v(i) +
                  cd.dc / (2 * cd.c) * (R * r - S * s);
      out[6](i) = -cd.c * dx_right_moving(in[6], i, h) - cd.dc * Sx(i) * v(i) + k2 * (S * S - R * R) * v(i) +
                  cd.dc / (2 * cd.c) * (S * s - R * r);
    }
  };

  PhysicalTangentTrajectory traj;
  auto snapshot = [&](Scalar t) {
    PhysicalTangentFrame f;
    f.base = s0;
    f.base.t = t;
    f.base.u = y[0], f.base.R = y[1], f.base.S = y[2];
    f.w = y[3], f.z = y[4], f.r = y[5], f.s = y[6];
    f.v = solve_v(f.base, f.r, f.s, ws);
    vertical_displacements(f.base, ws, f.r, f.s, f.w, f.z, f.rt, f.st);
    return f;
  };
  Scalar t = 0;
  const auto ts = targets(opts, T);
  if (ts.front() == 0) traj.frames.push_back(snapshot(0));
  const Scalar cap = 1 / h;
  march(
      y, t, ts, opts.cfl, h, ws, rhs,
      [&](Scalar tt) {
        if (tt > 0) traj.frames.push_back(snapshot(tt));
      },
      [&](Scalar tt, Scalar) {
        if (!(std::max(y[1].abs().maxCoeff(), y[2].abs().maxCoeff()) <= cap)) {
          std::ostringstream os;
          os << "physical tangent: base solution left its smooth window at t = " << tt;
          throw SolverError(os.str());
        }
        return true;
      },
      traj.steps);
  return traj;
}

WeightInequalityReport weight_inequality_check(const InitialDatum& d, const WaveSpeed& ws, Scalar T,
                                               Interval x_range, Scalar h, Scalar slack, Scalar cfl) {
  check_cfl(cfl);
  const DirectState s0 = make_state(d, ws, x_range, h);
  const Index n = s0.size();
  Fields y{s0.u, s0.R, s0.S};
  Rhs rhs = [&](const Fields& in, Fields& out) {
    out.resize(3);
    base_rhs(ws, h, in[0], in[1], in[2], out[0], out[1], out[2]);
  };
  const Scalar c0 = ws.c0();
  struct Snap {
    Samples Wm, Wp, S2, R2, c;
    Scalar a;
  };
  const Samples xs = s0.xs();
  auto snap = [&]() {
    Snap s;
    s.S2 = y[2].square();
    s.R2 = y[1].square();
    s.Wm = 1 + cumulative_trapezoid(xs, s.S2);
    const Samples rc = cumulative_trapezoid(xs, s.R2);
    s.Wp = 1 + (rc(n - 1) - rc);
    s.c.resize(n);
    Samples dens(n);
    for (Index i = 0; i < n; ++i) {
      const SpeedDerivs cd = ws.eval(y[0](i));
      s.c(i) = cd.c;
      const Scalar R = y[1](i), S = y[2](i);
      dens(i) = std::abs(cd.dc) / (2 * cd.c) * std::abs(R * R * S - S * S * R);
    }
    s.a = trapezoid(dens, h);
    return s;
  };
  WeightInequalityReport rep;
  rep.slack = slack;
  Snap prev = snap();
  Scalar t = 0;
  long long steps = 0;
  const Scalar cap = 1 / h;
  march(
      y, t, {T}, cfl, h, ws, rhs, [](Scalar) {},
      [&](Scalar, Scalar dt) {
        if (!(std::max(y[1].abs().maxCoeff(), y[2].abs().maxCoeff()) <= cap)) return false;
        Snap cur = snap();
        const Samples Wmx = 0.5 * (central_derivative(prev.Wm, h) + central_derivative(cur.Wm, h));
        const Samples Wpx = 0.5 * (central_derivative(prev.Wp, h) + central_derivative(cur.Wp, h));
        const Scalar a = 0.5 * (prev.a + cur.a);
        for (Index i = 2; i + 2 < n; ++i) {
          const Scalar c = 0.5 * (prev.c(i) + cur.c(i));
          const Scalar em = (cur.Wm(i) - prev.Wm(i)) / dt - c * Wmx(i) -
                            (-2 * c0 * 0.5 * (prev.S2(i) + cur.S2(i)) + a);
          const Scalar ep = (cur.Wp(i) - prev.Wp(i)) / dt + c * Wpx(i) -
                            (-2 * c0 * 0.5 * (prev.R2(i) + cur.R2(i)) + a);
          rep.max_excess = std::max({rep.max_excess, em, ep});
          rep.violations += (em > slack) + (ep > slack);
          rep.samples += 2;
        }
        prev = std::move(cur);
        return true;
      },
      steps);
  return rep;
}

}  // namespace cwave
