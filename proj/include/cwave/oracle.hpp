#pragma once

#include "cwave/datum.hpp"
#include "cwave/types.hpp"
#include "cwave/wavespeed.hpp"

#include <limits>
#include <vector>

namespace cwave {

/// Direct (t, x) state of u, R, S on a uniform grid.
struct DirectState {
  Scalar t = 0;
  Scalar x0 = 0;
  Scalar h = 0;
  Samples u, R, S;
  Scalar cfl = 0;
  bool valid = true;

  [[nodiscard]] Index size() const { return u.size(); }
  [[nodiscard]] Scalar x(Index k) const { return x0 + h * static_cast<Scalar>(k); }
  [[nodiscard]] Samples xs() const;
  /// int (R^2 + S^2)/2 dx.
  [[nodiscard]] Scalar energy() const;
};

struct DirectOptions {
  Scalar cfl = 0.5;
  /// States returned at these times (clipped to [0, T]); the last state is always included.
  std::vector<Scalar> save_times;
};

struct DirectTrajectory {
  std::vector<DirectState> frames;
  bool valid = true;
  /// First time max(|R|, |S|) exceeded 1/h; +inf while valid.
  Scalar blowup_time = std::numeric_limits<Scalar>::infinity();
  Scalar max_energy_drift = 0;
  long long steps = 0;
  /// Running maximum of sup(|R|, |S|) and the time it was attained.
  Scalar peak_gradient = 0;
  Scalar peak_time = 0;
  /// False once sup(|R|, |S|) has fallen 10% below its running maximum while the
  /// maximum sat above twice its initial value: the grid smeared a steepening front.
  bool resolved = true;

  /// Time of gradient blow-up as seen on this grid: the cap crossing, or the
  /// peak time when the front was smeared first; +inf for a resolved run.
  [[nodiscard]] Scalar singular_time() const;
};

/// Method-of-lines solver: third-order upwind-biased differences for R (moving
/// left) and S (moving right) with the quadratic sources, SSP-RK3 in time,
/// u_t = (R + S)/2. Stops and marks the trajectory invalid when the cap 1/h is exceeded.
DirectTrajectory direct_solve(const InitialDatum& d, const WaveSpeed& ws, Scalar T, Interval x_range,
                              Scalar h, const DirectOptions& opts = {});

/// Initial tangent in physical variables: shifts w, z and perturbations r, s of R, S.
struct PhysicalTangentInit {
  Samples w, z, r, s;
};

/// Linearized fields at one time, with the derived v, r~, s~ on the same grid.
struct PhysicalTangentFrame {
  DirectState base;
  Samples w, z, r, s, v, rt, st;
};

struct PhysicalTangentTrajectory {
  std::vector<PhysicalTangentFrame> frames;
  long long steps = 0;
};

/// Integrate the shift equations and the linearized R, S equations alongside the
/// base flow; v is recovered at each stage from its x-ODE starting at the left edge.
PhysicalTangentTrajectory physical_tangent_solve(const InitialDatum& d, const WaveSpeed& ws,
                                                 const PhysicalTangentInit& init, Scalar T,
                                                 Interval x_range, Scalar h, const DirectOptions& opts = {});

/// v from v_x = -(R - S) c'/(2c^2) v + (r - s)/(2c), v = 0 at the left edge (implicit trapezoid).
Samples solve_v(const DirectState& base, const Samples& r, const Samples& s, const WaveSpeed& ws);

/// r~ and s~ from (r, s, w, z) on a base state.
void vertical_displacements(const DirectState& base, const WaveSpeed& ws, const Samples& r, const Samples& s,
                            const Samples& w, const Samples& z, Samples& rt, Samples& st);

/// Fourth-order central derivative with zero extension.
Samples central_derivative(const Samples& f, Scalar h);

/// Four-point Lagrange interpolation on a uniform grid; zero outside.
Scalar interp_cubic(Scalar x0, Scalar h, const Samples& f, Scalar x);

/// Pointwise check of the weight transport inequalities along a direct trajectory:
/// W-_t - c W-_x <= -2 c0 S^2 + a(t) and W+_t + c W+_x <= -2 c0 R^2 + a(t).
struct WeightInequalityReport {
  Scalar max_excess = -std::numeric_limits<Scalar>::infinity();
  Scalar slack = 0;
  long long samples = 0;
  long long violations = 0;
};
WeightInequalityReport weight_inequality_check(const InitialDatum& d, const WaveSpeed& ws, Scalar T,
                                               Interval x_range, Scalar h, Scalar slack, Scalar cfl = 0.5);

}  // namespace cwave
