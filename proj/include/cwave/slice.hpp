#pragma once

#include "cwave/chart.hpp"
#include "cwave/types.hpp"

#include <vector>

namespace cwave {

/// Grid edge from node (i0, j0) to (i1, j1); a curve point sits at fraction lambda.
struct EdgeRef {
  Index i0 = 0, j0 = 0, i1 = 0, j1 = 0;
  Scalar lambda = 0;
};

/// Level set {t = tau} of a chart, ordered by increasing x.
///
/// X is nondecreasing and Y nonincreasing along the points; the segment
/// measures dX and |dY| are therefore nonnegative.
struct LevelCurve {
  Scalar tau = 0;
  Samples X, Y, u, alpha, beta, p, q, x, t;
  std::vector<EdgeRef> edges;

  [[nodiscard]] Index size() const { return X.size(); }
  /// Segment increments X_{k+1} - X_k.
  [[nodiscard]] Samples dX() const;
  /// Segment increments Y_k - Y_{k+1}.
  [[nodiscard]] Samples dY() const;
  /// Any node field interpolated at the curve points along their edges.
  [[nodiscard]] Samples sample(const Field& f) const;
};

struct CurveOptions {
  /// Require sin(alpha/2) and sin(beta/2) to vanish at both ends of the curve.
  bool require_quiescent_ends = true;
  Scalar quiescence_tol = 1e-10;
};

LevelCurve extract_level_curve(const CharChart& chart, Scalar tau, const CurveOptions& opts = {});

/// Line integrals over a curve with nonnegative measures, by the trapezoid rule
/// on each segment: sum_k (f_k + f_{k+1})/2 dX_k + (g_k + g_{k+1})/2 |dY|_k.
Scalar line_integral(const LevelCurve& c, const Samples& f_dX, const Samples& g_dY);
/// Running version of line_integral from the left end (entry 0 is zero).
Samples cumulative_line_integral(const LevelCurve& c, const Samples& f_dX, const Samples& g_dY);

/// Energy on the curve: (int p sin^2(alpha/2) dX + int q sin^2(beta/2) |dY|) / 2.
struct CurveEnergy {
  Scalar backward = 0;  ///< int R^2/2 dx
  Scalar forward = 0;   ///< int S^2/2 dx
  [[nodiscard]] Scalar total() const { return backward + forward; }
};
CurveEnergy curve_energy(const LevelCurve& c);

struct SliceSamples {
  Samples x, u, ut, ux, R, S, e;
};

/// A time slice u(tau, .) recovered from a level curve.
struct PhysicalSlice {
  Scalar tau = 0;
  /// |R|, |S| cap used for the pointwise values.
  Scalar clip = 0;
  SliceSamples points;
  SliceSamples grid;
  Scalar energy = 0;
  Scalar energy_backward = 0;
  Scalar energy_forward = 0;
  /// Cumulative distributions of R^2/2 dx and S^2/2 dx on the uniform grid.
  Samples mu_minus, mu_plus;
};

/// dx of the uniform resampling defaults to the chart step.
PhysicalSlice reconstruct_slice(const CharChart& chart, const LevelCurve& curve, Scalar dx = 0);

/// Linear interpolation of samples (xs ascending, ties allowed) at x; constant extension.
Scalar interp_linear(const Samples& xs, const Samples& fs, Scalar x);

struct JacobianInfo {
  Scalar x_X = 0, x_Y = 0, t_X = 0, t_Y = 0;
  Scalar det = 0;
};
JacobianInfo jacobian(const NodeState& s, const WaveSpeed& ws);
JacobianInfo jacobian(const CharChart& chart, Index i, Index j);

}  // namespace cwave
