#pragma once

#include "cwave/datum.hpp"
#include "cwave/types.hpp"
#include "cwave/wavespeed.hpp"

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>

namespace cwave {

/// Square X-Y grid with X in [a, b] and Y in [-b, -a]. Node (i, j) with
/// i + j = n - 1 lies on the initial line X + Y = 0 at x = X_i.
struct ChartDomain {
  Scalar a = 0;
  Scalar b = 1;
  Index n = 2;

  [[nodiscard]] Scalar h() const { return (b - a) / static_cast<Scalar>(n - 1); }
  [[nodiscard]] Scalar X(Index i) const { return a + h() * static_cast<Scalar>(i); }
  [[nodiscard]] Scalar Y(Index j) const { return -b + h() * static_cast<Scalar>(j); }

  /// [a, a + (n-1) h] with n chosen so that the end is at least b.
  static ChartDomain with_step(Scalar a, Scalar b, Scalar h);
  /// Grid that contains the support plus the forward and backward dependence
  /// margins 2 c_max T on each side, scaled by margin_factor.
  static ChartDomain covering(Interval support, Scalar T, Scalar c_max, Scalar h,
                              Scalar margin_factor = 1.2);
};

/// sup |u| bound from energy conservation together with the resulting c_max on [0, T].
struct SpeedBound {
  Scalar u_bound = 0;
  Scalar c_max = 0;
};
SpeedBound a_priori_speed_bound(const InitialDatum& d, const WaveSpeed& ws, Scalar T);

/// One node's worth of the seven chart variables.
struct NodeState {
  Scalar u = 0, alpha = 0, beta = 0, p = 1, q = 1, x = 0, t = 0;
};

/// Right-hand sides of the X-equations: u_X, beta_X, q_X, x_X, t_X.
struct XRates {
  Scalar u, beta, q, x, t;
};
/// Right-hand sides of the Y-equations: u_Y, alpha_Y, p_Y, x_Y, t_Y.
struct YRates {
  Scalar u, alpha, p, x, t;
};

XRates x_rates(const NodeState& s, const WaveSpeed& ws);
YRates y_rates(const NodeState& s, const WaveSpeed& ws);

/// Values on the initial line, one entry per diagonal node i (x = X_i).
struct BoundaryTrace {
  Samples x, u, alpha, beta, p, q;
};

BoundaryTrace boundary_data(const InitialDatum& d, const WaveSpeed& ws, const ChartDomain& dom);

enum class Region { Forward, Backward, Both };

struct SolveOptions {
  Region region = Region::Forward;
  /// Nodes whose parents are beyond |t| > t_stop are left unsolved.
  Scalar t_stop = std::numeric_limits<Scalar>::infinity();
  int threads = 1;
  Scalar tol = 1e-12;
  int max_iters = 50;
};

/// The seven fields on a uniform X-Y grid. Unsolved nodes hold NaN, with
/// t = +inf above the solved region and -inf below it.
class CharChart {
 public:
  CharChart(WaveSpeed ws, Samples X, Samples Y);

  [[nodiscard]] const WaveSpeed& speed() const { return ws_; }
  [[nodiscard]] const Samples& X() const { return X_; }
  [[nodiscard]] const Samples& Y() const { return Y_; }
  [[nodiscard]] Index nx() const { return X_.size(); }
  [[nodiscard]] Index ny() const { return Y_.size(); }
  [[nodiscard]] Scalar hX() const { return (X_(nx() - 1) - X_(0)) / static_cast<Scalar>(nx() - 1); }
  [[nodiscard]] Scalar hY() const { return (Y_(ny() - 1) - Y_(0)) / static_cast<Scalar>(ny() - 1); }
  [[nodiscard]] Scalar h() const { return std::max(hX(), hY()); }

  [[nodiscard]] bool solved(Index i, Index j) const { return std::isfinite(u(i, j)); }
  [[nodiscard]] NodeState state(Index i, Index j) const;
  void set_state(Index i, Index j, const NodeState& s);

  /// Field by index in the order u, alpha, beta, p, q, x, t.
  [[nodiscard]] const Field& field(int k) const { return *fields()[k]; }
  [[nodiscard]] Field& field(int k) { return *fields()[k]; }
  static constexpr std::array<const char*, 7> kFieldNames{"u", "alpha", "beta", "p", "q", "x", "t"};

  Field u, alpha, beta, p, q, x, t;

  /// Number of fixed-point sweeps spent in the solve (deterministic).
  long long iterations = 0;

 private:
  [[nodiscard]] std::array<Field*, 7> fields();
  [[nodiscard]] std::array<const Field*, 7> fields() const;

  WaveSpeed ws_;
  Samples X_;
  Samples Y_;
};

/// March the semilinear system from the initial line. Node (i, j) is obtained from
/// its two parents by a trapezoidal fixed point on the cell edges.
CharChart solve_chart(const BoundaryTrace& boundary, const WaveSpeed& ws, const ChartDomain& dom,
                      const SolveOptions& opts = {});

/// Convenience wrapper: boundary_data then solve_chart.
CharChart solve_chart(const InitialDatum& d, const WaveSpeed& ws, const ChartDomain& dom,
                      const SolveOptions& opts = {});

/// Increasing C^2 relabeling map with derivative and inverse.
struct Relabeling {
  std::function<Scalar(Scalar)> f;
  std::function<Scalar(Scalar)> df;
  std::function<Scalar(Scalar)> inv;

  static Relabeling identity();
  /// s * X + o, s > 0.
  static Relabeling affine(Scalar slope, Scalar offset);
};

/// Chart in labels X = phi(X~), Y = psi(Y~) on the given new grids; p and q
/// pick up the factors phi', psi'. When the grids are omitted, the images of
/// the old grid ends under the inverse maps are used with the same node counts.
CharChart relabel(const CharChart& chart, const Relabeling& phi, const Relabeling& psi,
                  std::optional<Samples> new_X = std::nullopt,
                  std::optional<Samples> new_Y = std::nullopt);

/// Bilinear interpolation of all seven fields at a label point (NaN outside the solved set).
NodeState interpolate(const CharChart& chart, Scalar X, Scalar Y);

/// Max central-difference residual of each of the ten relations over interior nodes.
struct ResidualReport {
  static constexpr std::array<const char*, 10> kNames{"u_X", "u_Y",   "alpha_Y", "beta_X", "p_Y",
                                                      "q_X", "x_X",   "x_Y",     "t_X",    "t_Y"};
  std::array<Scalar, 10> max{};
  Index nodes = 0;

  [[nodiscard]] Scalar worst() const;
};

ResidualReport residuals(const CharChart& chart);

}  // namespace cwave
