#pragma once

#include "cwave/metric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cwave {

/// u0 interpolated through Psi(u) = int_0^u c, u1 linearly. With energy_cap <= 0
/// the cap is max(E(A), E(B)) (1 + 1e-9).
PathOfData interpolated_path(const InitialDatum& A, const InitialDatum& B, const WaveSpeed& ws, int M,
                             Scalar energy_cap = 0);

struct SobolevParts {
  Scalar h1_u0 = 0;   ///< ||u0 - v0||_{H^1}
  Scalar w11_u0 = 0;  ///< ||u0 - v0||_{W^{1,1}}
  Scalar l2_u1 = 0;   ///< ||u1 - v1||_{L^2}
  Scalar l1_u1 = 0;   ///< ||u1 - v1||_{L^1}
  [[nodiscard]] Scalar total() const { return h1_u0 + w11_u0 + l2_u1 + l1_u1; }
};
SobolevParts sobolev_rhs(const InitialDatum& A, const InitialDatum& B, Scalar tol = 1e-12);

/// Lower-bound functionals: ||u0 - v0||_{L^1}, and the dual transport value
/// sup |int f d(mu - nu)| over sup|f| + sup|f'| <= 1, where mu, nu have densities
/// u1^2 + c(u0)^2 u0_x^2. The dual value is the best of a structured family and so
/// bounds the supremum from below.
struct TransportBounds {
  Scalar l1 = 0;
  Scalar wasserstein = 0;
  /// |mu(R) - nu(R)|, reached by f = 1.
  Scalar mass_gap = 0;
};
TransportBounds transport_lower_bounds(const InitialDatum& A, const InitialDatum& B, const WaveSpeed& ws,
                                       Index samples = 8001);

struct BoundReport {
  std::string label;
  Scalar length = 0;
  SobolevParts sobolev;
  TransportBounds transport;
  /// length / sobolev total and max(l1, wasserstein) / length.
  Scalar upper_ratio = 0;
  Scalar lower_ratio = 0;
};
/// Interpolated path length at time zero, with both sides of the comparison.
BoundReport bound_report(const InitialDatum& A, const InitialDatum& B, const WaveSpeed& ws, const ChartDomain& dom,
                         int M, const PathLengthOptions& opts = {}, std::string label = "pair");

struct ChainCheck {
  Scalar C_upper = 0;  ///< max upper_ratio over the suite
  Scalar delta0 = 0;   ///< max lower_ratio over the suite
  int upper_violations = 0;
  int lower_violations = 0;
};
/// With frozen constants, counts pairs violating length <= C' rhs or
/// max(l1, W) <= delta0 length; without them, reports the fitted values.
ChainCheck check_chains(const std::vector<BoundReport>& suite, std::optional<Scalar> C_upper = std::nullopt,
                        std::optional<Scalar> delta0 = std::nullopt);

/// H^1 x L^2 distance between two slices resampled to a common grid.
struct SliceDistance {
  Scalar value = 0;
  /// Either slice had |R| or |S| at the clip: the true distance is not resolved.
  bool exceeds_cap = false;
};
SliceDistance h1l2_distance(const PhysicalSlice& a, const PhysicalSlice& b);

struct LipschitzRow {
  Scalar tau = 0;
  Scalar length = 0;
  Scalar ratio = 0;
  /// max over theta of int_0^tau a
  Scalar a_integral = 0;
  Scalar envelope = 0;
  bool violation = false;
  SliceDistance endpoint;
  Scalar distance_ratio = 0;
};

struct LipschitzTable {
  std::string label;
  std::vector<LipschitzRow> rows;
  /// Smallest C with ratio <= exp(C tau + int a) on every row (or the frozen one).
  Scalar C = 0;
  int violations = 0;
  /// Zero initial length: ratios are reported as 1.
  bool degenerate = false;
};

/// Path lengths and endpoint distances on a grid of times (taus must start at 0).
/// With C_frozen the envelope uses that constant and violations are counted
/// above a relative slack; otherwise C is fitted.
LipschitzTable lipschitz_experiment(const PathOfData& path, const std::vector<Scalar>& taus, const WaveSpeed& ws,
                                    const ChartDomain& dom, const PathLengthOptions& opts = {},
                                    std::optional<Scalar> C_frozen = std::nullopt, Scalar slack = 1e-6);

/// Tangent norm along one solution on a time grid, with an error estimate from
/// halving the curve resolution.
struct GronwallSeries {
  std::string label;
  std::vector<Scalar> taus, norms, a, errors;
};
GronwallSeries gronwall_series(const TangentField& tf, const std::vector<Scalar>& taus, const NormWeights& nw,
                               std::string label = "case");

struct GronwallResult {
  Scalar C = 0;
  int violations = 0;
  int samples = 0;
  /// max over samples of (d/dtau log N - a - C - tolerance); <= 0 when all pass.
  Scalar worst_excess = 0;
};
/// Central differences of log N; tests d/dtau log N <= C + a(tau) with a tolerance of
/// tol_factor times the propagated quadrature error.
GronwallResult gronwall_check(const std::vector<GronwallSeries>& suite, std::optional<Scalar> C_frozen = std::nullopt,
                              Scalar tol_factor = 3);

}  // namespace cwave
