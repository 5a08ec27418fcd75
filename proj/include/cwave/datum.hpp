#pragma once

#include "cwave/types.hpp"
#include "cwave/wavespeed.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cwave {

/// u0, its derivative and u1 at one point.
struct DatumPoint {
  Scalar u0 = 0;
  Scalar u0x = 0;
  Scalar u1 = 0;
};

/// C-infinity bump a * exp(1 - 1/(1 - s^2)), s = (x - center) / width, with a
/// peak of height a at the center and support [center - width, center + width].
struct Bump {
  Scalar center = 0.5;
  Scalar width = 0.5;
  Scalar amplitude = 0;

  [[nodiscard]] Scalar value(Scalar x) const;
  [[nodiscard]] Scalar derivative(Scalar x) const;
  [[nodiscard]] Interval support() const { return {center - width, center + width}; }
};

/// How u1 is formed from the u0 and u1 bump lists.
enum class VelocityMode {
  Given,        ///< u1 = sum of the u1 bumps
  RightMoving,  ///< u1 = -c(u0) u0_x + u1 bumps, so R vanishes where the bumps do
  LeftMoving,   ///< u1 = +c(u0) u0_x + u1 bumps, so S vanishes where the bumps do
};

/// Compactly supported initial data (u0, u1) given pointwise with exact u0_x.
///
/// Values are evaluated on demand, so the same datum can seed charts and
/// oracle grids of any resolution without resampling error.
class InitialDatum {
 public:
  using Evaluator = std::function<DatumPoint(Scalar)>;

  InitialDatum() = default;
  InitialDatum(Evaluator eval, Interval support, std::string label = "datum");

  /// Sum of bumps. The wave speed is needed for the moving modes.
  static InitialDatum from_bumps(const std::vector<Bump>& u0, const std::vector<Bump>& u1,
                                 VelocityMode mode, const WaveSpeed& ws);
  static InitialDatum zero(Interval support = {0, 1});
  /// Piecewise cubic Hermite data through samples on a uniform grid; u0_x is the
  /// derivative of the interpolant.
  static InitialDatum from_samples(const Samples& x, const Samples& u0, const Samples& u1);

  [[nodiscard]] DatumPoint operator()(Scalar x) const;
  /// R and S at t = 0.
  [[nodiscard]] std::pair<Scalar, Scalar> riemann(Scalar x, const WaveSpeed& ws) const;

  [[nodiscard]] Interval support() const { return support_; }
  [[nodiscard]] const std::string& label() const { return label_; }

  /// Spatial shift: the returned datum is x -> this(x - shift).
  [[nodiscard]] InitialDatum translated(Scalar shift) const;

 private:
  Evaluator eval_;
  Interval support_{0, 0};
  std::string label_;
};

/// Samples of a datum on a uniform grid.
struct SampledDatum {
  Samples x, u0, u0x, u1, R0, S0;
  Scalar h = 0;
};

SampledDatum sample(const InitialDatum& d, const WaveSpeed& ws, Interval range, Scalar h);

/// E0 = int u1^2 + (c(u0) u0_x)^2 dx by adaptive quadrature over the support.
Scalar energy(const InitialDatum& d, const WaveSpeed& ws, Scalar tol = 1e-12);
/// The same energy through (R0^2 + S0^2) / 2.
Scalar energy_riemann(const InitialDatum& d, const WaveSpeed& ws, Scalar tol = 1e-12);

/// Largest |u0| over the support (sampled).
Scalar max_abs_u0(const InitialDatum& d, int n = 4001);

}  // namespace cwave
