#pragma once

#include "cwave/types.hpp"

#include <string>
#include <vector>

namespace cwave {

/// c(u) together with its first two derivatives.
struct SpeedDerivs {
  Scalar c = 0;
  Scalar dc = 0;
  Scalar d2c = 0;
};

enum class SpeedKind {
  Constant,          ///< c = a0
  Cosine,            ///< c = a0 + a1 cos(u)
  GaussianBump,      ///< c = a0 + a1 exp(-(u / a2)^2)
  CosinePolynomial,  ///< c = sum_k a_k cos(u)^k
  Polynomial,        ///< c = sum_k a_k u^k
};

/// Wave speed of the variational wave equation, drawn from a closed set of
/// built-in families with analytic derivatives.
///
/// The constructor samples c on u_range and rejects the speed unless it is
/// bounded below by a positive constant there; c0() is that sampled bound.
/// Instances are immutable.
class WaveSpeed {
 public:
  WaveSpeed(SpeedKind kind, std::vector<Scalar> coeffs, Interval u_range = {-8, 8});

  static WaveSpeed constant(Scalar c, Interval u_range = {-8, 8});
  static WaveSpeed cosine(Scalar a, Scalar b, Interval u_range = {-8, 8});
  static WaveSpeed gaussian_bump(Scalar base, Scalar height, Scalar width,
                                 Interval u_range = {-8, 8});
  static WaveSpeed cosine_polynomial(std::vector<Scalar> coeffs, Interval u_range = {-8, 8});
  static WaveSpeed polynomial(std::vector<Scalar> coeffs, Interval u_range = {-8, 8});

  [[nodiscard]] SpeedDerivs eval(Scalar u) const;
  [[nodiscard]] Scalar operator()(Scalar u) const { return eval(u).c; }

  [[nodiscard]] SpeedKind kind() const { return kind_; }
  [[nodiscard]] const std::vector<Scalar>& coeffs() const { return coeffs_; }
  [[nodiscard]] Interval u_range() const { return u_range_; }
  [[nodiscard]] Scalar c0() const { return c0_; }
  /// True when c' vanishes identically.
  [[nodiscard]] bool is_constant() const;

  /// Largest sampled c on an interval (clamped to u_range).
  [[nodiscard]] Scalar max_speed(Interval u) const;
  /// Largest sampled |c'/c| on u_range.
  [[nodiscard]] Scalar log_derivative_bound() const { return log_derivative_bound_; }

  /// Psi(u) = int_0^u c(s) ds by adaptive quadrature.
  [[nodiscard]] Scalar psi(Scalar u) const;
  /// Inverse of psi: safeguarded Newton with bisection fallback.
  [[nodiscard]] Scalar psi_inv(Scalar a, Scalar tol = 1e-12) const;

  [[nodiscard]] std::string describe() const;

 private:
  SpeedKind kind_;
  std::vector<Scalar> coeffs_;
  Interval u_range_;
  Scalar c0_ = 0;
  Scalar log_derivative_bound_ = 0;
  Interval psi_range_;
};

struct CriticalPoint {
  Scalar u = 0;
  Scalar d2c = 0;
  bool nondegenerate = false;
};

/// Result of checking that c' = 0 implies c'' != 0 on u_range.
struct GenericityReport {
  bool constant_speed = false;
  std::vector<CriticalPoint> roots;
  bool pass = false;
  std::string summary;
};

GenericityReport check_genericity(const WaveSpeed& speed, int n_samples,
                                  Scalar threshold = 1e-6);

}  // namespace cwave
