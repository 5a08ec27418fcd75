#pragma once

#include "cwave/types.hpp"

#include <cmath>
#include <functional>
#include <span>

namespace cwave {

/// Pairwise (cascade) summation; the reduction order depends only on the length.
Scalar pairwise_sum(std::span<const Scalar> values);

/// Composite trapezoid rule on a uniform grid of spacing h.
template <class Derived>
Scalar trapezoid(const Eigen::ArrayBase<Derived>& f, Scalar h) {
  const Index n = f.size();
  if (n < 2) return 0;
  Samples terms(n - 1);
  for (Index k = 0; k + 1 < n; ++k) terms(k) = 0.5 * h * (f(k) + f(k + 1));
  return pairwise_sum({terms.data(), static_cast<std::size_t>(terms.size())});
}

/// Composite trapezoid rule on a nonuniform grid x (ascending).
template <class DerivedX, class DerivedF>
Scalar trapezoid(const Eigen::ArrayBase<DerivedX>& x, const Eigen::ArrayBase<DerivedF>& f) {
  const Index n = x.size();
  if (n < 2) return 0;
  Samples terms(n - 1);
  for (Index k = 0; k + 1 < n; ++k) terms(k) = 0.5 * (x(k + 1) - x(k)) * (f(k) + f(k + 1));
  return pairwise_sum({terms.data(), static_cast<std::size_t>(terms.size())});
}

/// Running trapezoid integral, starting at zero at x(0).
template <class DerivedX, class DerivedF>
Samples cumulative_trapezoid(const Eigen::ArrayBase<DerivedX>& x, const Eigen::ArrayBase<DerivedF>& f) {
  const Index n = x.size();
  Samples out = Samples::Zero(n);
  for (Index k = 1; k < n; ++k) out(k) = out(k - 1) + 0.5 * (x(k) - x(k - 1)) * (f(k) + f(k - 1));
  return out;
}

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
Scalar adaptive_simpson(const std::function<Scalar(Scalar)>& f, Scalar a, Scalar b,
                        Scalar tol = 1e-13, int max_depth = 48);

}  // namespace cwave
