#include "cwave/quadrature.hpp"

namespace cwave {

Scalar pairwise_sum(std::span<const Scalar> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0;
  if (n <= 8) {
    Scalar s = 0;
    for (Scalar v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

Scalar simpson_step(const std::function<Scalar(Scalar)>& f, Scalar a, Scalar b, Scalar fa,
                    Scalar fm, Scalar fb, Scalar whole, Scalar tol, int depth) {
  const Scalar m = 0.5 * (a + b);
  const Scalar lm = 0.5 * (a + m);
  const Scalar rm = 0.5 * (m + b);
  const Scalar flm = f(lm);
  const Scalar frm = f(rm);
  const Scalar left = (m - a) / 6 * (fa + 4 * flm + fm);
  const Scalar right = (b - m) / 6 * (fm + 4 * frm + fb);
  const Scalar delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15 * tol) return left + right + delta / 15;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

Scalar adaptive_simpson(const std::function<Scalar(Scalar)>& f, Scalar a, Scalar b, Scalar tol,
                        int max_depth) {
  if (a == b) return 0;
  const Scalar fa = f(a);
  const Scalar fb = f(b);
  const Scalar fm = f(0.5 * (a + b));
  const Scalar whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace cwave
