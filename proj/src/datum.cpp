#include "cwave/datum.hpp"

#include "cwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace cwave {

Scalar Bump::value(Scalar x) const {
  const Scalar s = (x - center) / width;
  if (std::abs(s) >= 1) return 0;
  return amplitude * std::exp(1 - 1 / (1 - s * s));
}

Scalar Bump::derivative(Scalar x) const {
  const Scalar s = (x - center) / width;
  if (std::abs(s) >= 1) return 0;
  const Scalar d = 1 - s * s;
  return amplitude * std::exp(1 - 1 / d) * (-2 * s / (d * d)) / width;
}

InitialDatum::InitialDatum(Evaluator eval, Interval support, std::string label)
    : eval_(std::move(eval)), support_(support), label_(std::move(label)) {}

DatumPoint InitialDatum::operator()(Scalar x) const {
  if (!eval_ || x < support_.lo || x > support_.hi) return {};
  return eval_(x);
}

std::pair<Scalar, Scalar> InitialDatum::riemann(Scalar x, const WaveSpeed& ws) const {
  const DatumPoint d = (*this)(x);
  const Scalar cu = ws(d.u0) * d.u0x;
  return {d.u1 + cu, d.u1 - cu};
}

InitialDatum InitialDatum::from_bumps(const std::vector<Bump>& u0, const std::vector<Bump>& u1,
                                      VelocityMode mode, const WaveSpeed& ws) {
  Interval supp{std::numeric_limits<Scalar>::infinity(), -std::numeric_limits<Scalar>::infinity()};
  for (const auto& b : u0) {
    if (!(b.width > 0)) throw DomainError("bump width must be positive");
    supp = {std::min(supp.lo, b.support().lo), std::max(supp.hi, b.support().hi)};
  }
  for (const auto& b : u1) {
    if (!(b.width > 0)) throw DomainError("bump width must be positive");
    supp = {std::min(supp.lo, b.support().lo), std::max(supp.hi, b.support().hi)};
  }
  if (u0.empty() && u1.empty()) return zero();
  auto eval = [u0, u1, mode, ws](Scalar x) {
    DatumPoint d;
    for (const auto& b : u0) {
      d.u0 += b.value(x);
      d.u0x += b.derivative(x);
    }
    for (const auto& b : u1) d.u1 += b.value(x);
    if (mode == VelocityMode::RightMoving) d.u1 -= ws(d.u0) * d.u0x;
    if (mode == VelocityMode::LeftMoving) d.u1 += ws(d.u0) * d.u0x;
    return d;
  };
  return {eval, supp, "bumps"};
}

InitialDatum InitialDatum::zero(Interval support) {
  return {[](Scalar) { return DatumPoint{}; }, support, "zero"};
}

InitialDatum InitialDatum::from_samples(const Samples& x, const Samples& u0, const Samples& u1) {
  const Index n = x.size();
  if (n < 4 || u0.size() != n || u1.size() != n) throw DomainError("datum samples: need >= 4 equal-length columns");
  const Scalar h = (x(n - 1) - x(0)) / static_cast<Scalar>(n - 1);
  for (Index k = 1; k < n; ++k)
    if (std::abs(x(k) - x(k - 1) - h) > 1e-9 * std::max<Scalar>(1, std::abs(h)))
      throw DomainError("datum samples: x grid must be uniform");
  auto slopes = [&](const Samples& f) {
    Samples m(n);
    m(0) = (f(1) - f(0)) / h;
    m(n - 1) = (f(n - 1) - f(n - 2)) / h;
    for (Index k = 1; k + 1 < n; ++k) m(k) = (f(k + 1) - f(k - 1)) / (2 * h);
    return m;
  };
  auto data = std::make_shared<std::array<Samples, 5>>(
      std::array<Samples, 5>{x, u0, slopes(u0), u1, slopes(u1)});
  auto eval = [data, h, n](Scalar xv) {
    const auto& [xs, f, m, g, mg] = *data;
    const Index k = std::clamp<Index>(static_cast<Index>(std::floor((xv - xs(0)) / h)), 0, n - 2);
    const Scalar s = (xv - xs(k)) / h;
    const Scalar h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const Scalar h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    const Scalar d00 = 6 * s * s - 6 * s, d10 = 3 * s * s - 4 * s + 1;
    const Scalar d01 = -d00, d11 = 3 * s * s - 2 * s;
    DatumPoint d;
    d.u0 = h00 * f(k) + h10 * h * m(k) + h01 * f(k + 1) + h11 * h * m(k + 1);
    d.u0x = (d00 * f(k) + d01 * f(k + 1)) / h + d10 * m(k) + d11 * m(k + 1);
    d.u1 = h00 * g(k) + h10 * h * mg(k) + h01 * g(k + 1) + h11 * h * mg(k + 1);
    return d;
  };
  return {eval, {x(0), x(n - 1)}, "samples"};
}

InitialDatum InitialDatum::translated(Scalar shift) const {
  InitialDatum out = *this;
  auto inner = eval_;
  out.eval_ = [inner, shift](Scalar x) { return inner(x - shift); };
  out.support_ = {support_.lo + shift, support_.hi + shift};
  out.label_ = label_ + "+shift";
  return out;
}

SampledDatum sample(const InitialDatum& d, const WaveSpeed& ws, Interval range, Scalar h) {
  const Index n = static_cast<Index>(std::llround(range.length() / h)) + 1;
  SampledDatum s;
  s.h = h;
  s.x = Samples::LinSpaced(n, range.lo, range.lo + h * static_cast<Scalar>(n - 1));
  s.u0.resize(n), s.u0x.resize(n), s.u1.resize(n), s.R0.resize(n), s.S0.resize(n);
  for (Index k = 0; k < n; ++k) {
    const DatumPoint p = d(s.x(k));
    s.u0(k) = p.u0;
    s.u0x(k) = p.u0x;
    s.u1(k) = p.u1;
    const Scalar cu = ws(p.u0) * p.u0x;
    s.R0(k) = p.u1 + cu;
    s.S0(k) = p.u1 - cu;
  }
  return s;
}

namespace {

Scalar integrate_support(const InitialDatum& d, const std::function<Scalar(Scalar)>& f, Scalar tol) {
  const Interval s = d.support();
  if (!(s.hi > s.lo)) return 0;
  constexpr int panels = 64;
  std::vector<Scalar> parts(panels);
  for (int k = 0; k < panels; ++k) {
    const Scalar a = s.lo + s.length() * k / panels;
    const Scalar b = s.lo + s.length() * (k + 1) / panels;
    parts[k] = adaptive_simpson(f, a, b, tol / panels);
  }
  return pairwise_sum(parts);
}

}  // namespace

Scalar energy(const InitialDatum& d, const WaveSpeed& ws, Scalar tol) {
  return integrate_support(
      d,
      [&](Scalar x) {
        const DatumPoint p = d(x);
        const Scalar cu = ws(p.u0) * p.u0x;
        return p.u1 * p.u1 + cu * cu;
      },
      tol);
}

Scalar energy_riemann(const InitialDatum& d, const WaveSpeed& ws, Scalar tol) {
  return integrate_support(
      d,
      [&](Scalar x) {
        const auto [R, S] = d.riemann(x, ws);
        return 0.5 * (R * R + S * S);
      },
      tol);
}

Scalar max_abs_u0(const InitialDatum& d, int n) {
  const Interval s = d.support();
  Scalar m = 0;
  for (int k = 0; k < n; ++k) m = std::max(m, std::abs(d(s.lo + s.length() * k / (n - 1)).u0));
  return m;
}

}  // namespace cwave
