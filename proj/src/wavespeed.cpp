#include "cwave/wavespeed.hpp"

#include "cwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cwave {

namespace {

constexpr int kValidationSamples = 4001;

// value, first and second derivative of sum_k a_k s^k
SpeedDerivs horner(const std::vector<Scalar>& a, Scalar s) {
  Scalar p = 0, dp = 0, d2p = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    d2p = d2p * s + 2 * dp;
    dp = dp * s + p;
    p = p * s + *it;
  }
  return {p, dp, d2p};
}

std::size_t expected_coeffs(SpeedKind kind) {
  switch (kind) {
    case SpeedKind::Constant: return 1;
    case SpeedKind::Cosine: return 2;
    case SpeedKind::GaussianBump: return 3;
    default: return 0;
  }
}

}  // namespace

WaveSpeed::WaveSpeed(SpeedKind kind, std::vector<Scalar> coeffs, Interval u_range)
    : kind_(kind), coeffs_(std::move(coeffs)), u_range_(u_range) {
  if (!(u_range_.hi > u_range_.lo)) throw DomainError("wave speed: empty u_range");
  const std::size_t need = expected_coeffs(kind_);
  if (need != 0 && coeffs_.size() != need)
    throw DomainError("wave speed: wrong number of coefficients");
  if (need == 0 && coeffs_.empty()) throw DomainError("wave speed: no coefficients");
  if (kind_ == SpeedKind::GaussianBump && !(coeffs_[2] > 0))
    throw DomainError("wave speed: bump width must be positive");

  Scalar cmin = std::numeric_limits<Scalar>::infinity();
  Scalar logd = 0;
  for (int k = 0; k < kValidationSamples; ++k) {
    const Scalar u = u_range_.lo + u_range_.length() * k / (kValidationSamples - 1);
    const SpeedDerivs d = eval(u);
    if (!std::isfinite(d.c)) throw DomainError("wave speed: non-finite value");
    cmin = std::min(cmin, d.c);
    if (d.c > 0) logd = std::max(logd, std::abs(d.dc / d.c));
  }
  if (!(cmin > 0)) {
    std::ostringstream os;
    os << "wave speed " << describe() << " is not uniformly positive on [" << u_range_.lo
       << ", " << u_range_.hi << "] (min c = " << cmin << ")";
    throw DomainError(os.str());
  }
  c0_ = cmin;
  log_derivative_bound_ = logd;
  psi_range_ = {psi(u_range_.lo), psi(u_range_.hi)};
}

WaveSpeed WaveSpeed::constant(Scalar c, Interval u_range) {
  return {SpeedKind::Constant, {c}, u_range};
}
WaveSpeed WaveSpeed::cosine(Scalar a, Scalar b, Interval u_range) {
  return {SpeedKind::Cosine, {a, b}, u_range};
}
WaveSpeed WaveSpeed::gaussian_bump(Scalar base, Scalar height, Scalar width, Interval u_range) {
  return {SpeedKind::GaussianBump, {base, height, width}, u_range};
}
WaveSpeed WaveSpeed::cosine_polynomial(std::vector<Scalar> coeffs, Interval u_range) {
  return {SpeedKind::CosinePolynomial, std::move(coeffs), u_range};
}
WaveSpeed WaveSpeed::polynomial(std::vector<Scalar> coeffs, Interval u_range) {
  return {SpeedKind::Polynomial, std::move(coeffs), u_range};
}

SpeedDerivs WaveSpeed::eval(Scalar u) const {
  switch (kind_) {
    case SpeedKind::Constant:
      return {coeffs_[0], 0, 0};
    case SpeedKind::Cosine: {
      const Scalar b = coeffs_[1];
      return {coeffs_[0] + b * std::cos(u), -b * std::sin(u), -b * std::cos(u)};
    }
    case SpeedKind::GaussianBump: {
      const Scalar w2 = coeffs_[2] * coeffs_[2];
      const Scalar e = coeffs_[1] * std::exp(-u * u / w2);
      return {coeffs_[0] + e, -2 * u / w2 * e, (4 * u * u / (w2 * w2) - 2 / w2) * e};
    }
    case SpeedKind::CosinePolynomial: {
      const Scalar s = std::sin(u);
      const Scalar co = std::cos(u);
      const SpeedDerivs p = horner(coeffs_, co);
      return {p.c, -s * p.dc, -co * p.dc + s * s * p.d2c};
    }
    case SpeedKind::Polynomial:
      return horner(coeffs_, u);
  }
  return {};
}

bool WaveSpeed::is_constant() const {
  switch (kind_) {
    case SpeedKind::Constant: return true;
    case SpeedKind::Cosine:
    case SpeedKind::GaussianBump: return coeffs_[1] == 0;
    default:
      return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](Scalar a) { return a == 0; });
  }
}

Scalar WaveSpeed::max_speed(Interval u) const {
  const Scalar lo = std::max(u.lo, u_range_.lo);
  const Scalar hi = std::min(u.hi, u_range_.hi);
  if (hi < lo) return eval(std::clamp(u.lo, u_range_.lo, u_range_.hi)).c;
  constexpr int n = 2001;
  Scalar m = 0;
  for (int k = 0; k < n; ++k) m = std::max(m, eval(lo + (hi - lo) * k / (n - 1)).c);
  return m;
}

Scalar WaveSpeed::psi(Scalar u) const {
  if (!u_range_.contains(u)) throw DomainError("psi: u outside the admissible range");
  const auto& a = coeffs_;
  switch (kind_) {
    case SpeedKind::Constant: return a[0] * u;
    case SpeedKind::Cosine: return a[0] * u + a[1] * std::sin(u);
    case SpeedKind::GaussianBump: return a[0] * u + a[1] * a[2] * std::sqrt(M_PI) / 2 * std::erf(u / a[2]);
    case SpeedKind::CosinePolynomial: {
      // int_0^u cos^k = cos^(k-1) sin / k + (k-1)/k int_0^u cos^(k-2)
      const Scalar co = std::cos(u), si = std::sin(u);
      Scalar prev = u, cur = si, out = a[0] * u;
      if (a.size() > 1) out += a[1] * si;
      Scalar cpow = 1;  // cos^(k-1)
      for (std::size_t k = 2; k < a.size(); ++k) {
        cpow *= co;
        const Scalar next = cpow * si / static_cast<Scalar>(k) + static_cast<Scalar>(k - 1) / static_cast<Scalar>(k) * prev;
        prev = cur;
        cur = next;
        out += a[k] * next;
      }
      return out;
    }
    case SpeedKind::Polynomial: {
      Scalar out = 0;
      for (std::size_t k = a.size(); k-- > 0;) out = (out + a[k] / static_cast<Scalar>(k + 1)) * u;
      return out;
    }
  }
  return adaptive_simpson([this](Scalar s) { return eval(s).c; }, 0, u, 1e-14);
}

Scalar WaveSpeed::psi_inv(Scalar a, Scalar tol) const {
  if (a < psi_range_.lo || a > psi_range_.hi) throw DomainError("psi_inv: value outside the range of psi");
  if (a == 0) return 0;
  Scalar lo = u_range_.lo, hi = u_range_.hi;
  Scalar u = std::clamp(a / eval(0).c, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const Scalar r = psi(u) - a;
    if (std::abs(r) <= tol) return u;
    if (r > 0)
      hi = u;
    else
      lo = u;
    Scalar next = u - r / eval(u).c;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    u = next;
    if (hi - lo <= 4 * std::numeric_limits<Scalar>::epsilon() * std::max<Scalar>(1, std::abs(u)))
      return u;
  }
  return u;
}

std::string WaveSpeed::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case SpeedKind::Constant: os << "constant"; break;
    case SpeedKind::Cosine: os << "cosine"; break;
    case SpeedKind::GaussianBump: os << "gaussian_bump"; break;
    case SpeedKind::CosinePolynomial: os << "cosine_polynomial"; break;
    case SpeedKind::Polynomial: os << "polynomial"; break;
  }
  os << "(";
  for (std::size_t k = 0; k < coeffs_.size(); ++k) os << (k ? "," : "") << coeffs_[k];
  os << ")";
  return os.str();
}

GenericityReport check_genericity(const WaveSpeed& speed, int n_samples, Scalar threshold) {
  GenericityReport report;
  n_samples = std::max(n_samples, 2);
  const Interval r = speed.u_range();
  std::vector<Scalar> us(n_samples), dcs(n_samples);
  Scalar max_dc = 0, max_c = 0;
  for (int k = 0; k < n_samples; ++k) {
    us[k] = r.lo + r.length() * k / (n_samples - 1);
    const SpeedDerivs d = speed.eval(us[k]);
    dcs[k] = d.dc;
    max_dc = std::max(max_dc, std::abs(d.dc));
    max_c = std::max(max_c, std::abs(d.c));
  }
  if (speed.is_constant() || max_dc <= 1e-14 * (1 + max_c)) {
    report.constant_speed = true;
    report.pass = false;
    report.summary = "non-generic, constant speed";
    return report;
  }

  auto add_root = [&](Scalar u) {
    const Scalar d2 = speed.eval(u).d2c;
    report.roots.push_back({u, d2, std::abs(d2) > threshold});
  };
  for (int k = 0; k < n_samples; ++k) {
    if (dcs[k] == 0) {
      add_root(us[k]);
      continue;
    }
    if (k + 1 < n_samples && dcs[k + 1] != 0 && (dcs[k] > 0) != (dcs[k + 1] > 0)) {
      Scalar a = us[k], b = us[k + 1];
      Scalar fa = dcs[k];
      for (int it = 0; it < 200 && b - a > 1e-15 * std::max<Scalar>(1, std::abs(a)); ++it) {
        const Scalar m = 0.5 * (a + b);
        const Scalar fm = speed.eval(m).dc;
        if (fm == 0) {
          a = b = m;
          break;
        }
        if ((fm > 0) == (fa > 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      add_root(0.5 * (a + b));
    }
  }
  report.pass = std::all_of(report.roots.begin(), report.roots.end(),
                            [](const CriticalPoint& c) { return c.nondegenerate; });
  std::ostringstream os;
  os << report.roots.size() << " critical point(s) of c; "
     << (report.pass ? "generic" : "non-generic (c'' vanishes at a critical point)");
  report.summary = os.str();
  return report;
}

}  // namespace cwave
