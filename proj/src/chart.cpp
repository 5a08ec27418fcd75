#include "cwave/chart.hpp"

#include "cwave/quadrature.hpp"

#include <algorithm>
#include <barrier>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

namespace cwave {

namespace {

constexpr Scalar kNaN = std::numeric_limits<Scalar>::quiet_NaN();
constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();

struct Rates {
  XRates x;
  YRates y;
};

Rates rates(const NodeState& s, const WaveSpeed& ws) {
  const SpeedDerivs d = ws.eval(s.u);
  const Scalar sa = std::sin(s.alpha), ca = std::cos(s.alpha);
  const Scalar sb = std::sin(s.beta), cb = std::cos(s.beta);
  const Scalar k = d.dc / (8 * d.c * d.c);
  Rates r;
  r.x.u = sa * s.p / (4 * d.c);
  r.x.beta = k * (ca - cb) * s.p;
  r.x.q = k * (sa - sb) * s.p * s.q;
  r.x.x = (1 + ca) * s.p / 4;
  r.x.t = r.x.x / d.c;
  r.y.u = sb * s.q / (4 * d.c);
  r.y.alpha = k * (cb - ca) * s.q;
  r.y.p = k * (sb - sa) * s.p * s.q;
  r.y.x = -(1 + cb) * s.q / 4;
  r.y.t = -r.y.x / d.c;
  return r;
}

NodeState unsolved(Scalar t) {
  return {kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, t};
}

bool finite(const NodeState& s) {
  return std::isfinite(s.u) && std::isfinite(s.alpha) && std::isfinite(s.beta) &&
         std::isfinite(s.p) && std::isfinite(s.q) && std::isfinite(s.x) && std::isfinite(s.t);
}

// One cell of the trapezoidal march. `xn` is the neighbour along X (beta, q
// are carried from it), `yn` the neighbour along Y (alpha, p). hx, hy are the
// signed steps from the neighbours to the new node.
NodeState step_node(const NodeState& xn, const NodeState& yn, Scalar hx, Scalar hy,
                    const WaveSpeed& ws, const SolveOptions& opts, Index i, Index j, int& iters) {
  const Rates rx = rates(xn, ws);
  const Rates ry = rates(yn, ws);
  NodeState n;
  n.alpha = yn.alpha + hy * ry.y.alpha;
  n.p = yn.p + hy * ry.y.p;
  n.beta = xn.beta + hx * rx.x.beta;
  n.q = xn.q + hx * rx.x.q;
  n.u = 0.5 * (xn.u + hx * rx.x.u + yn.u + hy * ry.y.u);
  n.x = 0.5 * (xn.x + hx * rx.x.x + yn.x + hy * ry.y.x);
  n.t = 0.5 * (xn.t + hx * rx.x.t + yn.t + hy * ry.y.t);

  const Scalar hx2 = 0.5 * hx, hy2 = 0.5 * hy;
  for (iters = 1; iters <= opts.max_iters; ++iters) {
    const Rates rn = rates(n, ws);
    NodeState m;
    m.alpha = yn.alpha + hy2 * (ry.y.alpha + rn.y.alpha);
    m.p = yn.p + hy2 * (ry.y.p + rn.y.p);
    m.beta = xn.beta + hx2 * (rx.x.beta + rn.x.beta);
    m.q = xn.q + hx2 * (rx.x.q + rn.x.q);
    m.u = 0.5 * (xn.u + hx2 * (rx.x.u + rn.x.u) + yn.u + hy2 * (ry.y.u + rn.y.u));
    m.x = 0.5 * (xn.x + hx2 * (rx.x.x + rn.x.x) + yn.x + hy2 * (ry.y.x + rn.y.x));
    m.t = 0.5 * (xn.t + hx2 * (rx.x.t + rn.x.t) + yn.t + hy2 * (ry.y.t + rn.y.t));
    auto close = [&](Scalar a, Scalar b) { return std::abs(a - b) <= opts.tol * (1 + std::abs(a)); };
    const bool done = close(m.u, n.u) && close(m.alpha, n.alpha) && close(m.beta, n.beta) &&
                      close(m.p, n.p) && close(m.q, n.q) && close(m.x, n.x) && close(m.t, n.t);
    n = m;
    if (!finite(n)) break;
    if (done) break;
  }
  if (!finite(n)) throw SolverError("non-finite value in chart march", i, j);
  if (iters > opts.max_iters) {
    std::ostringstream os;
    os << "fixed point did not converge in " << opts.max_iters << " iterations at node (" << i
       << ", " << j << ")";
    throw SolverError(os.str(), i, j);
  }
  if (!(n.p > 0) || !(n.q > 0)) {
    std::ostringstream os;
    os << "p or q became nonpositive at node (" << i << ", " << j << ")";
    throw SolverError(os.str(), i, j);
  }
  return n;
}

// Runs body(d, i) over every node of each diagonal d in `diags`, in order,
// splitting each diagonal into contiguous chunks across threads.
template <class Body>
void wavefront(const std::vector<std::pair<Index, std::pair<Index, Index>>>& diags, int threads,
               Body body) {
  if (threads <= 1) {
    for (const auto& [d, range] : diags)
      for (Index i = range.first; i <= range.second; ++i) body(d, i);
    return;
  }
  std::mutex mu;
  std::optional<std::pair<Index, SolverError>> first_error;
  bool stop = false;
  // `halt` only changes inside the completion step, so every thread sees the
  // same value between two barrier phases.
  bool halt = false;
  auto on_phase = [&]() noexcept { halt = stop; };
  std::barrier sync(threads, on_phase);
  auto worker = [&](int k) {
    for (const auto& [d, range] : diags) {
      const Index len = range.second - range.first + 1;
      const Index lo = range.first + len * k / threads;
      const Index hi = range.first + len * (k + 1) / threads;
      for (Index i = lo; i < hi; ++i) {
        try {
          body(d, i);
        } catch (const SolverError& e) {
          std::lock_guard lock(mu);
          if (!first_error || i < first_error->first) first_error.emplace(i, e);
          stop = true;
        }
      }
      sync.arrive_and_wait();
      if (halt) return;
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker, k);
  }
  if (first_error) throw first_error->second;
}

}  // namespace

XRates x_rates(const NodeState& s, const WaveSpeed& ws) { return rates(s, ws).x; }
YRates y_rates(const NodeState& s, const WaveSpeed& ws) { return rates(s, ws).y; }

ChartDomain ChartDomain::with_step(Scalar a, Scalar b, Scalar h) {
  if (!(h > 0) || !(b > a)) throw DomainError("chart domain: need b > a and h > 0");
  const Index n = static_cast<Index>(std::ceil((b - a) / h - 1e-9)) + 1;
  return {a, a + h * static_cast<Scalar>(n - 1), n};
}

ChartDomain ChartDomain::covering(Interval support, Scalar T, Scalar c_max, Scalar h,
                                  Scalar margin_factor) {
  const Scalar reach = margin_factor * 2 * c_max * T;
  const Scalar pad = 0.1 * std::max<Scalar>(support.length(), 1) + 4 * h;
  return with_step(support.lo - reach - pad, support.hi + reach + pad, h);
}

SpeedBound a_priori_speed_bound(const InitialDatum& d, const WaveSpeed& ws, Scalar T) {
  const Scalar E0 = energy(d, ws);
  const Interval s = d.support();
  const Scalar u0_l2 = std::sqrt(std::max<Scalar>(
      0, adaptive_simpson([&](Scalar x) { const Scalar v = d(x).u0; return v * v; }, s.lo, s.hi, 1e-10)));
  // sup|u|^2 <= ||u||_2 ||u_x||_2 for compactly supported u
  const Scalar bound = std::max(max_abs_u0(d), std::sqrt((u0_l2 + T * std::sqrt(E0)) * std::sqrt(E0) / ws.c0()));
  return {bound, ws.max_speed({-bound, bound})};
}

BoundaryTrace boundary_data(const InitialDatum& d, const WaveSpeed& ws, const ChartDomain& dom) {
  BoundaryTrace b;
  const Index n = dom.n;
  b.x.resize(n), b.u.resize(n), b.alpha.resize(n), b.beta.resize(n), b.p.resize(n), b.q.resize(n);
  for (Index i = 0; i < n; ++i) {
    const Scalar x = dom.X(i);
    const auto [R, S] = d.riemann(x, ws);
    b.x(i) = x;
    b.u(i) = d(x).u0;
    b.alpha(i) = 2 * std::atan(R);
    b.beta(i) = 2 * std::atan(S);
    b.p(i) = 1 + R * R;
    b.q(i) = 1 + S * S;
  }
  return b;
}

CharChart::CharChart(WaveSpeed ws, Samples X, Samples Y)
    : ws_(std::move(ws)), X_(std::move(X)), Y_(std::move(Y)) {
  for (Field* f : fields()) f->setConstant(X_.size(), Y_.size(), kNaN);
}

std::array<Field*, 7> CharChart::fields() { return {&u, &alpha, &beta, &p, &q, &x, &t}; }
std::array<const Field*, 7> CharChart::fields() const {
  return {&u, &alpha, &beta, &p, &q, &x, &t};
}

NodeState CharChart::state(Index i, Index j) const {
  return {u(i, j), alpha(i, j), beta(i, j), p(i, j), q(i, j), x(i, j), t(i, j)};
}

void CharChart::set_state(Index i, Index j, const NodeState& s) {
  u(i, j) = s.u, alpha(i, j) = s.alpha, beta(i, j) = s.beta;
  p(i, j) = s.p, q(i, j) = s.q, x(i, j) = s.x, t(i, j) = s.t;
}

CharChart solve_chart(const BoundaryTrace& b, const WaveSpeed& ws, const ChartDomain& dom,
                      const SolveOptions& opts) {
  const Index n = dom.n;
  if (b.x.size() != n) throw DomainError("boundary trace does not match the chart domain");
  if (opts.tol <= 0 || opts.max_iters < 1) throw DomainError("solve options: bad tolerance");
  const Scalar h = dom.h();
  CharChart chart(ws, Samples::LinSpaced(n, dom.a, dom.b), Samples::LinSpaced(n, -dom.b, -dom.a));
  for (Index i = 0; i < n; ++i)
    chart.set_state(i, n - 1 - i, {b.u(i), b.alpha(i), b.beta(i), b.p(i), b.q(i), b.x(i), 0});

  const int threads = std::max(1, opts.threads);
  std::vector<long long> iters_by_row(n, 0);

  if (opts.region != Region::Backward) {
    std::vector<std::pair<Index, std::pair<Index, Index>>> diags;
    for (Index d = n; d <= 2 * n - 2; ++d) diags.push_back({d, {d - (n - 1), n - 1}});
    wavefront(diags, threads, [&](Index d, Index i) {
      const Index j = d - i;
      const bool ok = chart.solved(i - 1, j) && chart.solved(i, j - 1) &&
                      chart.t(i - 1, j) <= opts.t_stop && chart.t(i, j - 1) <= opts.t_stop;
      if (!ok) {
        chart.set_state(i, j, unsolved(kInf));
        return;
      }
      int it = 0;
      chart.set_state(i, j, step_node(chart.state(i - 1, j), chart.state(i, j - 1), h, h, ws, opts, i, j, it));
      iters_by_row[i] += it;
    });
  }
  if (opts.region != Region::Forward) {
    std::vector<std::pair<Index, std::pair<Index, Index>>> diags;
    for (Index d = n - 2; d >= 0; --d) diags.push_back({d, {0, d}});
    wavefront(diags, threads, [&](Index d, Index i) {
      const Index j = d - i;
      const bool ok = chart.solved(i + 1, j) && chart.solved(i, j + 1) &&
                      chart.t(i + 1, j) >= -opts.t_stop && chart.t(i, j + 1) >= -opts.t_stop;
      if (!ok) {
        chart.set_state(i, j, unsolved(-kInf));
        return;
      }
      int it = 0;
      chart.set_state(i, j, step_node(chart.state(i + 1, j), chart.state(i, j + 1), -h, -h, ws, opts, i, j, it));
      iters_by_row[i] += it;
    });
  } else {
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i + j < n - 1; ++i) chart.t(i, j) = -kInf;
  }
  if (opts.region == Region::Backward)
    for (Index j = 0; j < n; ++j)
      for (Index i = std::max<Index>(0, n - j); i < n; ++i) chart.t(i, j) = kInf;

  chart.iterations = 0;
  for (long long v : iters_by_row) chart.iterations += v;
  return chart;
}

CharChart solve_chart(const InitialDatum& d, const WaveSpeed& ws, const ChartDomain& dom,
                      const SolveOptions& opts) {
  return solve_chart(boundary_data(d, ws, dom), ws, dom, opts);
}

Relabeling Relabeling::identity() {
  return {[](Scalar v) { return v; }, [](Scalar) { return Scalar(1); }, [](Scalar v) { return v; }};
}

Relabeling Relabeling::affine(Scalar slope, Scalar offset) {
  if (!(slope > 0)) throw DomainError("relabeling slope must be positive");
  return {[=](Scalar v) { return slope * v + offset; }, [=](Scalar) { return slope; },
          [=](Scalar v) { return (v - offset) / slope; }};
}

NodeState interpolate(const CharChart& c, Scalar X, Scalar Y) {
  const Scalar hx = c.hX(), hy = c.hY();
  const Scalar fx = (X - c.X()(0)) / hx, fy = (Y - c.Y()(0)) / hy;
  constexpr Scalar snap = 1e-9;
  if (fx < -snap || fy < -snap || fx > static_cast<Scalar>(c.nx() - 1) + snap ||
      fy > static_cast<Scalar>(c.ny() - 1) + snap)
    return unsolved(kNaN);
  Index i0 = std::clamp<Index>(static_cast<Index>(std::floor(fx)), 0, c.nx() - 2);
  Index j0 = std::clamp<Index>(static_cast<Index>(std::floor(fy)), 0, c.ny() - 2);
  Scalar lx = fx - static_cast<Scalar>(i0), ly = fy - static_cast<Scalar>(j0);
  if (std::abs(lx) < snap) lx = 0;
  if (std::abs(lx - 1) < snap) lx = 1;
  if (std::abs(ly) < snap) ly = 0;
  if (std::abs(ly - 1) < snap) ly = 1;
  const std::array<std::pair<Index, Index>, 4> nodes{{{i0, j0}, {i0 + 1, j0}, {i0, j0 + 1}, {i0 + 1, j0 + 1}}};
  const std::array<Scalar, 4> w{(1 - lx) * (1 - ly), lx * (1 - ly), (1 - lx) * ly, lx * ly};
  NodeState s{0, 0, 0, 0, 0, 0, 0};
  for (int k = 0; k < 4; ++k) {
    if (w[k] == 0) continue;
    const auto [i, j] = nodes[k];
    if (!c.solved(i, j)) {
      return unsolved(c.t(i, j) > 0 ? kInf : -kInf);
    }
    const NodeState v = c.state(i, j);
    s.u += w[k] * v.u, s.alpha += w[k] * v.alpha, s.beta += w[k] * v.beta;
    s.p += w[k] * v.p, s.q += w[k] * v.q, s.x += w[k] * v.x, s.t += w[k] * v.t;
  }
  return s;
}

CharChart relabel(const CharChart& chart, const Relabeling& phi, const Relabeling& psi,
                  std::optional<Samples> new_X, std::optional<Samples> new_Y) {
  const Samples& X = chart.X();
  const Samples& Y = chart.Y();
  Samples NX = new_X ? *new_X : Samples::LinSpaced(X.size(), phi.inv(X(0)), phi.inv(X(X.size() - 1)));
  Samples NY = new_Y ? *new_Y : Samples::LinSpaced(Y.size(), psi.inv(Y(0)), psi.inv(Y(Y.size() - 1)));
  Samples fX(NX.size()), dfX(NX.size()), fY(NY.size()), dfY(NY.size());
  for (Index i = 0; i < NX.size(); ++i) {
    fX(i) = phi.f(NX(i));
    dfX(i) = phi.df(NX(i));
    if (!(dfX(i) > 0) || (i > 0 && !(fX(i) > fX(i - 1))))
      throw DomainError("relabel: phi is not increasing on the new grid");
  }
  for (Index j = 0; j < NY.size(); ++j) {
    fY(j) = psi.f(NY(j));
    dfY(j) = psi.df(NY(j));
    if (!(dfY(j) > 0) || (j > 0 && !(fY(j) > fY(j - 1))))
      throw DomainError("relabel: psi is not increasing on the new grid");
  }
  CharChart out(chart.speed(), NX, NY);
  for (Index j = 0; j < NY.size(); ++j)
    for (Index i = 0; i < NX.size(); ++i) {
      NodeState s = interpolate(chart, fX(i), fY(j));
      if (std::isfinite(s.u)) {
        s.p *= dfX(i);
        s.q *= dfY(j);
      }
      out.set_state(i, j, s);
    }
  out.iterations = chart.iterations;
  return out;
}

Scalar ResidualReport::worst() const { return *std::max_element(max.begin(), max.end()); }

ResidualReport residuals(const CharChart& c) {
  ResidualReport rep;
  const Scalar hx = c.hX(), hy = c.hY();
  const WaveSpeed& ws = c.speed();
  for (Index j = 1; j + 1 < c.ny(); ++j)
    for (Index i = 1; i + 1 < c.nx(); ++i) {
      if (!c.solved(i, j) || !c.solved(i - 1, j) || !c.solved(i + 1, j) || !c.solved(i, j - 1) ||
          !c.solved(i, j + 1))
        continue;
      const Rates r = rates(c.state(i, j), ws);
      auto dX = [&](const Field& f) { return (f(i + 1, j) - f(i - 1, j)) / (2 * hx); };
      auto dY = [&](const Field& f) { return (f(i, j + 1) - f(i, j - 1)) / (2 * hy); };
      const std::array<Scalar, 10> res{
          dX(c.u) - r.x.u,         dY(c.u) - r.y.u, dY(c.alpha) - r.y.alpha, dX(c.beta) - r.x.beta,
          dY(c.p) - r.y.p,         dX(c.q) - r.x.q, dX(c.x) - r.x.x,         dY(c.x) - r.y.x,
          dX(c.t) - r.x.t,         dY(c.t) - r.y.t};
      for (int k = 0; k < 10; ++k) rep.max[k] = std::max(rep.max[k], std::abs(res[k]));
      ++rep.nodes;
    }
  return rep;
}

}  // namespace cwave
