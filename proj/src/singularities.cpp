#include "cwave/singularities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace cwave {

namespace {

using std::numbers::pi;

struct Crossing {
  long long key;  // grid edge id
  LabelPoint pt;
  Scalar aux[4];  // derivative fields interpolated on the edge
};

struct Segment {
  Crossing a, b;
  Index cell_i, cell_j;
};

// Central (or one-sided at the border) differences of f; NaN where unavailable.
Field diff(const Field& f, bool along_x, Scalar h, bool second = false) {
  const Index nx = f.rows(), ny = f.cols();
  Field d = Field::Constant(nx, ny, std::numeric_limits<Scalar>::quiet_NaN());
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i) {
      const Index m = along_x ? i : j, n = along_x ? nx : ny;
      auto at = [&](Index k) { return along_x ? f(k, j) : f(i, k); };
      if (m > 0 && m + 1 < n)
        d(i, j) = second ? (at(m + 1) - 2 * at(m) + at(m - 1)) / (h * h) : (at(m + 1) - at(m - 1)) / (2 * h);
      else if (!second && m + 1 < n)
        d(i, j) = (at(m + 1) - at(m)) / h;
      else if (!second && m > 0)
        d(i, j) = (at(m) - at(m - 1)) / h;
    }
  return d;
}

std::vector<Polyline> chain(const std::vector<Segment>& segs, std::vector<std::vector<const Crossing*>>& aux_out) {
  std::unordered_map<long long, std::vector<int>> at;
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    at[segs[s].a.key].push_back(s);
    at[segs[s].b.key].push_back(s);
  }
  std::vector<char> used(segs.size(), 0);
  std::vector<Polyline> lines;
  auto walk = [&](int s, long long from_key, std::vector<const Crossing*>& out) {
    long long key = from_key;
    while (s >= 0 && !used[s]) {
      used[s] = 1;
      const Crossing& next = segs[s].a.key == key ? segs[s].b : segs[s].a;
      out.push_back(&next);
      key = next.key;
      int nxt = -1;
      for (int c : at[key])
        if (!used[c]) nxt = c;
      s = nxt;
    }
  };
  for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
    if (used[s]) continue;
    // walk backward from a, then forward from b, then join
    std::vector<const Crossing*> back, fwd;
    used[s] = 1;
    int prev = -1;
    for (int c : at[segs[s].a.key])
      if (!used[c]) prev = c;
    walk(prev, segs[s].a.key, back);
    int next = -1;
    for (int c : at[segs[s].b.key])
      if (!used[c]) next = c;
    walk(next, segs[s].b.key, fwd);
    std::vector<const Crossing*> all(back.rbegin(), back.rend());
    all.push_back(&segs[s].a);
    all.push_back(&segs[s].b);
    all.insert(all.end(), fwd.begin(), fwd.end());
    // orient by increasing X - Y
    if (all.front()->pt.X - all.front()->pt.Y > all.back()->pt.X - all.back()->pt.Y)
      std::reverse(all.begin(), all.end());
    Polyline line;
    for (const Crossing* c : all) line.push_back(c->pt);
    lines.push_back(std::move(line));
    aux_out.push_back(std::move(all));
  }
  return lines;
}

bool seg_intersect(const LabelPoint& p1, const LabelPoint& p2, const LabelPoint& q1, const LabelPoint& q2,
                   Scalar& s, Scalar& r) {
  const Scalar dx1 = p2.X - p1.X, dy1 = p2.Y - p1.Y, dx2 = q2.X - q1.X, dy2 = q2.Y - q1.Y;
  const Scalar den = dx1 * dy2 - dy1 * dx2;
  if (den == 0) return false;
  s = ((q1.X - p1.X) * dy2 - (q1.Y - p1.Y) * dx2) / den;
  r = ((q1.X - p1.X) * dy1 - (q1.Y - p1.Y) * dx1) / den;
  return s >= 0 && s <= 1 && r >= 0 && r <= 1;
}

}  // namespace

Scalar wrap_angle(Scalar a) {
  Scalar w = std::remainder(a, 2 * pi);
  if (w <= -pi) w += 2 * pi;
  return w;
}

SingularityReport detect_singularities(const CharChart& c, std::optional<IndexBox> box) {
  SingularityReport rep;
  const Scalar h = c.h();
  rep.threshold = 10 * h;
  const IndexBox B = box.value_or(IndexBox{0, c.nx() - 1, 0, c.ny() - 1});
  if (B.i0 < 0 || B.j0 < 0 || B.i1 >= c.nx() || B.j1 >= c.ny() || B.i0 > B.i1 || B.j0 > B.j1)
    throw DomainError("singularities: region outside the grid");

  const Index nx = c.nx(), ny = c.ny();
  Field ga(nx, ny), gb(nx, ny);
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i) {
      ga(i, j) = c.solved(i, j) ? wrap_angle(c.alpha(i, j) - pi) : std::numeric_limits<Scalar>::quiet_NaN();
      gb(i, j) = c.solved(i, j) ? wrap_angle(c.beta(i, j) - pi) : std::numeric_limits<Scalar>::quiet_NaN();
    }
  for (Index j = B.j0; j <= B.j1; ++j)
    for (Index i = B.i0; i <= B.i1; ++i)
      if (c.solved(i, j) && (std::abs(ga(i, j)) < rep.threshold || std::abs(gb(i, j)) < rep.threshold))
        ++rep.near_nodes;

  const Scalar hx = c.hX(), hy = c.hY();
  const Field aX = diff(c.alpha, true, hx), aY = diff(c.alpha, false, hy), aXX = diff(c.alpha, true, hx, true);
  const Field bX = diff(c.beta, true, hx), bY = diff(c.beta, false, hy), bYY = diff(c.beta, false, hy, true);

  // aux layout: alpha level -> (alpha_X, alpha_Y, alpha_XX, beta_Y); beta level -> (beta_Y, beta_X, beta_YY, alpha_X)
  auto level = [&](const Field& g, std::array<const Field*, 4> aux) {
    std::vector<Segment> segs;
    auto crossing = [&](Index i0, Index j0, Index i1, Index j1, long long key) {
      const Scalar g0 = g(i0, j0), g1 = g(i1, j1);
      const Scalar lam = g0 / (g0 - g1);
      Crossing cr;
      cr.key = key;
      auto lerp = [&](const Field& f) { return (1 - lam) * f(i0, j0) + lam * f(i1, j1); };
      cr.pt = {0, 0, lerp(c.t), lerp(c.x)};
      cr.pt.X = (1 - lam) * c.X()(i0) + lam * c.X()(i1);
      cr.pt.Y = (1 - lam) * c.Y()(j0) + lam * c.Y()(j1);
      for (int k = 0; k < 4; ++k) cr.aux[k] = lerp(*aux[k]);
      return cr;
    };
    for (Index j = B.j0; j < B.j1; ++j)
      for (Index i = B.i0; i < B.i1; ++i) {
        const Scalar v[4] = {g(i, j), g(i + 1, j), g(i + 1, j + 1), g(i, j + 1)};
        bool skip = false;
        for (Scalar x : v) skip = skip || !std::isfinite(x) || std::abs(x) >= pi / 2;
        if (skip) continue;
        // edges in cyclic order: bottom, right, top, left
        const Index ei[4][4] = {{i, j, i + 1, j}, {i + 1, j, i + 1, j + 1}, {i, j + 1, i + 1, j + 1}, {i, j, i, j + 1}};
        const long long keys[4] = {2LL * (i * ny + j), 2LL * ((i + 1) * ny + j) + 1, 2LL * (i * ny + j + 1),
                                   2LL * (i * ny + j) + 1};
        std::vector<Crossing> cs;
        for (int e = 0; e < 4; ++e) {
          const Scalar g0 = g(ei[e][0], ei[e][1]), g1 = g(ei[e][2], ei[e][3]);
          if ((g0 < 0) != (g1 < 0)) cs.push_back(crossing(ei[e][0], ei[e][1], ei[e][2], ei[e][3], keys[e]));
        }
        if (cs.size() == 2) {
          segs.push_back({cs[0], cs[1], i, j});
        } else if (cs.size() == 4) {
          const Scalar center = 0.25 * (v[0] + v[1] + v[2] + v[3]);
          // pair crossings so that the center's side is connected
          if ((center < 0) == (v[0] < 0)) {
            segs.push_back({cs[0], cs[1], i, j});
            segs.push_back({cs[2], cs[3], i, j});
          } else {
            segs.push_back({cs[0], cs[3], i, j});
            segs.push_back({cs[1], cs[2], i, j});
          }
        }
      }
    return segs;
  };

  const auto asegs = level(ga, {&aX, &aY, &aXX, &bY});
  const auto bsegs = level(gb, {&bY, &bX, &bYY, &aX});
  std::vector<std::vector<const Crossing*>> aaux, baux;
  rep.alpha_level = chain(asegs, aaux);
  rep.beta_level = chain(bsegs, baux);
  for (const auto& l : rep.alpha_level)
    for (const auto& p : l) rep.first_time = std::min(rep.first_time, p.t);
  for (const auto& l : rep.beta_level)
    for (const auto& p : l) rep.first_time = std::min(rep.first_time, p.t);

  auto folds = [&](const std::vector<std::vector<const Crossing*>>& lines, SpecialKind kind) {
    for (const auto& line : lines)
      for (std::size_t k = 0; k + 1 < line.size(); ++k) {
        const Crossing& a = *line[k];
        const Crossing& b = *line[k + 1];
        if (!std::isfinite(a.aux[0]) || !std::isfinite(b.aux[0])) continue;
        if ((a.aux[0] < 0) == (b.aux[0] < 0)) continue;
        const Scalar lam = a.aux[0] / (a.aux[0] - b.aux[0]);
        auto lerp = [&](Scalar u, Scalar v) { return (1 - lam) * u + lam * v; };
        SpecialPoint sp;
        sp.kind = kind;
        sp.where = {lerp(a.pt.X, b.pt.X), lerp(a.pt.Y, b.pt.Y), lerp(a.pt.t, b.pt.t), lerp(a.pt.x, b.pt.x)};
        sp.d1 = lerp(a.aux[1], b.aux[1]);
        sp.d2 = lerp(a.aux[2], b.aux[2]);
        sp.degenerate = !(std::abs(sp.d1) >= rep.threshold && std::abs(sp.d2) >= rep.threshold);
        rep.points.push_back(sp);
      }
  };
  folds(aaux, SpecialKind::AlphaFold);
  folds(baux, SpecialKind::BetaFold);

  // crossings of the two level sets, found cell by cell
  std::unordered_map<long long, std::vector<int>> bcell;
  for (int s = 0; s < static_cast<int>(bsegs.size()); ++s) bcell[bsegs[s].cell_i * ny + bsegs[s].cell_j].push_back(s);
  for (const auto& sa : asegs) {
    auto it = bcell.find(sa.cell_i * ny + sa.cell_j);
    if (it == bcell.end()) continue;
    for (int s : it->second) {
      const auto& sb = bsegs[s];
      Scalar r1 = 0, r2 = 0;
      if (!seg_intersect(sa.a.pt, sa.b.pt, sb.a.pt, sb.b.pt, r1, r2)) continue;
      auto lerp = [&](Scalar u, Scalar v) { return (1 - r1) * u + r1 * v; };
      SpecialPoint sp;
      sp.kind = SpecialKind::Crossing;
      sp.where = {lerp(sa.a.pt.X, sa.b.pt.X), lerp(sa.a.pt.Y, sa.b.pt.Y), lerp(sa.a.pt.t, sa.b.pt.t),
                  lerp(sa.a.pt.x, sa.b.pt.x)};
      sp.d1 = lerp(sa.a.aux[0], sa.b.aux[0]);                 // alpha_X
      sp.d2 = (1 - r2) * sb.a.aux[0] + r2 * sb.b.aux[0];       // beta_Y
      sp.degenerate = !(std::abs(sp.d1) >= rep.threshold && std::abs(sp.d2) >= rep.threshold);
      rep.points.push_back(sp);
    }
  }
  return rep;
}

}  // namespace cwave
