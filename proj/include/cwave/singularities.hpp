#pragma once

#include "cwave/chart.hpp"

#include <optional>
#include <vector>

namespace cwave {

struct LabelPoint {
  Scalar X = 0, Y = 0;
  Scalar t = 0, x = 0;
};
using Polyline = std::vector<LabelPoint>;

enum class SpecialKind {
  AlphaFold,  ///< alpha = pi and alpha_X = 0
  BetaFold,   ///< beta = pi and beta_Y = 0
  Crossing,   ///< alpha = pi and beta = pi
};

/// A classified point with its two transversality discriminants:
/// (alpha_Y, alpha_XX), (beta_X, beta_YY) or (alpha_X, beta_Y).
struct SpecialPoint {
  SpecialKind kind = SpecialKind::AlphaFold;
  LabelPoint where;
  Scalar d1 = 0, d2 = 0;
  bool degenerate = false;
};

/// Inclusive node index box.
struct IndexBox {
  Index i0 = 0, i1 = 0, j0 = 0, j1 = 0;
};

struct SingularityReport {
  std::vector<Polyline> alpha_level;
  std::vector<Polyline> beta_level;
  std::vector<SpecialPoint> points;
  /// Smallest t on either level set; +inf when there is none.
  Scalar first_time = std::numeric_limits<Scalar>::infinity();
  /// Nodes within the reporting band |alpha - pi| or |beta - pi| < 10 h (mod 2 pi).
  Index near_nodes = 0;
  Scalar threshold = 0;

  [[nodiscard]] bool empty() const { return alpha_level.empty() && beta_level.empty(); }
};

/// Extract {alpha = pi} and {beta = pi} (mod 2 pi) by marching squares and
/// classify fold and crossing points.
SingularityReport detect_singularities(const CharChart& chart, std::optional<IndexBox> box = std::nullopt);

/// Angle reduced to (-pi, pi].
Scalar wrap_angle(Scalar a);

}  // namespace cwave
