#pragma once

#include "cwave/chart.hpp"
#include "cwave/datum.hpp"
#include "cwave/oracle.hpp"
#include "cwave/slice.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cwave {

/// Weights of the six norm components: (1, d, d^3, d, d^2, d^3).
struct NormWeights {
  Scalar delta = 0.1;
  [[nodiscard]] std::array<Scalar, 6> kappa() const;
};

/// A one-parameter family of initial data, theta in [0, 1].
class PathOfData {
 public:
  using Family = std::function<InitialDatum(Scalar)>;

  PathOfData(Family family, std::vector<Scalar> thetas, Scalar energy_cap, std::string label = "path");

  [[nodiscard]] InitialDatum at(Scalar theta) const { return family_(theta); }
  [[nodiscard]] const std::vector<Scalar>& thetas() const { return thetas_; }
  [[nodiscard]] Scalar energy_cap() const { return cap_; }
  [[nodiscard]] const std::string& label() const { return label_; }
  /// Same family on a different theta grid.
  [[nodiscard]] PathOfData resampled(std::vector<Scalar> thetas) const;

  /// Throws DomainError when a sample exceeds the energy cap.
  void check_energy(const WaveSpeed& ws) const;

 private:
  Family family_;
  std::vector<Scalar> thetas_;
  Scalar cap_;
  std::string label_;
};

/// M + 1 equally spaced samples of [0, 1].
std::vector<Scalar> uniform_thetas(int M);

PathOfData constant_path(const InitialDatum& d, int M, Scalar energy_cap);
/// u^theta(0, x) = u0(x - shift theta), same for u1.
PathOfData translation_path(const InitialDatum& d, Scalar shift, int M, Scalar energy_cap);
/// u1^theta = u1 + theta g.
PathOfData vertical_velocity_path(const InitialDatum& d, const std::vector<Bump>& g, int M, Scalar energy_cap);
/// Bumps scaled by a0 + theta (a1 - a0).
PathOfData amplitude_path(const std::vector<Bump>& u0, const std::vector<Bump>& u1, VelocityMode mode,
                          const WaveSpeed& ws, Scalar a0, Scalar a1, int M, Scalar energy_cap);

/// Infinitesimal relabeling X -> X + eps xi(X), Y -> Y + eps eta(Y) applied along the path.
/// On the initial line it adds the shifts w = xi(x), z = -eta(-x).
struct Gauge {
  std::function<Scalar(Scalar)> xi, dxi, eta, deta;
  bool zero = true;

  static Gauge none();
  static Gauge affine(Scalar xi0, Scalar xi1, Scalar eta0, Scalar eta1);
  /// xi = 1, eta = -1: unit shifts w = z = 1.
  static Gauge translation();
};

struct TangentOptions {
  Scalar eps = 1e-4;
  Gauge gauge = Gauge::none();
  SolveOptions solve{};
  /// Also difference with eps/2 and record the gap.
  bool richardson = false;
};

/// First-order theta-perturbations of a chart at fixed (X, Y).
struct TangentField {
  Scalar theta = 0;
  Scalar eps = 0;
  CharChart base;
  Field T, X, U, A, B, P, Q;
  /// max |D_eps - D_eps/2| / max |D_eps| over the seven fields (0 when not computed).
  Scalar richardson_gap = 0;
};

/// Charts for theta and its eps-neighbours on one grid (same canonical labeling of
/// the initial line), central differences of all seven fields, plus the gauge terms.
/// One-sided second-order differences are used at theta = 0 and theta = 1.
TangentField tangent_by_theta(const PathOfData& path, Scalar theta, const WaveSpeed& ws, const ChartDomain& dom,
                              const TangentOptions& opts = {});

/// Tangent fields sampled on a level curve, with the derived shifts and vertical parts.
struct CurveTangent {
  Samples T, X, U, A, B, P, Q;
  Samples w, z, rt, st;
  /// v + R w/(2c) - S z/(2c), which equals U.
  Samples vcomb;
};

/// tan(alpha/2), tan(beta/2) are clipped at `clip` (default 1/h) where they enter sec^2 or tan^2.
CurveTangent shifts_and_vertical(const TangentField& tf, const LevelCurve& c, Scalar clip = 0);

struct Integrands {
  std::array<Samples, 6> J, H;
};
Integrands integrands(const LevelCurve& c, const CurveTangent& ct, const WaveSpeed& ws);

struct CurveWeights {
  Samples minus, plus;
};
/// W-(x) = 1 + int_{-inf}^x S^2, W+(x) = 1 + int_x^inf R^2 along the curve.
CurveWeights weights_along_curve(const LevelCurve& c);

/// a = int |c'| |R^2 S - R S^2| / (2c) dx along the curve.
Scalar interaction_rate(const LevelCurve& c, const WaveSpeed& ws);

struct NormValue {
  Scalar total = 0;
  std::array<Scalar, 6> I{};
};

NormValue tangent_norm(const LevelCurve& c, const Integrands& in, const CurveWeights& W, const NormWeights& nw);

/// Norm, interaction rate and energy at one time.
struct NormSample {
  Scalar tau = 0;
  NormValue norm;
  Scalar a = 0;
  Scalar energy = 0;
};
NormSample norm_at(const TangentField& tf, Scalar tau, const NormWeights& nw, const CurveOptions& copts = {});

/// Weights and interaction rate of a physical state on its uniform grid.
struct PhysicalWeights {
  Samples minus, plus;
  Scalar a = 0;
};
PhysicalWeights physical_weights(const DirectState& s, const WaveSpeed& ws);

/// The norm in physical variables, from shifts w, z, vertical parts r~, s~ and v on a
/// uniform grid. Integration runs over `range` when given (weights still use the full grid).
NormValue main_form_norm(const PhysicalTangentFrame& f, const WaveSpeed& ws, const NormWeights& nw,
                         std::optional<Interval> range = std::nullopt);

struct PathLengthOptions {
  TangentOptions tangent{};
  NormWeights weights{};
  CurveOptions curve{};
};

struct PathLength {
  Scalar length = 0;
  std::vector<Scalar> thetas;
  std::vector<NormSample> samples;
};

/// Trapezoid rule in theta of the norm at time tau.
PathLength path_length(const PathOfData& path, Scalar tau, const WaveSpeed& ws, const ChartDomain& dom,
                       const PathLengthOptions& opts = {});

/// Lengths at several times from one set of charts per theta.
std::vector<PathLength> path_lengths(const PathOfData& path, const std::vector<Scalar>& taus, const WaveSpeed& ws,
                                     const ChartDomain& dom, const PathLengthOptions& opts = {});

struct RelabelingResult {
  Scalar best = 0;
  std::size_t best_index = 0;
  std::vector<Scalar> lengths;
};
/// Length under each gauge of the family; the smallest is an upper bound for the
/// infimum over relabelings.
RelabelingResult optimize_relabeling(const PathOfData& path, const std::vector<Gauge>& family, Scalar tau,
                                     const WaveSpeed& ws, const ChartDomain& dom, const PathLengthOptions& opts = {});
/// Gauges xi = (s - 1) X for each slope s.
std::vector<Gauge> slope_family(const std::vector<Scalar>& slopes);

}  // namespace cwave
