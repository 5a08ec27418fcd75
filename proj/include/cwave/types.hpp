#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace cwave {

using Scalar = double;
using Index = Eigen::Index;

/// Node-indexed field on an X-Y grid: entry (i, j) lives at (X_i, Y_j).
using Field = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
/// One-dimensional samples (x-grids, curve samples, traces).
using Samples = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

struct Interval {
  Scalar lo = 0;
  Scalar hi = 0;

  [[nodiscard]] Scalar length() const { return hi - lo; }
  [[nodiscard]] bool contains(Scalar v) const { return v >= lo && v <= hi; }
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the admissible range of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The characteristic or direct solver could not continue.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, Index i = -1, Index j = -1)
      : Error(what), i_(i), j_(j) {}
  [[nodiscard]] Index node_i() const { return i_; }
  [[nodiscard]] Index node_j() const { return j_; }

 private:
  Index i_;
  Index j_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cwave
