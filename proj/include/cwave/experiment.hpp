#pragma once

#include "cwave/io.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cwave {

struct GridConfig {
  Scalar h = 1.0 / 128;
  /// Scale of the dependence margins around the support.
  Scalar margin = 1.2;
  /// Final time of the solve; also bounds every requested time.
  Scalar T = 1;
};

struct MetricConfig {
  int thetas = 8;  ///< theta intervals
  Scalar eps = 1e-4;
  Scalar delta = 0.1;
  std::vector<Scalar> taus{0};
};

/// One experiment, resolved from a JSON document. Relative file names are taken
/// against base_dir.
struct ExperimentConfig {
  std::string kind;
  Json speed;
  Json datum;
  Json path;
  Json pairs;
  GridConfig grid;
  MetricConfig metric;
  std::vector<Scalar> slice_times;
  std::optional<Scalar> frozen_C;
  std::optional<Scalar> frozen_C_upper, frozen_delta0;
  std::uint64_t seed = 1;
  int threads = 1;
  std::filesystem::path out = "out";
  std::filesystem::path base_dir = ".";

  /// The full configuration with defaults filled in; parse_config of it gives back the same config.
  [[nodiscard]] Json resolved() const;
};

inline const std::vector<std::string> kExperimentKinds{"solve", "slice", "singularities", "metric", "lipschitz",
                                                       "bounds"};

/// Throws ConfigError on unknown kinds, missing sections or non-positive parameters.
ExperimentConfig parse_config(const Json& j, const std::filesystem::path& base_dir = ".");

InitialDatum datum_from_json(const Json& j, const WaveSpeed& ws, const std::filesystem::path& base_dir = ".");
PathOfData path_from_json(const Json& j, const WaveSpeed& ws, int M, const std::filesystem::path& base_dir = ".");
std::vector<Bump> bumps_from_json(const Json& j);

/// Chart grid holding the supports of all data plus the dependence margins up to T.
ChartDomain domain_for(const std::vector<InitialDatum>& data, const WaveSpeed& ws, const GridConfig& g);

/// Smooth random bump data with energy at most cap (amplitudes are scaled down when needed).
InitialDatum random_datum(std::uint64_t seed, const WaveSpeed& ws, Scalar cap);
/// count pairs (A, B) of random data, each of energy at most cap.
std::vector<std::pair<InitialDatum, InitialDatum>> random_pairs(std::uint64_t seed, int count, const WaveSpeed& ws,
                                                                Scalar cap);

struct RunResult {
  std::vector<std::filesystem::path> files;
};

/// Run the experiment and write its artifacts and manifest.json into cfg.out.
RunResult run_experiment(const ExperimentConfig& cfg);

/// FNV-1a 64 of a file, as 16 hex digits.
std::string file_digest(const std::filesystem::path& file);

}  // namespace cwave
