#pragma once

#include "cwave/bounds.hpp"
#include "cwave/chart.hpp"
#include "cwave/singularities.hpp"
#include "cwave/slice.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>

namespace cwave {

using Json = nlohmann::ordered_json;

inline constexpr std::uint32_t kChartFormatVersion = 1;

/// {"kind": ..., "coeffs": [...], "u_range": [lo, hi]}
Json as_json(const WaveSpeed& ws);
WaveSpeed speed_from_json(const Json& j);
SpeedKind speed_kind_from_name(const std::string& name);
const char* speed_kind_name(SpeedKind k);

Json as_json(const SingularityReport& r);
Json as_json(const NormSample& s);
Json as_json(const PathLength& p);
Json as_json(const LipschitzTable& t);
Json as_json(const BoundReport& r);
Json as_json(const ChainCheck& c);
Json as_json(const GronwallSeries& g);
Json as_json(const GronwallResult& r);

/// Non-finite numbers become null.
Json number(Scalar v);

/// Columns x,u,ut,ux,R,S,e with 17 significant digits.
void write_slice_csv(std::ostream& os, const SliceSamples& s);
SliceSamples read_slice_csv(std::istream& is);

/// Binary chart dump: magic, format version, JSON header, then X, Y and the seven
/// fields as little-endian float64 (column-major, X index fastest). See docs/chart_format.md.
void write_chart(const std::filesystem::path& file, const CharChart& chart, const Json& meta = Json::object());
CharChart read_chart(const std::filesystem::path& file, Json* header = nullptr);

/// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& file, const Json& j);
Json read_json(const std::filesystem::path& file);

}  // namespace cwave
