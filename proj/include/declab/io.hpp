#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "declab/bounds.hpp"
#include "declab/circle_lattice.hpp"
#include "declab/correlations.hpp"
#include "declab/decoupling_lab.hpp"
#include "declab/extension_ops.hpp"

namespace declab {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.3.0";

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

// {version, config_hash, config}; the hash covers the compact dump of the config.
json provenance(const json& config);

// temp file in the same directory, then rename
void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Shortest round-trip text for a double.
std::string format_double(double v);

void to_json(json& j, const EnvelopeRef& e);
void from_json(const json& j, EnvelopeRef& e);
void to_json(json& j, const GridDiagnostics& g);
void from_json(const json& j, GridDiagnostics& g);
void to_json(json& j, const RatioReport& r);
void from_json(const json& j, RatioReport& r);
void to_json(json& j, const ReductionReport& r);
void to_json(json& j, const LadderParams& l);
void to_json(json& j, const LatticeCircle& lc);
void from_json(const json& j, LatticeCircle& lc);
void to_json(json& j, const CorrelationResult& c);
void to_json(json& j, const GridSpec& g);
void from_json(const json& j, GridSpec& g);

// Flat layout: origin x, origin y, hx, hy (f64), nx, ny (i64), then interleaved re/im f64, row-major. Little-endian.
std::string field_to_binary(const SampledField& f);
SampledField field_from_binary(const std::string& bytes);
json field_to_json(const SampledField& f);  // small grids only

}  // namespace declab
