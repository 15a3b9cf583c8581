#pragma once

#include <string>
#include <vector>

#include "declab/io.hpp"

namespace declab {

// Exit codes shared by the CLI and its tests.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitResource = 4;

enum class OutputFormat { json, csv, plot };
OutputFormat output_format_from_string(const std::string& s);

struct CommandResult {
  std::string content;
  int exit_code = kExitOk;
};

const std::vector<std::string>& command_names();
json default_config(const std::string& command);
// defaults <- file <- flags (each a JSON object; later ones win)
json merge_config(const std::string& command, const json& file, const json& flags);

// Values accept JSON numbers/arrays or strings: "a,b,c", "lo:hi:step" (inclusive), "lo..hi" for integers.
std::vector<double> parse_real_list(const json& v);
std::vector<std::int64_t> parse_integer_list(const json& v);
// "2^-64", "1/256", "0.01"
Scale parse_scale(const std::string& s);
// "const", "zero", "atoms", "random:K"; comma-separated. Random draws use seeds seed, seed+1, ...
std::vector<DensityFunction> parse_family(const std::string& spec, const Rational& delta, std::uint64_t seed);
CurveSpec parse_curve(const std::string& spec);  // parabola[:a], circle:tau, scaled-circle:tau0

// Each run_* takes the merged config and returns the rendered output. Scientific envelopes are reported, never
// enforced; only integrity failures (s6 cross-check mismatch) return a nonzero exit.
CommandResult run_bounds_table(const json& cfg);
CommandResult run_experiment(const json& cfg);
CommandResult run_bilinear(const json& cfg);
CommandResult run_ball_inflation(const json& cfg);
CommandResult run_circle_points(const json& cfg);
CommandResult run_s6(const json& cfg);
CommandResult run_expsum(const json& cfg);
CommandResult run_ladder(const json& cfg);

CommandResult run_command(const std::string& command, const json& cfg);

}  // namespace declab
