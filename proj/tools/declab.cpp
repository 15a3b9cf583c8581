#include <iostream>
#include <map>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "declab/commands.hpp"
#include "declab/errors.hpp"

using namespace declab;

namespace {

struct Sub {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;  // config key -> flag text
  std::string config_path, out_path;
};

// Flag text stays a string; the command layer parses lists, ranges and rationals.
void flag(Sub& s, const std::string& name, const std::string& key, const std::string& help) {
  s.app->add_option_function<std::string>(
      "--" + name, [&s, key](const std::string& v) { s.values[key] = v; }, help);
}

int fail(int code, const std::string& kind, const std::string& what) {
  std::cout << json{{"error", kind}, {"message", what}, {"exit_code", code}}.dump() << "\n";
  std::cerr << "declab: " << what << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for decoupling inequalities and lattice-point moments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  const std::map<std::string, std::string> help{
      {"bounds", "tabulate exponent profiles and log-domain bounds"},
      {"experiment", "empirical decoupling ratios over a density family"},
      {"bilinear", "empirical bilinear ratios"},
      {"ball-inflation", "ball-inflation residual constants"},
      {"circle-points", "enumerate lattice points on x^2 + y^2 = R"},
      {"s6", "count sixth-order additive correlations"},
      {"expsum", "normalised L^p norms of lattice exponential sums"},
      {"ladder", "circle parameter ladder and its bound"}};

  std::map<std::string, Sub> subs;
  for (const auto& name : command_names()) {
    Sub& s = subs[name];
    s.app = app.add_subcommand(name, help.at(name));
    s.app->add_option("--config", s.config_path, "JSON config file (flags override it)");
    s.app->add_option("--out", s.out_path, "output path, written atomically (default stdout)");
    flag(s, "format", "format", "json, csv or plot-data");
    const json defaults = default_config(name);
    for (auto it = defaults.begin(); it != defaults.end(); ++it) {
      const std::string key = it.key();
      if (key == "format") continue;
      std::string fname = key;
      for (char& c : fname)
        if (c == '_') c = '-';
      flag(s, fname, key, "default " + (it.value().is_string() ? it.value().get<std::string>() : it.value().dump()));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  for (auto& [name, s] : subs) {
    if (!s.app->parsed()) continue;
    try {
      json file;
      if (!s.config_path.empty()) file = json::parse(read_file(s.config_path));
      json flags = json::object();
      for (const auto& [k, v] : s.values) flags[k] = v;
      json cfg = merge_config(name, file, flags);
      const CommandResult res = run_command(name, cfg);
      if (s.out_path.empty()) {
        std::cout << res.content;
      } else {
        atomic_write(s.out_path, res.content);
      }
      if (res.exit_code != kExitOk) std::cerr << "declab: cross-check failed\n";
      return res.exit_code;
    } catch (const ResourceGuard& e) {
      return fail(kExitResource, "resource", e.what());
    } catch (const std::overflow_error& e) {
      return fail(kExitResource, "resource", e.what());
    } catch (const NumericalError& e) {
      return fail(kExitNumerical, "numerical", e.what());
    } catch (const json::exception& e) {
      return fail(kExitUsage, "usage", e.what());
    } catch (const std::logic_error& e) {
      return fail(kExitUsage, "usage", e.what());
    }
  }
  return kExitUsage;
}
