// hypgeo: enumerate closed geodesics, count crossings and report the
// equidistribution statistics for a T-sweep.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <functional>
#include <iostream>
#include <string>

#include "hypgeo/errors.hpp"
#include "hypgeo/pipeline.hpp"
#include "hypgeo/surface.hpp"

namespace {

std::string escape(std::string s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    if (ch == '\n') {
      out += ' ';
      continue;
    }
    out += ch;
  }
  return out;
}

int fail(int code, const char* kind, const std::string& message) {
  std::cerr << fmt::format("error: code={} kind={} message=\"{}\"", code, kind, escape(message)) << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("hypgeo"));
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Closed geodesics, their crossings and equidistribution statistics"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_file;
  std::string surface;
  std::vector<std::string> t_values;
  int cells = 0;
  double core_eps = 0.0;
  std::uint64_t seed = 0;
  std::string cache_dir;
  std::string out_dir;
  std::string include_powers;
  bool force = false;
  bool verbose = false;

  app.add_option("--config", config_file, "JSON config file; flags override it");
  app.add_option("--surface", surface, "punctured_torus or genus2_octagon");
  app.add_option("--T", t_values, "length cutoffs, e.g. --T 6,8,9,10")->delimiter(',');
  app.add_option("--cells", cells, "number of equal-area core cells (a square)");
  app.add_option("--core-eps", core_eps, "horoball parameter of the compact core");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--cache-dir", cache_dir, "class cache directory");
  app.add_option("--out-dir", out_dir, "output directory");
  app.add_option("--include-powers", include_powers, "count non-primitive powers (true/false)")
      ->check(CLI::IsMember({"true", "false", "1", "0"}));
  app.add_flag("--force", force, "recompute existing outputs");
  app.add_flag("-v,--verbose", verbose, "debug logging");

  const std::vector<std::pair<std::string, std::function<void(const hypgeo::RunConfig&)>>> commands{
      {"enumerate", hypgeo::cmd_enumerate},
      {"intersect", hypgeo::cmd_intersect},
      {"excursions", hypgeo::cmd_excursions},
      {"liouville-check", hypgeo::cmd_liouville_check},
      {"report", hypgeo::cmd_report},
      {"all", hypgeo::cmd_all}};
  for (const auto& [name, fn] : commands) app.add_subcommand(name, "run the " + name + " stage");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, "config", e.what());
  }
  if (verbose) spdlog::set_level(spdlog::level::debug);

  try {
    hypgeo::RunConfig config;
    if (!config_file.empty()) config = hypgeo::load_config(config_file);
    if (!surface.empty()) {
      const auto& names = hypgeo::surface_names();
      if (std::find(names.begin(), names.end(), surface) == names.end()) {
        std::string valid;
        for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
        throw hypgeo::ConfigError("unknown surface '" + surface + "'; valid options: " + valid);
      }
      config.surface = surface;
    }
    if (!t_values.empty()) {
      config.T.clear();
      for (const auto& t : t_values) {
        try {
          std::size_t used = 0;
          config.T.push_back(std::stod(t, &used));
          if (used != t.size()) throw std::invalid_argument(t);
        } catch (const std::exception&) {
          throw hypgeo::ConfigError("bad T value '" + t + "'");
        }
      }
    }
    if (app.count("--cells")) config.cells = cells;
    if (app.count("--core-eps")) config.core_eps = core_eps;
    if (app.count("--seed")) config.seed = seed;
    if (!cache_dir.empty()) config.cache_dir = cache_dir;
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (!include_powers.empty()) config.include_powers = include_powers == "true" || include_powers == "1";
    config.force = force;
    hypgeo::validate_config(config);

    for (const auto& [name, fn] : commands) {
      if (app.got_subcommand(name)) fn(config);
    }
  } catch (const hypgeo::ConfigError& e) {
    return fail(2, "config", e.what());
  } catch (const hypgeo::MissingArtifactError& e) {
    return fail(3, "missing_artifact", e.what());
  } catch (const hypgeo::CacheError& e) {
    return fail(3, "cache", e.what());
  } catch (const hypgeo::NumericalInstabilityError& e) {
    return fail(4, "numerical_instability", e.what());
  } catch (const hypgeo::ResourceError& e) {
    return fail(1, "resource", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
  return 0;
}
