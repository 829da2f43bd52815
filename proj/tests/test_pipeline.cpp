#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hypgeo/crossings.hpp"
#include "hypgeo/enumerator.hpp"
#include "hypgeo/errors.hpp"
#include "hypgeo/pipeline.hpp"

using namespace hypgeo;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string err;
};

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hypgeo_pipeline" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Run cli(const fs::path& dir, const std::string& args) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = "cd '" + dir.string() + "' && '" HYPGEO_CLI "' " + args + " > stdout.txt 2> '" +
                          err.string() + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

RunConfig config_in(const fs::path& dir, std::vector<double> T) {
  RunConfig c;
  c.T = std::move(T);
  c.cache_dir = dir / "cache";
  c.out_dir = dir / "out";
  validate_config(c);
  return c;
}

void save_toy(const RunConfig& c, const std::vector<std::string>& words) {
  const SurfaceSpec t = build_surface(c.surface);
  std::vector<ClosedGeodesicClass> classes;
  for (const auto& w : words) classes.push_back(make_class(t, w, c.T.at(0)));
  CacheHeader h;
  h.version = cache_version;
  h.surface = c.surface;
  h.profile = c.profile;
  h.T = c.T.at(0);
  h.include_powers = c.include_powers;
  cache_save(classes, h, ArtifactNames{c}.cache(c.T.at(0)));
}

}  // namespace

TEST_CASE("config validation") {
  const fs::path dir = fresh_dir("config");
  RunConfig c;
  c.cache_dir = dir / "cache";
  c.out_dir = dir / "out";
  c.T = {8, 6};
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c.T = {6, 8};
  c.cells = 24;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c.cells = 25;
  c.surface = "sphere";
  CHECK_THROWS_AS(validate_config(c), ConfigError);
  c.surface = "punctured_torus";
  CHECK_NOTHROW(validate_config(c));
  CHECK(c.profile == tolerance_profile());

  {
    std::ofstream os(dir / "bad.json");
    os << R"({"surface": "punctured_torus", "colour": 3})";
  }
  CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
  {
    std::ofstream os(dir / "good.json");
    os << R"({"T": [4, 5], "cells": 16, "core_eps": 0.3})";
  }
  const RunConfig g = load_config(dir / "good.json");
  CHECK(g.T == std::vector<double>{4, 5});
  CHECK(g.cells == 16);
  RunConfig round;
  apply_json(round, to_json(g));
  CHECK(to_json(round) == to_json(g));
}

TEST_CASE("artifact names carry the profile") {
  RunConfig a;
  a.profile = "aaaaaaaaaaaa";
  RunConfig b = a;
  b.profile = "bbbbbbbbbbbb";
  CHECK(ArtifactNames{a}.report() != ArtifactNames{b}.report());
  CHECK(ArtifactNames{a}.cache(8).filename().string().find("aaaaaaaaaaaa") != std::string::npos);
  CHECK(ArtifactNames{a}.cache(8).filename().string().find("T8") != std::string::npos);
}

TEST_CASE("toy cache gives one crossing row") {
  const fs::path dir = fresh_dir("toy");
  const RunConfig c = config_in(dir, {3.0});
  save_toy(c, {"a", "b"});
  cmd_intersect(c);
  const auto records = read_crossings_csv(ArtifactNames{c}.crossings(3.0));
  CHECK(records.size() == 1);
  const auto totals = read_key_values(ArtifactNames{c}.totals(3.0));
  CHECK(totals.at("geometric_crossings") == "1");
  CHECK(totals.at("ordered_total") == "2");
}

TEST_CASE("empty cache gives an empty table") {
  const fs::path dir = fresh_dir("empty");
  const RunConfig c = config_in(dir, {3.0});
  save_toy(c, {});
  const Run r = cli(dir, "intersect --T 3 --cache-dir cache --out-dir out");
  CHECK(r.code == 0);
  const std::string csv = slurp(ArtifactNames{c}.crossings(3.0));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);
}

TEST_CASE("exit codes") {
  const fs::path dir = fresh_dir("codes");
  Run r = cli(dir, "enumerate --surface sphere");
  CHECK(r.code == 2);
  CHECK(r.err.find("punctured_torus") != std::string::npos);
  CHECK(r.err.find("genus2_octagon") != std::string::npos);
  CHECK(r.err.rfind("error: code=2", 0) == 0);

  CHECK(cli(dir, "enumerate --T 5,4").code == 2);
  CHECK(cli(dir, "enumerate --cells 7").code == 2);
  CHECK(cli(dir, "frobnicate").code == 2);

  r = cli(dir, "intersect --T 4");
  CHECK(r.code == 3);
  CHECK(r.err.find("classes_punctured_torus_T4") != std::string::npos);

  {
    std::ofstream os(dir / "cfg.json");
    os << "{ not json";
  }
  CHECK(cli(dir, "all --config cfg.json").code == 2);
}

TEST_CASE("stages, cache hits and missing inputs") {
  const fs::path dir = fresh_dir("stages");
  const std::string flags = " --T 4,5,6 --cache-dir cache --out-dir out";
  REQUIRE(cli(dir, "all" + flags).code == 0);
  Run again = cli(dir, "enumerate" + flags);
  CHECK(again.code == 0);
  CHECK(again.err.find("cache hit") != std::string::npos);

  const RunConfig c = config_in(dir, {4, 5, 6});
  const fs::path report = dir / ArtifactNames{c}.report();
  const std::string first = slurp(report);
  const auto kv = read_key_values(report);
  for (const char* T : {"T4", "T5", "T6"}) {
    CHECK(kv.count(std::string("spatial_tv.") + T));
    CHECK(kv.count(std::string("ordered_total.") + T));
    CHECK(kv.count(std::string("excursion_slope_2_20.") + T));
  }
  CHECK(kv.count("fixture_crossing_slope"));
  CHECK(kv.count("liouville_box_invariance_error"));

  REQUIRE(cli(dir, "all --force" + flags).code == 0);
  CHECK(slurp(report) == first);

  fs::remove(dir / ArtifactNames{c}.crossings(5));
  const Run missing = cli(dir, "report --force" + flags);
  CHECK(missing.code == 3);
  CHECK(missing.err.find("crossings_punctured_torus_T5") != std::string::npos);
}

TEST_CASE("octagon skips cusp stages") {
  const fs::path dir = fresh_dir("octagon");
  const Run r = cli(dir, "all --surface genus2_octagon --T 3,3.5,4 --cache-dir cache --out-dir out");
  CHECK(r.code == 0);
  RunConfig c = config_in(dir, {3, 3.5, 4});
  c.surface = "genus2_octagon";
  const auto kv = read_key_values(dir / ArtifactNames{c}.report());
  CHECK(kv.count("classes.T4"));
  CHECK_FALSE(kv.count("excursion_c_fit.T4"));
}
