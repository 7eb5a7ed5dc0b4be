#include "sgwalk/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using sg::cli::RunConfig;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sgwalk_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int run_quiet(const RunConfig& c, std::string* error = nullptr) {
  std::ostringstream log, err;
  const int status = sg::cli::run(c, log, err);
  if (error) *error = err.str();
  return status;
}

int run_argv(std::vector<std::string> args) {
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return sg::cli::main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("green writes a json document with the reference value") {
  RunConfig c;
  c.subcommand = "green";
  c.depth = 5;
  c.output_dir = fresh_dir("green").string();
  REQUIRE(run_quiet(c) == 0);
  const auto doc = nlohmann::json::parse(slurp(fs::path(c.output_dir) / "green.json"));
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["tool"]["name"] == "sgwalk");
  CHECK(doc["config"]["depth"] == 5);
  CHECK(doc["references"]["G(o,o)"].get<double>() == doctest::Approx(4.0 / 3.0));
  CHECK(doc["results"]["G_N"].get<double>() == doctest::Approx(doc["references"]["G_N(o,o)_killed_chain"].get<double>()));
  CHECK(doc["results"]["extrapolated"].get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-3));
  CHECK(fs::exists(fs::path(c.output_dir) / "green.csv"));
}

TEST_CASE("invalid arguments exit with status 2 and write nothing") {
  RunConfig c;
  c.subcommand = "walk";
  c.seed = 1;
  c.samples = 0;
  c.output_dir = fresh_dir("bad_walk").string();
  std::string err;
  CHECK(run_quiet(c, &err) == 2);
  CHECK(err.find("--samples must be positive") != std::string::npos);
  CHECK_FALSE(fs::exists(c.output_dir));

  RunConfig s;
  s.subcommand = "separate";
  s.params.lambda = 0.15;
  s.params.gamma = 0.1;
  s.output_dir = fresh_dir("bad_separate").string();
  CHECK(run_quiet(s, &err) == 2);
  CHECK(err == "error: λ must lie in (1/5,1/3) for subcommand separate\n");
  CHECK_FALSE(fs::exists(s.output_dir));

  RunConfig l;
  l.subcommand = "lifetime";
  l.output_dir = fresh_dir("no_seed").string();
  CHECK(run_quiet(l, &err) == 2);
  CHECK(err.find("--seed is required") != std::string::npos);

  RunConfig p;
  p.subcommand = "green";
  p.x = "013";
  CHECK(run_quiet(p, &err) == 2);

  RunConfig g;
  g.subcommand = "green";
  g.params.gamma = 0.5;
  CHECK(run_quiet(g, &err) == 2);
  CHECK(err.find("gamma") != std::string::npos);
}

TEST_CASE("seeded runs are reproducible") {
  RunConfig c;
  c.subcommand = "walk";
  c.seed = 42;
  c.samples = 300;
  c.level = 1;
  c.output_dir = fresh_dir("walk_a").string();
  REQUIRE(run_quiet(c) == 0);
  RunConfig again = c;
  again.output_dir = fresh_dir("walk_b").string();
  REQUIRE(run_quiet(again) == 0);
  CHECK(slurp(fs::path(c.output_dir) / "walk.json") == slurp(fs::path(again.output_dir) / "walk.json"));
  CHECK(slurp(fs::path(c.output_dir) / "walk.csv") == slurp(fs::path(again.output_dir) / "walk.csv"));

  RunConfig threaded = c;
  threaded.workers = 3;
  threaded.output_dir = fresh_dir("walk_c").string();
  REQUIRE(run_quiet(threaded) == 0);
  CHECK(slurp(fs::path(c.output_dir) / "walk.csv") == slurp(fs::path(threaded.output_dir) / "walk.csv"));
  const auto a = nlohmann::json::parse(slurp(fs::path(c.output_dir) / "walk.json"));
  const auto b = nlohmann::json::parse(slurp(fs::path(threaded.output_dir) / "walk.json"));
  CHECK(a["results"] == b["results"]);

  RunConfig other = c;
  other.seed = 43;
  other.output_dir = fresh_dir("walk_d").string();
  REQUIRE(run_quiet(other) == 0);
  CHECK(slurp(fs::path(c.output_dir) / "walk.csv") != slurp(fs::path(other.output_dir) / "walk.csv"));
}

TEST_CASE("command line parsing, config files and the environment") {
  const fs::path dir = fresh_dir("argv");
  CHECK(run_argv({"sgwalk", "--depth", "4", "--output-dir", dir.string(), "passage"}) == 0);
  const auto doc = nlohmann::json::parse(slurp(dir / "passage.json"));
  CHECK(doc["config"]["depth"] == 4);
  CHECK(doc["config"]["subcommand"] == "passage");

  const fs::path cfg_dir = fresh_dir("config");
  fs::create_directories(cfg_dir);
  {
    std::ofstream cfg(cfg_dir / "run.ini");
    cfg << "depth=4\nlambda=0.3\ngamma=0.1\n";
  }
  CHECK(run_argv({"sgwalk", "--config", (cfg_dir / "run.ini").string(), "--lambda", "0.28", "--output-dir",
                  cfg_dir.string(), "green"}) == 0);
  const auto g = nlohmann::json::parse(slurp(cfg_dir / "green.json"));
  CHECK(g["config"]["depth"] == 4);
  CHECK(g["config"]["lambda"].get<double>() == 0.28);
  CHECK(g["config"]["gamma"].get<double>() == 0.1);

  const fs::path env_dir = fresh_dir("env");
  ::setenv("SGWALK_OUTPUT_DIR", env_dir.string().c_str(), 1);
  CHECK(run_argv({"sgwalk", "--depth", "3", "build-graph"}) == 0);
  ::unsetenv("SGWALK_OUTPUT_DIR");
  CHECK(fs::exists(env_dir / "build-graph.json"));
  CHECK(fs::exists(env_dir / "build-graph.csv"));

  CHECK(run_argv({"sgwalk", "--depth", "3", "--output-dir", fresh_dir("noseed").string(), "walk"}) == 2);
  CHECK(run_argv({"sgwalk", "--depth", "3", "frobnicate"}) != 0);
}

TEST_CASE("every subcommand runs at small size") {
  for (const std::string& sub : sg::cli::kSubcommands) {
    CAPTURE(sub);
    RunConfig c;
    c.subcommand = sub;
    c.depth = sub == "scan" ? 7 : (sub == "martin" ? 6 : 5);
    c.seed = 7;
    c.samples = 50;
    c.count = 3;
    c.level = sub == "hitmeasure" ? 2 : (sub == "walk" || sub == "lifetime" ? 1 : 2);
    c.steps = 5;
    c.output_dir = fresh_dir("all_" + sub).string();
    std::string err;
    CHECK(run_quiet(c, &err) == 0);
    CHECK(err.empty());
    CHECK(fs::exists(fs::path(c.output_dir) / (sub + ".json")));
  }
}
