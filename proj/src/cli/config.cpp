#include "sgwalk/cli.hpp"

#include "sgwalk/address.hpp"
#include "sgwalk/parallel.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <stdexcept>

namespace sg::cli {

const std::vector<std::string> kSubcommands = {"build-graph", "green",  "passage", "hitmeasure", "martin",
                                               "walk",        "lifetime", "separate", "energy",   "quad",
                                               "naim",        "trace-check", "scan"};

namespace {

bool needs_seed(const std::string& sub) {
  return sub == "walk" || sub == "lifetime" || sub == "trace-check" || sub == "martin";
}

void check_word(const std::string& text, const char* flag) {
  if (text == "o") return;
  try {
    (void)Word::parse(text);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument(std::string(flag) + " must be a word over {0,1,2} (got \"" + text + "\")");
  }
}

}  // namespace

void validate(const RunConfig& c) {
  if (std::find(kSubcommands.begin(), kSubcommands.end(), c.subcommand) == kSubcommands.end())
    throw std::invalid_argument("unknown subcommand \"" + c.subcommand + "\"");
  sg::validate(c.params);
  if (!(c.a > 0.0)) throw std::invalid_argument("a must be positive");
  if (c.depth < 1 || c.depth > 19) throw std::invalid_argument("depth must lie in [1,19]");
  if (c.workers < 1) throw std::invalid_argument("workers must be at least 1");
  if (needs_seed(c.subcommand) && !c.seed)
    throw std::invalid_argument("--seed is required for subcommand " + c.subcommand);
  check_word(c.x, "--x");
  check_word(c.y, "--y");
  check_word(c.p, "--p");
  check_word(c.q, "--q");

  const std::string& s = c.subcommand;
  if (s == "green" && c.depth + 2 > 19) throw std::invalid_argument("green needs depth <= 17 (it also solves at N+1, N+2)");
  if ((s == "walk" || s == "lifetime") && c.samples == 0)
    throw std::invalid_argument("--samples must be positive for subcommand " + s);
  if ((s == "walk" || s == "lifetime") && (c.level < 0 || c.level > 30))
    throw std::invalid_argument("--level must lie in [0,30] for subcommand " + s);
  if (s == "separate" && !in_regular_regime(c.params))
    throw std::invalid_argument("λ must lie in (1/5,1/3) for subcommand separate");
  if (s == "trace-check" && !in_regular_regime(c.params))
    throw std::invalid_argument("λ must lie in (1/5,1/3) for subcommand trace-check");
  if (s == "hitmeasure" && (c.level < 0 || c.level > c.depth - 3))
    throw std::invalid_argument("--level must satisfy 0 <= L <= depth-3 for subcommand hitmeasure");
  if (s == "martin" && c.depth < 5) throw std::invalid_argument("martin needs depth >= 5");
  if (s == "martin" && c.count == 0) throw std::invalid_argument("--count must be positive for subcommand martin");
  if ((s == "naim" || s == "trace-check") && (c.level < 1 || c.level > std::min(8, c.depth)))
    throw std::invalid_argument("--level must lie in [1, min(8, depth)] for subcommand " + s);
  if (s == "quad" && (c.level < 1 || c.level > 8)) throw std::invalid_argument("--level must lie in [1,8] for subcommand quad");
  if (s == "energy" && c.function != "separating" && c.function != "coordinate" && c.function != "indicator" &&
      c.function != "harmonic")
    throw std::invalid_argument("--function must be one of separating, coordinate, indicator, harmonic");
  if (s == "energy" && c.function == "harmonic" && (c.level < 0 || c.level > c.depth))
    throw std::invalid_argument("--level must lie in [0, depth] for --function harmonic");
  if (s == "scan") {
    if (c.depth < 7) throw std::invalid_argument("scan needs depth >= 7");
    if (c.steps < 2) throw std::invalid_argument("--steps must be at least 2");
    if (!(c.lambda_min > 0.0 && c.lambda_min < c.lambda_max && c.lambda_max < 1.0))
      throw std::invalid_argument("scan needs 0 < lambda-min < lambda-max < 1");
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Random walks, Green functions and energies on the Sierpinski graph"};
  app.set_config("--config", "", "INI or TOML file with option defaults; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig c;
  c.workers = default_workers();
  std::uint64_t seed = 0;
  std::string output_dir;
  app.add_option("--lambda", c.params.lambda, "return ratio lambda in (0,1)")->capture_default_str();
  app.add_option("--c1", c.params.c1, "type-I horizontal conductance factor")->capture_default_str();
  app.add_option("--c2", c.params.c2, "type-II horizontal conductance factor")->capture_default_str();
  app.add_option("--gamma", c.params.gamma, "measure parameter gamma in (0,lambda)")->capture_default_str();
  app.add_option("--a", c.a, "visual metric parameter")->capture_default_str();
  app.add_option("--depth", c.depth, "ball depth N")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "seed for stochastic subcommands");
  app.add_option("--workers", c.workers, "worker threads")->capture_default_str();
  auto* out_opt = app.add_option("--output-dir", output_dir, "output directory (else $SGWALK_OUTPUT_DIR, else .)");

  std::vector<CLI::App*> subs;
  for (const std::string& name : kSubcommands) subs.push_back(app.add_subcommand(name));
  auto sub = [&](const char* name) { return app.get_subcommand(name); };

  sub("build-graph")->description("materialize B_N, write the edge list and structural checks");
  sub("green")->description("G_N(x,y) at N, N+1, N+2 with an extrapolated limit");
  sub("passage")->description("first-passage probabilities F_N(x,o)");
  sub("hitmeasure")->description("exit distribution over level-L cells");
  sub("martin")->description("Martin kernel against its predicted order of magnitude");
  sub("walk")->description("Monte Carlo exit cells of the discrete walk");
  sub("lifetime")->description("Monte Carlo lifetimes of the variable-speed walk");
  sub("separate")->description("separating function and its per-level energies");
  sub("energy")->description("per-level graph energy of a named function");
  sub("quad")->description("jump-form quadrature of the coordinate function across levels");
  sub("naim")->description("extension energy against jump energy over a test family");
  sub("trace-check")->description("trace inequality slack for random boundary functions");
  sub("scan")->description("locate the critical lambda of the separating-function energy");

  for (const char* name : {"green", "passage", "hitmeasure", "walk", "lifetime"})
    sub(name)->add_option("--x", c.x, "start word (o or empty for the root)");
  sub("green")->add_option("--y", c.y, "second word");
  for (const char* name : {"hitmeasure", "walk", "lifetime", "quad", "naim", "trace-check", "energy", "separate"})
    sub(name)->add_option("--level", c.level, "boundary cell level L")->capture_default_str();
  for (const char* name : {"walk", "lifetime"}) {
    sub(name)->add_option("--samples", c.samples, "number of walks")->capture_default_str();
    sub(name)->add_option("--step-budget", c.step_budget, "steps before a walk is reported as unfinished")->capture_default_str();
  }
  sub("walk")->add_option("--overrun", c.overrun, "extra steps to probe exit-cell misclassification")->capture_default_str();
  for (const char* name : {"separate", "energy"}) {
    sub(name)->add_option("--p", c.p, "cell carrying the value 1")->capture_default_str();
    sub(name)->add_option("--q", c.q, "cell carrying the value 0")->capture_default_str();
  }
  sub("energy")->add_option("--function", c.function, "separating | coordinate | indicator | harmonic")->capture_default_str();
  for (const char* name : {"martin", "trace-check"})
    sub(name)->add_option("--count", c.count, "number of proxies or random functions")->capture_default_str();
  sub("scan")->add_option("--lambda-min", c.lambda_min)->capture_default_str();
  sub("scan")->add_option("--lambda-max", c.lambda_max)->capture_default_str();
  sub("scan")->add_option("--steps", c.steps)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  for (CLI::App* s : subs)
    if (s->parsed()) c.subcommand = s->get_name();
  if (seed_opt->count() > 0) c.seed = seed;
  if (out_opt->count() > 0) {
    c.output_dir = output_dir;
  } else if (const char* env = std::getenv("SGWALK_OUTPUT_DIR"); env && *env) {
    c.output_dir = env;
  }
  return run(c, std::cout, std::cerr);
}

}  // namespace sg::cli
