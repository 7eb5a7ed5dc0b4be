#pragma once

#include "sgwalk/conductance.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sg::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

extern const std::vector<std::string> kSubcommands;

struct RunConfig {
  std::string subcommand;
  ConductanceParams params;
  double a = 1.0;  // visual-metric parameter
  int depth = 8;
  std::size_t samples = 1000;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string output_dir = ".";

  std::string x;       // start or first argument word, "" = root
  std::string y;       // second argument word
  int level = 2;       // L: boundary cell level
  std::string p = "00";
  std::string q = "11";
  std::string function = "separating";  // energy: separating | coordinate | indicator | harmonic
  std::size_t count = 20;               // martin proxies, trace-check functions
  double lambda_min = 0.12;
  double lambda_max = 0.32;
  int steps = 21;
  std::size_t step_budget = 1'000'000;
  std::size_t overrun = 200;
};

/// Throws std::invalid_argument naming the violated constraint.
void validate(const RunConfig& config);

/// Runs one subcommand and writes <output_dir>/<subcommand>.json and, where
/// the subcommand has per-row detail, <subcommand>.csv. Nothing is written
/// when validation or the computation fails. Returns the exit status.
int run(const RunConfig& config, std::ostream& log, std::ostream& err);

/// Command-line entry point: parses flags (with an optional config file) and runs.
int main(int argc, char** argv);

}  // namespace sg::cli
