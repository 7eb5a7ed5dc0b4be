#pragma once

#include "sgwalk/address.hpp"
#include "sgwalk/conductance.hpp"
#include "sgwalk/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace sg {

/// Walks run on the infinite graph: neighbors and conductances come from the
/// address, so no ball has to be materialized.
Word step_walk(const ConductanceParams& params, const Word& x, Philox4x32& rng);

/// Stopping rule for a walk heading to the boundary. The walk is taken to
/// have converged into the level-`stop_level` cell w once its last
/// `confluence_steps` steps all stayed inside the subtree of w at level
/// >= stop_level + depth_margin.
struct WalkOptions {
  int stop_level = 2;
  int confluence_steps = 50;
  int depth_margin = 4;
  std::size_t step_budget = 1'000'000;
  bool record_path = false;
  /// Extra steps taken after the stop to probe whether the exit cell changes.
  std::size_t overrun_steps = 0;
};

struct WalkTrace {
  std::vector<Word> nodes;            // filled when WalkOptions::record_path is set
  std::vector<double> holding_times;  // continuous-time walks with recorded paths
  double lifetime = 0.0;              // sum of holding times up to the stop
  double tail_bound = 0.0;            // bound on the expected remaining lifetime
  Word exit_cell;
  std::uint64_t rng_seed = 0;
  std::uint64_t rng_stream = 0;
  std::size_t steps = 0;
  std::size_t root_visits = 0;        // visits to o at times n >= 0
  std::size_t downward_steps = 0;     // steps to a child
  double expected_downward = 0.0;     // sum over steps of P(Z_n, children)
  int max_level = 0;
  bool budget_exhausted = false;
  bool misclassified = false;         // overrun probe left the exit cell
};

/// Discrete-time walk Z_n from `start` until the stopping rule fires.
WalkTrace run_discrete(const ConductanceParams& params, const Word& start, const WalkOptions& options,
                       Philox4x32& rng);

/// Variable-speed walk: holding time at x is exponential with rate pi(x)/m(x).
WalkTrace run_ctrw(const ConductanceParams& params, const Word& start, const WalkOptions& options, Philox4x32& rng);

/// Rigorous bound on E_x[remaining lifetime] for a walk standing at level k.
double remaining_lifetime_bound(const ConductanceParams& params, int level);

/// E_o zeta = G(o,o)/pi(o) * sum_n gamma^n = 1 / (3 (1 - lambda)(1 - gamma)).
double expected_lifetime_from_root(const ConductanceParams& params);

struct EnsembleOptions {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool continuous = false;
};

/// Sample i uses the generator stream (seed, i), so the returned traces are
/// identical for every worker count.
std::vector<WalkTrace> run_ensemble(const ConductanceParams& params, const Word& start, const WalkOptions& walk,
                                    const EnsembleOptions& ensemble);

struct EmpiricalHitting {
  int level = 0;
  std::vector<std::size_t> counts;  // indexed by the code of the level-L cell
  std::size_t total = 0;

  double frequency(const Word& cell) const;
  /// max_w |count_w / total - 3^-L|
  double max_deviation_from_uniform() const;
};

EmpiricalHitting empirical_hitting(std::span<const WalkTrace> traces, int level);

struct MeanEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;  // standard error of the mean
  std::size_t count = 0;
};

MeanEstimate estimate_mean(std::span<const double> values);

struct EscapeRecord {
  int level;
  double time;  // elapsed time (continuous walks) or step count
};

struct EscapeProfile {
  std::vector<std::vector<EscapeRecord>> records;  // per trace, strictly increasing levels
  bool all_reached_stop = true;
  bool all_finite = true;
  double downward_fraction = 0.0;           // empirical share of steps to a child
  double expected_downward_fraction = 0.0;  // exact kernel averaged along the paths
  std::vector<double> median_time_to_level;  // index = level
};

/// Record levels against elapsed time. Requires traces with recorded paths.
EscapeProfile escape_profile(std::span<const WalkTrace> traces, int stop_level);

}  // namespace sg
