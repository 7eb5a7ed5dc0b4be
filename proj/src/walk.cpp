#include "sgwalk/walk.hpp"

#include "sgwalk/graph.hpp"
#include "sgwalk/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sg {

namespace {

struct Kernel {
  NeighborList neighbors;
  std::array<double, NeighborList::kCapacity> weight{};
  double pi = 0.0;
  double downward = 0.0;  // conductance to children
};

Kernel local_kernel(const ConductanceParams& params, const Word& x) {
  Kernel k;
  k.neighbors = implicit_neighbors(x);
  for (int i = 0; i < k.neighbors.size(); ++i) {
    const WordNeighbor& nb = k.neighbors[i];
    const int level = nb.kind == EdgeKind::Vertical ? std::min(x.length(), nb.word.length()) : x.length();
    k.weight[i] = edge_conductance(nb.kind, level, params);
    k.pi += k.weight[i];
    if (nb.word.length() > x.length()) k.downward += k.weight[i];
  }
  return k;
}

const Word& sample(const Kernel& k, Philox4x32& rng) {
  const double target = rng.uniform() * k.pi;
  double acc = 0.0;
  for (int i = 0; i < k.neighbors.size(); ++i) {
    acc += k.weight[i];
    if (target < acc) return k.neighbors[i].word;
  }
  return k.neighbors[k.neighbors.size() - 1].word;
}

WalkTrace run_walk(const ConductanceParams& params, const Word& start, const WalkOptions& options, Philox4x32& rng,
                   bool continuous) {
  if (options.stop_level < 0) throw std::invalid_argument("stop level must be non-negative");
  if (options.confluence_steps < 1) throw std::invalid_argument("confluence steps must be positive");
  WalkTrace trace;
  const int deep = options.stop_level + options.depth_margin;
  Word x = start;
  Word cell;
  int run = 0;
  trace.root_visits = x.is_root() ? 1 : 0;
  trace.max_level = x.length();
  if (options.record_path) trace.nodes.push_back(x);

  while (true) {
    if (trace.steps >= options.step_budget) {
      trace.budget_exhausted = true;
      break;
    }
    const Kernel k = local_kernel(params, x);
    if (continuous) {
      const double hold = rng.exponential(k.pi / measure_m(params, x));
      trace.lifetime += hold;
      if (options.record_path) trace.holding_times.push_back(hold);
    }
    const Word next = sample(k, rng);
    trace.expected_downward += k.downward / k.pi;
    if (next.length() > x.length()) ++trace.downward_steps;
    x = next;
    ++trace.steps;
    if (x.is_root()) ++trace.root_visits;
    trace.max_level = std::max(trace.max_level, x.length());
    if (options.record_path) trace.nodes.push_back(x);

    if (x.length() >= deep) {
      const Word anc = x.prefix(options.stop_level);
      run = (run > 0 && anc == cell) ? run + 1 : 1;
      cell = anc;
    } else {
      run = 0;
    }
    if (run >= options.confluence_steps) break;
  }
  trace.exit_cell = run > 0 ? cell : x.prefix(std::min(options.stop_level, x.length()));
  if (continuous) trace.tail_bound = remaining_lifetime_bound(params, x.length());

  if (options.overrun_steps > 0 && !trace.budget_exhausted) {
    Word y = x;
    // The probe drifts downward; it ends early where words run out of letters.
    for (std::size_t i = 0; i < options.overrun_steps && y.length() < Word::kMaxLength; ++i)
      y = sample(local_kernel(params, y), rng);
    trace.misclassified = y.length() < options.stop_level || y.prefix(options.stop_level) != trace.exit_cell;
  }
  return trace;
}

}  // namespace

Word step_walk(const ConductanceParams& params, const Word& x, Philox4x32& rng) {
  return sample(local_kernel(params, x), rng);
}

WalkTrace run_discrete(const ConductanceParams& params, const Word& start, const WalkOptions& options,
                       Philox4x32& rng) {
  return run_walk(params, start, options, rng, false);
}

WalkTrace run_ctrw(const ConductanceParams& params, const Word& start, const WalkOptions& options, Philox4x32& rng) {
  return run_walk(params, start, options, rng, true);
}

double remaining_lifetime_bound(const ConductanceParams& p, int level) {
  const double lam = p.lambda;
  const double visits = (1.0 + lam) / (1.0 - lam);
  const double h_max = 2.0 * p.c1 + p.c2;
  const double per_visit = (3.0 + 3.0 * lam + h_max) / ((3.0 + 3.0 * lam) * (3.0 + 3.0 * lam + 2.0 * p.c1));
  double levels = std::pow(p.gamma, level) / (1.0 - p.gamma);
  for (int j = 1; j < level; ++j) levels += std::pow(lam, level - j) * std::pow(p.gamma, j);
  const double root = std::pow(lam, level) / (3.0 * (1.0 - lam));
  return root + visits * per_visit * levels;
}

double expected_lifetime_from_root(const ConductanceParams& p) {
  return 1.0 / (3.0 * (1.0 - p.lambda) * (1.0 - p.gamma));
}

std::vector<WalkTrace> run_ensemble(const ConductanceParams& params, const Word& start, const WalkOptions& walk,
                                    const EnsembleOptions& ensemble) {
  validate(params);
  std::vector<WalkTrace> traces(ensemble.samples);
  parallel_for(ensemble.samples, ensemble.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Philox4x32 rng(ensemble.seed, i);
      traces[i] = ensemble.continuous ? run_ctrw(params, start, walk, rng) : run_discrete(params, start, walk, rng);
      traces[i].rng_seed = ensemble.seed;
      traces[i].rng_stream = i;
    }
  });
  return traces;
}

double EmpiricalHitting::frequency(const Word& cell) const {
  if (cell.length() != level) throw std::invalid_argument("cell level mismatch");
  return total == 0 ? 0.0 : static_cast<double>(counts[cell.index()]) / static_cast<double>(total);
}

double EmpiricalHitting::max_deviation_from_uniform() const {
  const double uniform = 1.0 / static_cast<double>(counts.size());
  double worst = 0.0;
  for (std::size_t c : counts)
    worst = std::max(worst, std::abs(static_cast<double>(c) / static_cast<double>(total) - uniform));
  return worst;
}

EmpiricalHitting empirical_hitting(std::span<const WalkTrace> traces, int level) {
  EmpiricalHitting out;
  out.level = level;
  out.counts.assign(static_cast<std::size_t>(pow3(level)), 0);
  for (const WalkTrace& t : traces) {
    if (t.budget_exhausted || t.exit_cell.length() != level) continue;
    ++out.counts[t.exit_cell.index()];
    ++out.total;
  }
  return out;
}

MeanEstimate estimate_mean(std::span<const double> values) {
  MeanEstimate est;
  est.count = values.size();
  if (values.empty()) return est;
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    est.stderr_ = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
  }
  return est;
}

EscapeProfile escape_profile(std::span<const WalkTrace> traces, int stop_level) {
  if (traces.empty()) throw std::invalid_argument("escape profile needs at least one trace");
  EscapeProfile profile;
  std::vector<std::vector<double>> times_by_level;
  std::size_t steps = 0;
  std::size_t downward = 0;
  double expected = 0.0;
  for (const WalkTrace& t : traces) {
    if (t.nodes.empty()) throw std::invalid_argument("escape profile needs traces with recorded paths");
    const bool timed = !t.holding_times.empty();
    std::vector<EscapeRecord> records;
    double clock = 0.0;
    int best = t.nodes.front().length();
    records.push_back({best, 0.0});
    for (std::size_t i = 1; i < t.nodes.size(); ++i) {
      clock += timed ? t.holding_times[i - 1] : 1.0;
      if (t.nodes[i].length() > best) {
        best = t.nodes[i].length();
        records.push_back({best, clock});
      }
    }
    for (const EscapeRecord& r : records) {
      if (static_cast<std::size_t>(r.level) >= times_by_level.size()) times_by_level.resize(r.level + 1);
      times_by_level[r.level].push_back(r.time);
    }
    profile.all_reached_stop = profile.all_reached_stop && best >= stop_level && !t.budget_exhausted;
    profile.all_finite = profile.all_finite && std::isfinite(clock);
    profile.records.push_back(std::move(records));
    steps += t.steps;
    downward += t.downward_steps;
    expected += t.expected_downward;
  }
  if (steps > 0) {
    profile.downward_fraction = static_cast<double>(downward) / static_cast<double>(steps);
    profile.expected_downward_fraction = expected / static_cast<double>(steps);
  }
  for (auto& times : times_by_level) {
    if (times.empty()) {
      profile.median_time_to_level.push_back(0.0);
      continue;
    }
    auto mid = times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2);
    std::nth_element(times.begin(), mid, times.end());
    profile.median_time_to_level.push_back(*mid);
  }
  return profile;
}

}  // namespace sg
