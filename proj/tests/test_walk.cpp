#include "sgwalk/walk.hpp"

#include "sgwalk/graph.hpp"

#include <doctest.h>

#include <map>

using namespace sg;

TEST_CASE("single steps follow the transition kernel") {
  const ConductanceParams p;
  const Word x = Word::parse("01");
  std::map<Word, int> counts;
  Philox4x32 rng(9, 0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++counts[step_walk(p, x, rng)];
  for (const WordNeighbor& nb : implicit_neighbors(x)) {
    const double prob = transition_probability(p, x, nb.word);
    const double freq = static_cast<double>(counts[nb.word]) / n;
    CHECK(std::abs(freq - prob) < 5.0 * std::sqrt(prob * (1 - prob) / n));
  }
  std::size_t seen = 0;
  for (const auto& [w, c] : counts) seen += c;
  CHECK(seen == static_cast<std::size_t>(n));
  CHECK(counts.size() == static_cast<std::size_t>(implicit_neighbors(x).size()));
}

TEST_CASE("ensembles do not depend on the worker count") {
  ConductanceParams p;
  WalkOptions w;
  w.stop_level = 2;
  const auto one = run_ensemble(p, Word{}, w, {300, 11, 1, true});
  const auto three = run_ensemble(p, Word{}, w, {300, 11, 3, true});
  REQUIRE(one.size() == three.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].exit_cell == three[i].exit_cell);
    CHECK(one[i].steps == three[i].steps);
    CHECK(one[i].lifetime == three[i].lifetime);
    CHECK(one[i].rng_stream == i);
  }
}

TEST_CASE("stopping rule and budget") {
  ConductanceParams p;
  WalkOptions w;
  w.stop_level = 3;
  Philox4x32 rng(3, 0);
  const WalkTrace t = run_discrete(p, Word{}, w, rng);
  CHECK_FALSE(t.budget_exhausted);
  CHECK(t.exit_cell.length() == 3);
  CHECK(t.max_level >= 3 + w.depth_margin);
  w.step_budget = 5;
  Philox4x32 rng2(3, 0);
  const WalkTrace cut = run_discrete(p, Word{}, w, rng2);
  CHECK(cut.budget_exhausted);
  CHECK(cut.steps == 5);
}

TEST_CASE("root visits estimate G(o,o) and first passage") {
  ConductanceParams p;
  WalkOptions w;
  w.stop_level = 2;
  const auto from_root = run_ensemble(p, Word{}, w, {20000, 5, 1, false});
  std::vector<double> visits;
  for (const auto& t : from_root) visits.push_back(static_cast<double>(t.root_visits));
  const MeanEstimate g = estimate_mean(visits);
  CHECK(std::abs(g.mean - 4.0 / 3.0) < 4.0 * g.stderr_);

  const auto from_x = run_ensemble(p, Word::parse("01"), w, {20000, 6, 1, false});
  std::vector<double> hits;
  for (const auto& t : from_x) hits.push_back(t.root_visits > 0 ? 1.0 : 0.0);
  const MeanEstimate f = estimate_mean(hits);
  CHECK(std::abs(f.mean - 1.0 / 16.0) < 4.0 * f.stderr_);
}

TEST_CASE("lifetime bound dominates the exact mean from the root") {
  for (double lambda : {0.22, 0.25, 0.3}) {
    ConductanceParams p;
    p.lambda = lambda;
    p.gamma = lambda / 2;
    CHECK(remaining_lifetime_bound(p, 0) >= expected_lifetime_from_root(p));
    CHECK(remaining_lifetime_bound(p, 10) < remaining_lifetime_bound(p, 5));
  }
  CHECK(expected_lifetime_from_root(ConductanceParams{}) == doctest::Approx(32.0 / 63.0));
}

TEST_CASE("empirical hitting and escape profile") {
  ConductanceParams p;
  WalkOptions w;
  w.stop_level = 1;
  w.record_path = true;
  const auto traces = run_ensemble(p, Word{}, w, {3000, 2, 1, true});
  const EmpiricalHitting h = empirical_hitting(traces, 1);
  CHECK(h.total == 3000);
  CHECK(h.max_deviation_from_uniform() < 0.04);
  CHECK(h.frequency(Word::parse("0")) + h.frequency(Word::parse("1")) + h.frequency(Word::parse("2")) ==
        doctest::Approx(1.0));
  const EscapeProfile e = escape_profile(traces, 1);
  CHECK(e.all_reached_stop);
  CHECK(e.all_finite);
  CHECK(std::abs(e.downward_fraction - e.expected_downward_fraction) < 0.01);
  for (const auto& rec : e.records)
    for (std::size_t i = 1; i < rec.size(); ++i) CHECK(rec[i].level > rec[i - 1].level);
  // Record times to deeper levels do not decrease in the median.
  for (std::size_t n = 1; n < e.median_time_to_level.size() && n < 6; ++n)
    CHECK(e.median_time_to_level[n] >= e.median_time_to_level[n - 1]);

  WalkOptions bare;
  const auto unrecorded = run_ensemble(p, Word{}, bare, {3, 2, 1, false});
  CHECK_THROWS_AS(escape_profile(unrecorded, 1), std::invalid_argument);
}

TEST_CASE("misclassification probe") {
  ConductanceParams p;
  WalkOptions w;
  w.stop_level = 2;
  w.overrun_steps = 200;
  const auto traces = run_ensemble(p, Word{}, w, {2000, 4, 1, false});
  std::size_t wrong = 0;
  for (const auto& t : traces) wrong += t.misclassified;
  CHECK(static_cast<double>(wrong) / traces.size() < 0.01);
}
