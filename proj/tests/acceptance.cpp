// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "sgwalk/cli.hpp"
#include "sgwalk/energy.hpp"
#include "sgwalk/green.hpp"
#include "sgwalk/harmonic.hpp"
#include "sgwalk/parallel.hpp"
#include "sgwalk/rng.hpp"
#include "sgwalk/walk.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

using namespace sg;
using Rational = boost::multiprecision::cpp_rational;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("%s %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

template <typename... Args>
std::string fmt(const char* format, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

unsigned workers() { return default_workers(); }

void ac1() {
  const auto t0 = Clock::now();
  const TruncatedKernel k(ConductanceParams{}, 10);
  const double g = k.green(Word{}, Word{});
  const double secs = seconds_since(t0);
  const double rel = std::abs(g - 4.0 / 3.0) / (4.0 / 3.0);
  report("AC1", rel <= 1e-3 && secs <= 60.0, fmt("G_10(o,o)=%.12f rel_err=%.3e time=%.2fs", g, rel, secs));
}

void ac2() {
  double worst = 0.0;
  for (double lambda : {0.22, 0.25, 0.30}) {
    ConductanceParams p;
    p.lambda = lambda;
    p.gamma = lambda / 2;
    const TruncatedKernel k(p, 10);
    const Eigen::VectorXd f = first_passage_all(k);
    for (NodeId u = 0; u < ball_size(3); ++u) {
      const double ref = std::pow(lambda, k.graph().level(u));
      worst = std::max(worst, std::abs(f[u] - ref) / ref);
    }
  }
  report("AC2", worst <= 1e-3, fmt("max rel_err over |x|<=3, 3 lambdas, N=10: %.3e", worst));
}

void ac3() {
  Philox4x32 rng(20240601, 0);
  auto draw = [&] {
    const auto num = static_cast<long long>(rng() % 2001) - 1000;
    const auto den = static_cast<long long>(rng() % 997) + 1;
    return Rational(num, den);
  };
  BasicConductanceParams<Rational> p;
  int checked = 0, held = 0;
  while (checked < 1000) {
    p.lambda = Rational(static_cast<long long>(rng() % 99) + 1, 100);
    p.c1 = Rational(static_cast<long long>(rng() % 50) + 1, static_cast<long long>(rng() % 50) + 1);
    p.c2 = Rational(static_cast<long long>(rng() % 50) + 1, static_cast<long long>(rng() % 50) + 1);
    const TriangleValues<Rational> t{draw(), draw(), draw()};
    const int n = static_cast<int>(rng() % 6);
    const auto e = energy_recursion_check(t, n, p);
    if (e.degenerate) continue;
    ++checked;
    held += e.a2 * 5 * p.lambda == e.a1 && e.a3 * 25 * p.c1 == 14 * e.a1;
  }
  report("AC3", held == checked, fmt("%d/%d non-degenerate rational triangles satisfy both identities exactly", held, checked));
}

void ac4() {
  std::vector<double> grid;
  for (int i = 0; i < 21; ++i) grid.push_back(0.12 + 0.01 * i);
  const ScanReport r = walk_dimension_scan(grid, 8, workers());
  bool classes = true;
  for (const ScanEntry& e : r.entries) {
    if (e.lambda < 0.2 - 1e-9) classes &= e.classification == EnergyClass::Divergent;
    if (e.lambda > 0.2 + 1e-9) classes &= e.classification == EnergyClass::Convergent;
  }
  const double beta_star = std::log(5.0) / std::log(2.0);
  const double ratio_err = std::abs(r.beta_hat - beta_star);
  const double growth_err = std::abs(r.beta_hat_growth - beta_star);
  report("AC4", classes && ratio_err <= 1e-6 && growth_err <= 0.05,
         fmt("classification %s, beta_hat=%.9f (err %.2e), growth beta_hat(N=8)=%.6f (err %.2e)", classes ? "ok" : "wrong",
             r.beta_hat, ratio_err, r.beta_hat_growth, growth_err));
}

void ac5() {
  const TruncatedKernel k(ConductanceParams{}, 10);
  const std::vector<double> exact = harmonic_measure(k, Word{}, 2);
  double exact_dev = 0.0;
  for (double m : exact) exact_dev = std::max(exact_dev, std::abs(m - 1.0 / 9.0));

  const auto t0 = Clock::now();
  WalkOptions w;
  w.stop_level = 2;
  const auto traces = run_ensemble(ConductanceParams{}, Word{}, w, {100000, 5, workers(), false});
  const EmpiricalHitting hit = empirical_hitting(traces, 2);
  const double secs = seconds_since(t0);
  const double mc_dev = hit.max_deviation_from_uniform();
  report("AC5", exact_dev <= 1e-3 && mc_dev < 0.01 && hit.total == traces.size() && secs <= 300.0,
         fmt("exact max|nu(w)-1/9|=%.3e (N=10), MC max deviation=%.4f over %zu walks in %.1fs", exact_dev, mc_dev,
             hit.total, secs));
}

void ac6() {
  ConductanceParams p;
  p.gamma = 0.125;
  WalkOptions w;
  w.stop_level = 2;
  const auto traces = run_ensemble(p, Word{}, w, {100000, 6, workers(), true});
  std::vector<double> life;
  std::size_t finite = 0;
  for (const WalkTrace& t : traces) {
    life.push_back(t.lifetime);
    finite += std::isfinite(t.lifetime) && !t.budget_exhausted;
  }
  const MeanEstimate m = estimate_mean(life);
  const double z = (m.mean - 32.0 / 63.0) / m.stderr_;
  report("AC6", std::abs(z) <= 3.0 && finite == traces.size(),
         fmt("mean lifetime=%.5f +- %.5f vs 32/63=%.5f (z=%.2f), finite %zu/%zu", m.mean, m.stderr_, 32.0 / 63.0, z,
             finite, traces.size()));
}

void ac7() {
  const int depth = 10;
  const TruncatedKernel k(ConductanceParams{}, depth);
  std::vector<Word> xs;
  for (int n = 0; n <= 2; ++n)
    for (std::uint64_t c = 0; c < pow3(n); ++c) xs.push_back(Word::from_code(n, c));
  const std::vector<Word> xis = sample_boundary_proxies(depth, 10, 7);
  const MartinBand b = martin_band(k, xs, xis, workers());
  report("AC7", b.samples.size() >= 100 && b.band() <= 100.0,
         fmt("%zu pairs, ratio in [%.4f, %.4f], band=%.3f", b.samples.size(), b.min_ratio, b.max_ratio, b.band()));
}

void ac8() {
  const TruncatedKernel k(ConductanceParams{}, 9);
  const auto family = smooth_test_family(5);
  const NaimReport r = naim_comparability(k, family, workers());
  report("AC8", family.size() == 10 && r.band() <= 100.0,
         fmt("10 functions at L=5, N=9: ratio in [%.4f, %.4f], band=%.3f", r.min_ratio, r.max_ratio, r.band()));
}

void ac9() {
  const TruncatedKernel k(ConductanceParams{}, 9);
  std::vector<CellFunction> tested = smooth_test_family(4);
  tested.push_back(CellFunction::constant(4, 1.0));
  Philox4x32 rng(9, 0);
  for (int i = 0; i < 20; ++i) {
    CellFunction u = CellFunction::constant(4, 0.0);
    for (double& v : u.values) v = 2.0 * rng.uniform() - 1.0;
    tested.push_back(u);
  }
  double worst = std::numeric_limits<double>::infinity();
  for (const CellFunction& u : tested) worst = std::min(worst, trace_inequality_check(k, u, workers()).slack);
  report("AC9", worst >= 1.0, fmt("min RHS/LHS over %zu functions = %.4f (C^2=%.6f)", tested.size(), worst,
                                  trace_constant(ConductanceParams{})));
}

void ac10() {
  const int n = 8;
  const ConductanceParams p;
  const auto s = build_separating_function(p, Word::parse("00"), Word::parse("11"), n + 2, workers());
  double energy = 0.0;
  for (double h : s.energies.horizontal) energy += h;
  for (double v : s.energies.vertical) energy += v;
  const double bound = extension_tail_bound(p, energy, n);
  Philox4x32 rng(10, 0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    Word ray;
    for (int j = 0; j < n + 2; ++j) ray = ray.child(static_cast<int>(rng() % 3));
    worst = std::max(worst, std::abs(s.values(ray.prefix(n)) - s.values(ray)));
  }
  report("AC10", worst <= bound, fmt("100 rays: max |v(xi_%d)-v(xi_%d)|=%.4e, bound=%.4e (energy %.4f)", n, n + 2, worst,
                                     bound, energy));
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void ac11() {
  namespace fs = std::filesystem;
  bool same = true;
  std::string detail;
  for (const char* sub : {"walk", "lifetime", "trace-check", "martin"}) {
    cli::RunConfig c;
    c.subcommand = sub;
    c.seed = 11;
    c.samples = 2000;
    c.depth = 7;
    c.level = std::string(sub) == "trace-check" ? 3 : 2;
    c.workers = workers();
    std::string first_json, first_csv;
    for (int rep = 0; rep < 2; ++rep) {
      c.output_dir = (fs::temp_directory_path() / ("sgwalk_ac11_" + std::to_string(rep))).string();
      fs::remove_all(c.output_dir);
      std::ostringstream log, err;
      if (cli::run(c, log, err) != 0) {
        same = false;
        detail += std::string(sub) + ": " + err.str();
        break;
      }
      const std::string js = slurp(fs::path(c.output_dir) / (std::string(sub) + ".json"));
      const std::string cs = slurp(fs::path(c.output_dir) / (std::string(sub) + ".csv"));
      if (rep == 0) {
        first_json = js;
        first_csv = cs;
      } else {
        const bool ok = js == first_json && cs == first_csv;
        same &= ok;
        detail += std::string(sub) + (ok ? "=identical " : "=DIFFERENT ");
      }
    }
  }
  report("AC11", same, detail);
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void()>>> criteria = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},   {"AC5", ac5},  {"AC6", ac6},
      {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11}};
  for (const auto& [id, check] : criteria) {
    try {
      check();
    } catch (const std::exception& e) {
      report(id, false, std::string("threw: ") + e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
