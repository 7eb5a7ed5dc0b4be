#include "sgwalk/energy.hpp"

#include "sgwalk/green.hpp"
#include "sgwalk/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sg {

const char* to_string(EnergyClass c) {
  switch (c) {
    case EnergyClass::Convergent:
      return "convergent";
    case EnergyClass::Divergent:
      return "divergent";
    case EnergyClass::Critical:
      return "critical";
  }
  return "unknown";
}

EnergyClass classify_ratio(double ratio) {
  if (ratio < 0.98) return EnergyClass::Convergent;
  if (ratio > 1.02) return EnergyClass::Divergent;
  return EnergyClass::Critical;
}

double fitted_ratio(std::span<const double> per_level) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t n = 0; n < per_level.size(); ++n) {
    if (!(per_level[n] > 0.0)) continue;
    const double x = static_cast<double>(n);
    const double y = std::log(per_level[n]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return 0.0;
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return std::exp(slope);
}

EnergyReport graph_energy(const ConductanceParams& params, const BallFunction& u, unsigned workers) {
  const LevelEnergies<double> e = level_energies(u, params, workers);
  EnergyReport r;
  r.horizontal = e.horizontal;
  r.vertical = e.vertical;
  for (double h : r.horizontal) r.total += h;
  for (double v : r.vertical) r.total += v;
  r.fitted_ratio = fitted_ratio(r.horizontal);
  r.classification = classify_ratio(r.fitted_ratio);
  return r;
}

double extension_energy(const TruncatedKernel& kernel, const BallFunction& hu, const CellFunction& u,
                        unsigned workers) {
  const int depth = kernel.depth();
  if (hu.depth() != depth) throw std::invalid_argument("extension must live on the kernel's ball");
  double total = graph_energy(kernel.params(), hu, workers).total;
  const LevelFunction<double>& last = hu.levels[depth];
  const std::size_t group = static_cast<std::size_t>(pow3(depth - u.level));
  double exit = 0.0;
  for (std::size_t z = 0; z < last.values.size(); ++z) {
    const double d = last.values[z] - u.values[z / group];
    exit += d * d;
  }
  return total + kernel.exit_conductance() * exit;
}

double jump_energy(const CellFunction& u, double beta, unsigned workers) {
  if (u.level < 0 || u.level > 8) throw std::invalid_argument("jump quadrature supports L <= 8");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const int level = u.level;
  const std::size_t cells = u.values.size();
  std::vector<Eigen::Vector2d> centers(cells);
  for (std::size_t c = 0; c < cells; ++c) centers[c] = cell_barycenter(Word::from_code(level, c));
  const double exponent = -0.5 * (gasket_dimension() + beta);
  std::vector<double> rows(cells, 0.0);
  parallel_for(cells, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < cells; ++j) {
        if (i == j) continue;
        const double d = u.values[i] - u.values[j];
        if (d == 0.0) continue;
        acc += d * d * std::pow((centers[i] - centers[j]).squaredNorm(), exponent);
      }
      rows[i] = acc;
    }
  });
  double total = 0.0;
  for (double r : rows) total += r;
  const double weight = std::pow(3.0, -2.0 * level);
  return total * weight;
}

NaimReport naim_comparability(const TruncatedKernel& kernel, std::span<const CellFunction> family,
                              unsigned workers) {
  if (family.empty()) throw std::invalid_argument("test family is empty");
  const double beta = beta_of(kernel.params().lambda);
  NaimReport r;
  r.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const CellFunction& u = family[i];
    if (u.is_constant()) throw std::invalid_argument("test function " + std::to_string(i) + " is constant");
    const double graph = extension_energy(kernel, poisson_integral(kernel, u), u, workers);
    const double jump = jump_energy(u, beta, workers);
    r.graph_energies.push_back(graph);
    r.jump_energies.push_back(jump);
    r.ratios.push_back(graph / jump);
    r.min_ratio = std::min(r.min_ratio, graph / jump);
    r.max_ratio = std::max(r.max_ratio, graph / jump);
  }
  return r;
}

std::vector<CellFunction> smooth_test_family(int level) {
  using P = const Eigen::Vector2d&;
  const double two_pi = 2.0 * std::acos(-1.0);
  std::vector<std::function<double(P)>> fs = {
      [](P x) { return x[0]; },
      [](P x) { return x[1]; },
      [](P x) { return x[0] + 2.0 * x[1]; },
      [](P x) { return x[0] * x[0]; },
      [](P x) { return x[0] * x[1]; },
      [=](P x) { return std::sin(two_pi * x[0]); },
      [](P x) { return std::cos(3.0 * x[1]); },
      [](P x) { return std::exp(-((x - Eigen::Vector2d(0.5, 0.3)).squaredNorm()) / 0.1); },
      [](P x) { return x[0] * x[0] * x[0] - x[1]; },
      [](P x) { return std::abs(x[0] - 0.5); },
  };
  std::vector<CellFunction> out;
  for (const auto& f : fs) out.push_back(CellFunction::from_points(level, f));
  return out;
}

double trace_constant(const ConductanceParams& params) {
  const double g_root = 1.0 / (1.0 - params.lambda);
  const double pi_root = 3.0;
  const double m_root = 1.0;
  return std::max(14.0 * g_root / pi_root, 4.0 / m_root);
}

TraceReport trace_inequality_check(const TruncatedKernel& kernel, const CellFunction& u, unsigned workers) {
  const ConductanceParams& p = kernel.params();
  if (!in_regular_regime(p)) throw std::invalid_argument("trace inequality check needs lambda in (1/5,1/3)");
  TraceReport r;
  const double weight = std::pow(3.0, -u.level);
  for (double v : u.values) r.lhs += v * v * weight;
  const BallFunction hu = poisson_integral(kernel, u);
  r.energy = extension_energy(kernel, hu, u, workers);
  for (const auto& level : hu.levels) {
    const double m = std::pow(p.gamma / (3.0 * p.lambda), level.level);
    double acc = 0.0;
    for (double v : level.values) acc += v * v;
    r.l2_mass += m * acc;
  }
  r.c_squared = trace_constant(p);
  r.rhs = r.c_squared * (r.energy + r.l2_mass);
  r.slack = r.lhs > 0.0 ? r.rhs / r.lhs : std::numeric_limits<double>::infinity();
  return r;
}

double sphere_pullback_energy(const ConductanceParams& params, const std::function<double(const Eigen::Vector2d&)>& f,
                              int n) {
  if (n < 1) throw std::invalid_argument("sphere level must be positive");
  const auto count = static_cast<std::uint64_t>(pow3(n));
  std::vector<double> values(count);
  for (std::uint64_t c = 0; c < count; ++c) values[c] = f(vertex_point(Word::from_code(n, c)).to_plane());
  double total = 0.0;
  for (std::uint64_t c = 0; c < count; ++c) {
    for (const WordNeighbor& nb : implicit_neighbors(Word::from_code(n, c))) {
      if (nb.kind == EdgeKind::Vertical || nb.word.index() <= c) continue;
      const double d = values[c] - values[nb.word.index()];
      total += edge_conductance(nb.kind, n, params) * d * d;
    }
  }
  return total;
}

namespace {

template <typename F>
double bisect_crossing(F ratio, double lo, double hi) {
  // ratio is decreasing in lambda: above 1 at lo, below 1 at hi.
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ratio(mid) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

template <typename F>
double crossing_on_grid(F ratio, std::span<const double> grid, const std::vector<double>& values) {
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (values[i] == 1.0) return grid[i];
    if (values[i] > 1.0 && values[i + 1] <= 1.0) return values[i + 1] == 1.0 ? grid[i + 1] : bisect_crossing(ratio, grid[i], grid[i + 1]);
  }
  throw std::invalid_argument("lambda grid does not straddle the critical point");
}

}  // namespace

ScanReport walk_dimension_scan(std::span<const double> lambdas, int depth, unsigned workers) {
  if (depth < 7) throw std::invalid_argument("walk dimension scan needs depth >= 7");
  if (lambdas.size() < 2) throw std::invalid_argument("lambda grid needs at least two points");
  if (!std::is_sorted(lambdas.begin(), lambdas.end())) throw std::invalid_argument("lambda grid must be increasing");

  const BallFunction v = separating_function<double>(Word::parse("00"), Word::parse("11"), depth, workers);
  auto ratio_route = [](double lambda) {
    ConductanceParams p;
    p.lambda = lambda;
    const auto e = energy_recursion_check(TriangleValues<double>{1.0, 0.0, 0.0}, 0, p);
    return e.a2 / e.a1;
  };
  auto growth_route = [&](double lambda) {
    ConductanceParams p;
    p.lambda = lambda;
    const LevelEnergies<double> e = level_energies(v, p, workers);
    return fitted_ratio(e.horizontal);
  };

  ScanReport r;
  r.depth = depth;
  std::vector<double> ratios;
  std::vector<double> growth;
  for (double lambda : lambdas) {
    ScanEntry e;
    e.lambda = lambda;
    e.beta = beta_of(lambda);
    e.ratio = ratio_route(lambda);
    e.growth_ratio = growth_route(lambda);
    e.classification = classify_ratio(e.ratio);
    e.growth_classification = classify_ratio(e.growth_ratio);
    ratios.push_back(e.ratio);
    growth.push_back(e.growth_ratio);
    r.entries.push_back(e);
  }
  r.lambda_hat = crossing_on_grid(ratio_route, lambdas, ratios);
  r.beta_hat = beta_of(r.lambda_hat);
  r.lambda_hat_growth = crossing_on_grid(growth_route, lambdas, growth);
  r.beta_hat_growth = beta_of(r.lambda_hat_growth);
  return r;
}

}  // namespace sg
