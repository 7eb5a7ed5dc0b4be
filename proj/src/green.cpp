#include "sgwalk/green.hpp"

#include "sgwalk/parallel.hpp"
#include "sgwalk/rng.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sg {

TruncatedKernel::TruncatedKernel(std::shared_ptr<const Graph> graph, const ConductanceParams& params,
                                 SolverOptions options)
    : graph_(std::move(graph)), params_(params), options_(options) {
  validate(params_);
  assemble();
}

TruncatedKernel::TruncatedKernel(const WeightedGraph& wg, SolverOptions options)
    : TruncatedKernel(wg.graph_ptr(), wg.params(), options) {}

TruncatedKernel::TruncatedKernel(const ConductanceParams& params, int depth, SolverOptions options)
    : TruncatedKernel(std::make_shared<const Graph>(Graph::build(depth)), params, options) {}

void TruncatedKernel::assemble() {
  const Graph& g = *graph_;
  const auto n = static_cast<Eigen::Index>(g.node_count());
  const int depth = g.depth();
  exit_conductance_ = 3.0 * edge_conductance(EdgeKind::Vertical, depth, params_);

  std::vector<Eigen::Triplet<double>> off;
  off.reserve(g.edge_count() * 2);
  pi_.resize(n);
  for (int level = 0; level <= depth; ++level) {
    const auto begin = static_cast<NodeId>(level_offset(level));
    const auto end = static_cast<NodeId>(level_offset(level + 1));
    for (NodeId u = begin; u < end; ++u) {
      double total = level == depth ? exit_conductance_ : 0.0;
      for (const Neighbor& nb : g.neighbors(u)) {
        const int edge_level = nb.kind == EdgeKind::Vertical && nb.id < u ? level - 1 : level;
        const double c = edge_conductance(nb.kind, edge_level, params_);
        total += c;
        off.emplace_back(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(nb.id), c);
      }
      pi_[u] = total;
    }
  }

  Eigen::SparseMatrix<double> conductances(n, n);
  conductances.setFromTriplets(off.begin(), off.end());
  Eigen::SparseMatrix<double> diag(n, n);
  diag.reserve(Eigen::VectorXi::Constant(n, 1));
  for (Eigen::Index i = 0; i < n; ++i) diag.insert(i, i) = pi_[i];
  system_ = diag - conductances;
  system_.makeCompressed();
  transition_ = pi_.cwiseInverse().asDiagonal() * conductances;
  transition_.makeCompressed();
}

Eigen::VectorXd TruncatedKernel::solve(const Eigen::VectorXd& rhs) const {
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(options_.tolerance);
  cg.setMaxIterations(options_.max_iterations);
  cg.compute(system_);
  Eigen::VectorXd x = cg.solve(rhs);
  if (cg.info() != Eigen::Success && !(cg.error() <= 10.0 * options_.tolerance))
    throw std::runtime_error("conjugate gradient did not converge: residual " + std::to_string(cg.error()) +
                             " after " + std::to_string(cg.iterations()) + " iterations");
  return x;
}

Eigen::VectorXd TruncatedKernel::green_column(const Word& y) const {
  const NodeId j = graph_->id(y);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(pi_.size());
  rhs[j] = pi_[j];
  return solve(rhs);
}

Eigen::VectorXd TruncatedKernel::green_row(const Word& x) const {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(pi_.size());
  rhs[graph_->id(x)] = 1.0;
  return solve(rhs).cwiseProduct(pi_);
}

double TruncatedKernel::green(const Word& x, const Word& y) const { return green_column(y)[graph_->id(x)]; }

Eigen::VectorXd TruncatedKernel::exit_distribution(const Word& x) const {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(pi_.size());
  rhs[graph_->id(x)] = 1.0;
  const Eigen::VectorXd h = solve(rhs);
  const auto first = static_cast<Eigen::Index>(level_offset(depth()));
  return exit_conductance_ * h.tail(h.size() - first);
}

double aitken_limit(double a0, double a1, double a2) {
  const double d1 = a1 - a0;
  const double d2 = a2 - a1;
  const double denom = d2 - d1;
  if (denom == 0.0 || std::abs(d2) >= std::abs(d1)) return a2;
  return a2 - d2 * d2 / denom;
}

GreenEstimate green(const ConductanceParams& params, int depth, const Word& x, const Word& y, SolverOptions options) {
  if (x.length() > depth || y.length() > depth)
    throw std::invalid_argument("green needs x and y inside the ball of depth " + std::to_string(depth));
  GreenEstimate est;
  est.depth = depth;
  est.at_depth = TruncatedKernel(params, depth, options).green(x, y);
  est.at_depth_1 = TruncatedKernel(params, depth + 1, options).green(x, y);
  est.at_depth_2 = TruncatedKernel(params, depth + 2, options).green(x, y);
  est.extrapolated = aitken_limit(est.at_depth, est.at_depth_1, est.at_depth_2);
  return est;
}

double green_root_exact(double lambda, int depth) {
  // From level 1 the level chain returns to 0 before reaching depth+1 with
  // the gambler's-ruin probability for ratio lambda.
  const double far = std::pow(lambda, depth + 1);
  const double back = (lambda - far) / (1.0 - far);
  return 1.0 / (1.0 - back);
}

double first_passage_exact(double lambda, int level, int depth) {
  const double far = std::pow(lambda, depth + 1);
  return (std::pow(lambda, level) - far) / (1.0 - far);
}

double first_passage(const TruncatedKernel& kernel, const Word& x) {
  const Eigen::VectorXd column = kernel.green_column(Word{});
  return column[kernel.graph().id(x)] / column[0];
}

Eigen::VectorXd first_passage_all(const TruncatedKernel& kernel) {
  const Eigen::VectorXd column = kernel.green_column(Word{});
  return column / column[0];
}

std::vector<double> harmonic_measure(const TruncatedKernel& kernel, const Word& x, int level) {
  if (level < 0 || level > kernel.depth() - 3)
    throw std::invalid_argument("harmonic measure needs L <= N-3 (L=" + std::to_string(level) +
                                ", N=" + std::to_string(kernel.depth()) + ")");
  const Eigen::VectorXd exits = kernel.exit_distribution(x);
  const int shift = kernel.depth() - level;
  const auto group = static_cast<Eigen::Index>(pow3(shift));
  std::vector<double> mass(static_cast<std::size_t>(pow3(level)), 0.0);
  for (std::size_t w = 0; w < mass.size(); ++w) mass[w] = exits.segment(static_cast<Eigen::Index>(w) * group, group).sum();
  return mass;
}

namespace {

void check_martin_args(const TruncatedKernel& kernel, const Word& x, const Word& xi) {
  if (xi.length() != kernel.depth() - 1)
    throw std::invalid_argument("boundary proxy must lie at level N-1 = " + std::to_string(kernel.depth() - 1));
  if (x.length() > kernel.depth() - 4)
    throw std::invalid_argument("martin kernel needs |x| <= N-4 = " + std::to_string(kernel.depth() - 4));
}

}  // namespace

double martin_kernel(const TruncatedKernel& kernel, const Word& x, const Word& xi) {
  check_martin_args(kernel, x, xi);
  const Eigen::VectorXd column = kernel.green_column(xi);
  return column[kernel.graph().id(x)] / column[0];
}

double martin_prediction(double lambda, int x_level, double gromov) {
  return std::pow(lambda, x_level) * std::pow(3.0 / lambda, gromov);
}

MartinBand martin_band(const TruncatedKernel& kernel, std::span<const Word> xs, std::span<const Word> xis,
                       unsigned workers) {
  if (xs.empty() || xis.empty()) throw std::invalid_argument("martin band needs at least one pair");
  for (const Word& xi : xis)
    for (const Word& x : xs) check_martin_args(kernel, x, xi);
  const Graph wide = Graph::build(kernel.depth() + 1);
  MartinBand band;
  band.samples.resize(xs.size() * xis.size());
  parallel_for(xis.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const Word& xi = xis[j];
      const Eigen::VectorXd column = kernel.green_column(xi);
      const std::vector<int> dist = bfs_distances(wide, wide.id(xi));
      for (std::size_t i = 0; i < xs.size(); ++i) {
        MartinSample& s = band.samples[j * xs.size() + i];
        s.x = xs[i];
        s.xi = xi;
        s.gromov = 0.5 * static_cast<double>(xs[i].length() + xi.length() - dist[wide.id(xs[i])]);
        s.measured = column[kernel.graph().id(xs[i])] / column[0];
        s.predicted = martin_prediction(kernel.params().lambda, xs[i].length(), s.gromov);
        s.ratio = s.measured / s.predicted;
      }
    }
  });
  band.min_ratio = std::numeric_limits<double>::infinity();
  for (const MartinSample& s : band.samples) {
    band.min_ratio = std::min(band.min_ratio, s.ratio);
    band.max_ratio = std::max(band.max_ratio, s.ratio);
  }
  return band;
}

std::vector<Word> sample_boundary_proxies(int depth, std::size_t count, std::uint64_t seed) {
  if (depth < 2) throw std::invalid_argument("boundary proxies need depth >= 2");
  std::vector<Word> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Philox4x32 rng(seed, s);
    Word w;
    while (w.length() < depth - 1) w = w.child(static_cast<int>(rng() % 3));
    out.push_back(w);
  }
  return out;
}

}  // namespace sg
