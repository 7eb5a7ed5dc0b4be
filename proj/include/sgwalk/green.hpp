#pragma once

#include "sgwalk/address.hpp"
#include "sgwalk/conductance.hpp"
#include "sgwalk/graph.hpp"

#include <Eigen/Sparse>

#include <memory>
#include <span>
#include <vector>

namespace sg {

struct SolverOptions {
  double tolerance = 1e-12;  // relative residual
  int max_iterations = 50000;
};

/// The walk on B_N killed when it steps from level N to a child outside the
/// ball. All Green quantities reduce to the symmetric positive definite system
/// (D - C) h = r, where D = diag(pi) uses the full-graph pi and C holds the
/// conductances inside B_N: G_N(x,y) = [(D - C)^-1]_{xy} pi(y).
class TruncatedKernel {
 public:
  TruncatedKernel(std::shared_ptr<const Graph> graph, const ConductanceParams& params, SolverOptions options = {});
  TruncatedKernel(const WeightedGraph& wg, SolverOptions options = {});
  TruncatedKernel(const ConductanceParams& params, int depth, SolverOptions options = {});

  int depth() const { return graph_->depth(); }
  const Graph& graph() const { return *graph_; }
  const ConductanceParams& params() const { return params_; }

  /// P restricted to B_N. Rows of level-N nodes lose the mass 3 c_N / pi.
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& transition() const { return transition_; }
  const Eigen::VectorXd& pi() const { return pi_; }
  /// Conductance from one level-N node to its three removed children.
  double exit_conductance() const { return exit_conductance_; }

  /// (D - C)^-1 rhs by preconditioned conjugate gradients. Throws
  /// std::runtime_error when the iteration does not reach the tolerance.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  /// G_N(., y)
  Eigen::VectorXd green_column(const Word& y) const;
  /// G_N(x, .)
  Eigen::VectorXd green_row(const Word& x) const;
  double green(const Word& x, const Word& y) const;

  /// Exit probabilities: entry z (a level-N node) is P_x[killed from z].
  Eigen::VectorXd exit_distribution(const Word& x) const;

 private:
  void assemble();

  std::shared_ptr<const Graph> graph_;
  ConductanceParams params_;
  SolverOptions options_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> transition_;
  Eigen::SparseMatrix<double> system_;
  Eigen::VectorXd pi_;
  double exit_conductance_ = 0.0;
};

struct GreenEstimate {
  int depth = 0;
  double at_depth = 0.0;     // G_N
  double at_depth_1 = 0.0;   // G_{N+1}
  double at_depth_2 = 0.0;   // G_{N+2}
  double extrapolated = 0.0; // Aitken delta-squared limit of the three
};

/// G_N(x,y) together with the N+1 and N+2 values and an extrapolated limit.
GreenEstimate green(const ConductanceParams& params, int depth, const Word& x, const Word& y,
                    SolverOptions options = {});

/// Aitken delta-squared limit of a0, a1, a2 (a2 when the differences do not shrink).
double aitken_limit(double a0, double a1, double a2);

/// Closed forms for the killed chain. The level process is a birth-death chain
/// with down:up = lambda:1 whatever the horizontal conductances are.
double green_root_exact(double lambda, int depth);
double first_passage_exact(double lambda, int level, int depth);

/// F_N(x, o) = G_N(x, o) / G_N(o, o).
double first_passage(const TruncatedKernel& kernel, const Word& x);
/// F_N(x, o) for every node of the ball from a single solve.
Eigen::VectorXd first_passage_all(const TruncatedKernel& kernel);

/// Exit distribution from x grouped by the level-L ancestor of the exit node.
/// Entry w (indexed by the word code) is the hitting mass of cell w, and
/// 3^L times it is the discrete Martin density K(x, w). Requires L <= N-3.
std::vector<double> harmonic_measure(const TruncatedKernel& kernel, const Word& x, int level);

/// G_N(x, y) / G_N(o, y) for a deep proxy y of a boundary point. Requires
/// |y| = N-1 and |x| <= N-4.
double martin_kernel(const TruncatedKernel& kernel, const Word& x, const Word& xi);

/// lambda^|x| (3/lambda)^g with g the Gromov product of x and xi.
double martin_prediction(double lambda, int x_level, double gromov);

struct MartinSample {
  Word x;
  Word xi;
  double gromov = 0.0;
  double measured = 0.0;
  double predicted = 0.0;
  double ratio = 0.0;
};

struct MartinBand {
  std::vector<MartinSample> samples;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double band() const { return max_ratio / min_ratio; }
};

/// Measured over predicted Martin kernel for every (x, xi) pair. Gromov
/// products come from BFS on B_{N+1} so that |xi| = N-1 keeps the margin.
MartinBand martin_band(const TruncatedKernel& kernel, std::span<const Word> xs, std::span<const Word> xis,
                       unsigned workers = 1);

/// Random proxy words at level N-1.
std::vector<Word> sample_boundary_proxies(int depth, std::size_t count, std::uint64_t seed);

}  // namespace sg
