#pragma once

#include "sgwalk/address.hpp"
#include "sgwalk/graph.hpp"

#include <cmath>
#include <memory>
#include <string>
#include <vector>

namespace sg {

/// Parameters of the lambda-return-ratio conductances and of the reference
/// measure m(x) = (gamma / (3 lambda))^|x|.
template <typename Scalar>
struct BasicConductanceParams {
  Scalar lambda = Scalar(1) / Scalar(4);
  Scalar c1 = Scalar(1);
  Scalar c2 = Scalar(1);
  Scalar gamma = Scalar(1) / Scalar(8);
};

using ConductanceParams = BasicConductanceParams<double>;

/// Throws std::invalid_argument naming the violated constraint
/// (0 < gamma < lambda < 1, c1 > 0, c2 > 0).
void validate(const ConductanceParams& params);

/// lambda in (1/5, 1/3), where the boundary form is regular.
bool in_regular_regime(const ConductanceParams& params);

/// beta = -log(lambda) / log 2.
inline double beta_of(double lambda) { return -std::log(lambda) / std::log(2.0); }

/// alpha = log 3 / log 2, the Hausdorff dimension of the gasket.
inline double gasket_dimension() { return std::log(3.0) / std::log(2.0); }

/// (3 lambda)^-n, the conductance scale of level n.
template <typename Scalar>
Scalar level_scale(const Scalar& lambda, int n) {
  Scalar base = Scalar(1) / (Scalar(3) * lambda);
  Scalar out = Scalar(1);
  for (int i = 0; i < n; ++i) out *= base;
  return out;
}

/// Conductance of an edge of the given kind. `level` is the upper level of
/// a vertical edge (n for an edge between n and n+1) and the common level
/// of a horizontal edge.
template <typename Scalar>
Scalar edge_conductance(EdgeKind kind, int level, const BasicConductanceParams<Scalar>& params) {
  switch (kind) {
    case EdgeKind::Vertical:
      return level_scale(params.lambda, level);
    case EdgeKind::HorizontalI:
      return params.c1 * level_scale(params.lambda, level);
    case EdgeKind::HorizontalII:
      return params.c2 * level_scale(params.lambda, level);
  }
  return Scalar(0);
}

/// Conductance c(x,y) for two adjacent words of the infinite graph.
/// Throws std::invalid_argument when x and y are not adjacent.
double conductance(const ConductanceParams& params, const Word& x, const Word& y);

/// pi(x) = sum_y c(x,y), computed from the local structure of the infinite graph.
double pi_weight(const ConductanceParams& params, const Word& x);

/// m(x) = (gamma / (3 lambda))^|x|.
double measure_m(const ConductanceParams& params, const Word& x);

/// Total mass sum_n (gamma/lambda)^n = 1 / (1 - gamma/lambda).
double measure_total(const ConductanceParams& params);

/// P(x,y) = c(x,y) / pi(x).
double transition_probability(const ConductanceParams& params, const Word& x, const Word& y);

/// Conductances attached to a materialized ball of the graph, with pi cached
/// per node. pi is only complete below the truncation level.
class WeightedGraph {
 public:
  WeightedGraph(std::shared_ptr<const Graph> graph, ConductanceParams params);
  WeightedGraph(int depth, ConductanceParams params);

  const Graph& graph() const { return *graph_; }
  std::shared_ptr<const Graph> graph_ptr() const { return graph_; }
  const ConductanceParams& params() const { return params_; }

  /// Conductance of the stored edge between two materialized nodes.
  double conductance(const Word& x, const Word& y) const;

  /// pi(x) summed over the materialized adjacency. Throws std::out_of_range
  /// for nodes at the truncation level, whose children are missing.
  double pi_weight(const Word& x) const;

  double measure_m(const Word& x) const { return sg::measure_m(params_, x); }

 private:
  std::shared_ptr<const Graph> graph_;
  ConductanceParams params_;
  std::vector<double> pi_;
};

}  // namespace sg
