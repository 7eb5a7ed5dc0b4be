#include "sgwalk/conductance.hpp"

#include <stdexcept>

namespace sg {

void validate(const ConductanceParams& p) {
  if (!(p.lambda > 0.0 && p.lambda < 1.0)) throw std::invalid_argument("lambda must lie in (0,1)");
  if (!(p.gamma > 0.0 && p.gamma < p.lambda)) throw std::invalid_argument("gamma must lie in (0,lambda)");
  if (!(p.c1 > 0.0)) throw std::invalid_argument("c1 must be positive");
  if (!(p.c2 > 0.0)) throw std::invalid_argument("c2 must be positive");
}

bool in_regular_regime(const ConductanceParams& p) { return p.lambda > 0.2 && p.lambda < 1.0 / 3.0; }

double conductance(const ConductanceParams& params, const Word& x, const Word& y) {
  for (const WordNeighbor& nb : implicit_neighbors(x)) {
    if (nb.word == y) {
      const int level = nb.kind == EdgeKind::Vertical ? std::min(x.length(), y.length()) : x.length();
      return edge_conductance(nb.kind, level, params);
    }
  }
  throw std::invalid_argument("words " + x.to_string() + " and " + y.to_string() + " are not adjacent");
}

double pi_weight(const ConductanceParams& params, const Word& x) {
  double total = 0.0;
  for (const WordNeighbor& nb : implicit_neighbors(x)) {
    const int level = nb.kind == EdgeKind::Vertical ? std::min(x.length(), nb.word.length()) : x.length();
    total += edge_conductance(nb.kind, level, params);
  }
  return total;
}

double measure_m(const ConductanceParams& params, const Word& x) {
  return std::pow(params.gamma / (3.0 * params.lambda), x.length());
}

double measure_total(const ConductanceParams& params) { return 1.0 / (1.0 - params.gamma / params.lambda); }

double transition_probability(const ConductanceParams& params, const Word& x, const Word& y) {
  return conductance(params, x, y) / pi_weight(params, x);
}

WeightedGraph::WeightedGraph(std::shared_ptr<const Graph> graph, ConductanceParams params)
    : graph_(std::move(graph)), params_(params) {
  validate(params_);
  const Graph& g = *graph_;
  pi_.assign(g.node_count(), 0.0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const int lu = g.level(u);
    double total = 0.0;
    for (const Neighbor& nb : g.neighbors(u)) {
      const int level = nb.kind == EdgeKind::Vertical ? std::min(lu, g.level(nb.id)) : lu;
      total += edge_conductance(nb.kind, level, params_);
    }
    pi_[u] = total;
  }
}

WeightedGraph::WeightedGraph(int depth, ConductanceParams params)
    : WeightedGraph(std::make_shared<const Graph>(Graph::build(depth)), params) {}

double WeightedGraph::conductance(const Word& x, const Word& y) const {
  const NodeId u = graph_->id(x);
  const NodeId v = graph_->id(y);
  for (const Neighbor& nb : graph_->neighbors(u)) {
    if (nb.id == v) {
      const int level = nb.kind == EdgeKind::Vertical ? std::min(x.length(), y.length()) : x.length();
      return edge_conductance(nb.kind, level, params_);
    }
  }
  throw std::invalid_argument("words " + x.to_string() + " and " + y.to_string() + " are not adjacent");
}

double WeightedGraph::pi_weight(const Word& x) const {
  if (x.length() > graph_->depth() - 1)
    throw std::out_of_range("pi(" + x.to_string() + ") needs level <= " + std::to_string(graph_->depth() - 1));
  return pi_[graph_->id(x)];
}

}  // namespace sg
