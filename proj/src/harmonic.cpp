#include "sgwalk/harmonic.hpp"

#include "sgwalk/green.hpp"

#include <algorithm>
#include <cmath>

namespace sg {

bool cells_touch(const Word& p, const Word& q) {
  const auto vp = cell_vertices(p);
  const auto vq = cell_vertices(q);
  for (const LatticePoint& a : vp)
    for (const LatticePoint& b : vq)
      if (a == b) return true;
  return p.is_prefix_of(q) || q.is_prefix_of(p);
}

SeparatingFunction build_separating_function(const ConductanceParams& params, const Word& p, const Word& q,
                                             int depth, unsigned workers) {
  validate(params);
  SeparatingFunction out;
  out.p = p;
  out.q = q;
  out.seed_level = p.length() + 1;
  out.values = separating_function<double>(p, q, depth, workers);
  out.energies = level_energies(out.values, params, workers);
  return out;
}

bool CellFunction::is_constant() const {
  return std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); });
}

CellFunction CellFunction::from_points(int level, const std::function<double(const Eigen::Vector2d&)>& f) {
  CellFunction u;
  u.level = level;
  u.values.resize(static_cast<std::size_t>(pow3(level)));
  for (std::size_t c = 0; c < u.values.size(); ++c) u.values[c] = f(cell_barycenter(Word::from_code(level, c)));
  return u;
}

CellFunction CellFunction::constant(int level, double value) {
  return {level, std::vector<double>(static_cast<std::size_t>(pow3(level)), value)};
}

BallFunction poisson_integral(const TruncatedKernel& kernel, const CellFunction& u) {
  const int depth = kernel.depth();
  if (u.level < 0 || u.level > depth)
    throw std::invalid_argument("boundary data level must lie in [0, N]");
  const auto first = static_cast<Eigen::Index>(level_offset(depth));
  const auto group = static_cast<Eigen::Index>(pow3(depth - u.level));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(kernel.pi().size());
  for (Eigen::Index z = 0; first + z < rhs.size(); ++z)
    rhs[first + z] = kernel.exit_conductance() * u.values[static_cast<std::size_t>(z / group)];
  const Eigen::VectorXd h = kernel.solve(rhs);

  BallFunction out = BallFunction::zeros(depth);
  Eigen::Index at = 0;
  for (auto& level : out.levels)
    for (double& v : level.values) v = h[at++];
  return out;
}

Word cell_ray(const Word& cell, int depth) {
  Word w = cell;
  for (int i = 0; w.length() < depth; ++i) w = w.child(i % 3);
  return w;
}

double extension_tail_bound(const ConductanceParams& params, double energy, int n) {
  const double r = 3.0 * params.lambda;
  if (!(r < 1.0)) throw std::invalid_argument("boundary extension needs lambda < 1/3");
  return std::sqrt(2.0 * energy) / (1.0 - std::sqrt(r)) * std::pow(r, 0.5 * n);
}

BoundaryTrace extend_to_boundary(const ConductanceParams& params, const BallFunction& v, int level,
                                 unsigned workers) {
  if (!(3.0 * params.lambda < 1.0)) throw std::invalid_argument("boundary extension needs lambda < 1/3");
  const int depth = v.depth();
  if (level < 0 || level > depth) throw std::invalid_argument("trace level must lie in [0, N]");
  BoundaryTrace out;
  out.level = level;
  out.depth = depth;
  const LevelEnergies<double> e = level_energies(v, params, workers);
  for (double h : e.horizontal) out.energy += h;
  for (double x : e.vertical) out.energy += x;
  out.tail_bound = extension_tail_bound(params, out.energy, depth);
  out.values.resize(static_cast<std::size_t>(pow3(level)));
  for (std::size_t c = 0; c < out.values.size(); ++c) out.values[c] = v(cell_ray(Word::from_code(level, c), depth));
  return out;
}

}  // namespace sg
