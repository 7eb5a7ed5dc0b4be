#pragma once

#include "sgwalk/address.hpp"
#include "sgwalk/conductance.hpp"
#include "sgwalk/graph.hpp"
#include "sgwalk/parallel.hpp"

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sg {

class TruncatedKernel;

/// Values at the three siblings w0, w1, w2 of one smallest triangle.
template <typename S>
struct TriangleValues {
  S a{}, b{}, c{};
};

/// The energy-minimizing values (x, y, z) at the three new midpoints, returned
/// in the a, b, c slots: x sits between a and b, y between b and c, z between a and c.
template <typename S>
TriangleValues<S> interpolate_triangle(const TriangleValues<S>& t) {
  const S two(2);
  const S five(5);
  return {(two * t.a + two * t.b + t.c) / five, (t.a + two * t.b + two * t.c) / five,
          (two * t.a + t.b + two * t.c) / five};
}

/// Values of the nine children, entry 3*i + d being the child d of sibling i.
/// Corner children keep their parent's value, so the three type-II pairs
/// (01,10), (12,21), (02,20) carry equal values.
template <typename S>
std::array<S, 9> refine_triangle(const TriangleValues<S>& t) {
  const TriangleValues<S> m = interpolate_triangle(t);
  return {t.a, m.a, m.c, m.a, t.b, m.b, m.c, m.b, t.c};
}

template <typename S>
struct EnergyRecursion {
  S a1{};  // level-n triangle energy
  S a2{};  // level-(n+1) horizontal energy of the nine children
  S a3{};  // vertical energy between the siblings and their children
  bool degenerate = false;   // a = b = c, everything vanishes
  bool ratios_hold = false;  // a2 * 5 lambda == a1 and a3 * 25 c1 == 14 a1, compared exactly
};

template <typename S>
EnergyRecursion<S> energy_recursion_check(const TriangleValues<S>& t, int n, const BasicConductanceParams<S>& params) {
  auto sq = [](const S& v) { return v * v; };
  auto ring = [&](const S& p, const S& q, const S& r) { return sq(p - q) + sq(q - r) + sq(p - r); };
  const S scale = level_scale(params.lambda, n);
  const S next = level_scale(params.lambda, n + 1);
  const std::array<S, 9> ch = refine_triangle(t);
  const std::array<S, 3> parent = {t.a, t.b, t.c};

  EnergyRecursion<S> out;
  out.a1 = params.c1 * scale * ring(t.a, t.b, t.c);
  S type_one(0);
  for (int i = 0; i < 3; ++i) type_one += ring(ch[3 * i], ch[3 * i + 1], ch[3 * i + 2]);
  const S type_two = sq(ch[1] - ch[3]) + sq(ch[5] - ch[7]) + sq(ch[2] - ch[6]);
  out.a2 = next * (params.c1 * type_one + params.c2 * type_two);
  S vertical(0);
  for (int i = 0; i < 3; ++i)
    for (int d = 0; d < 3; ++d) vertical += sq(parent[i] - ch[3 * i + d]);
  out.a3 = scale * vertical;
  out.degenerate = out.a1 == S(0);
  out.ratios_hold = out.a2 * S(5) * params.lambda == out.a1 && out.a3 * S(25) * params.c1 == S(14) * out.a1;
  return out;
}

/// Values on the 3^n nodes of one level, indexed by word code.
template <typename S>
struct LevelFunction {
  int level = 0;
  std::vector<S> values;

  const S& operator[](const Word& w) const { return values[w.index()]; }
  S& operator[](const Word& w) { return values[w.index()]; }
};

/// Interpolates every sibling triple of `f` into the next level. Triples are
/// independent, so they are split across `workers` threads.
template <typename S>
LevelFunction<S> refine_level(const LevelFunction<S>& f, unsigned workers = 1) {
  if (f.level < 1) throw std::invalid_argument("refinement needs a level with sibling triples (level >= 1)");
  LevelFunction<S> out;
  out.level = f.level + 1;
  out.values.resize(f.values.size() * 3);
  parallel_for(f.values.size() / 3, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t g = begin; g < end; ++g) {
      const std::array<S, 9> ch = refine_triangle(TriangleValues<S>{f.values[3 * g], f.values[3 * g + 1], f.values[3 * g + 2]});
      for (std::size_t k = 0; k < 9; ++k) out.values[9 * g + k] = ch[k];
    }
  });
  return out;
}

/// A function on the ball B_N stored level by level.
template <typename S>
struct BasicBallFunction {
  std::vector<LevelFunction<S>> levels;

  int depth() const { return static_cast<int>(levels.size()) - 1; }
  const S& operator()(const Word& w) const { return levels.at(w.length())[w]; }
  S& operator()(const Word& w) { return levels.at(w.length())[w]; }

  static BasicBallFunction zeros(int depth) {
    BasicBallFunction f;
    for (int n = 0; n <= depth; ++n) f.levels.push_back({n, std::vector<S>(static_cast<std::size_t>(pow3(n)), S(0))});
    return f;
  }
};

using BallFunction = BasicBallFunction<double>;

template <typename S>
struct LevelEnergies {
  std::vector<S> horizontal;  // h_n, n = 0..N
  std::vector<S> vertical;    // v_n for the edges between n and n+1, n = 0..N-1
};

/// Per-level energies, each unordered edge counted once. Levels are
/// independent and may be summed on separate workers; each level is summed
/// in code order, so the result does not depend on the worker count.
template <typename S>
LevelEnergies<S> level_energies(const BasicBallFunction<S>& f, const BasicConductanceParams<S>& params,
                                unsigned workers = 1) {
  const int depth = f.depth();
  LevelEnergies<S> out;
  out.horizontal.assign(depth + 1, S(0));
  out.vertical.assign(depth, S(0));
  parallel_for(static_cast<std::size_t>(depth + 1), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t ln = begin; ln < end; ++ln) {
      const int n = static_cast<int>(ln);
      const LevelFunction<S>& here = f.levels[n];
      S h(0);
      S v(0);
      for (std::size_t c = 0; c < here.values.size(); ++c) {
        const Word w = Word::from_code(n, c);
        if (n > 0) {
          for (const WordNeighbor& nb : implicit_neighbors(w)) {
            if (nb.kind == EdgeKind::Vertical || nb.word.index() <= c) continue;
            const S d = here.values[c] - here.values[nb.word.index()];
            h += edge_conductance(nb.kind, n, params) * d * d;
          }
        }
        if (n < depth) {
          const LevelFunction<S>& below = f.levels[n + 1];
          for (std::size_t k = 0; k < 3; ++k) {
            const S d = here.values[c] - below.values[3 * c + k];
            v += d * d;
          }
        }
      }
      out.horizontal[n] = h;
      if (n < depth) out.vertical[n] = level_scale(params.lambda, n) * v;
    }
  });
  return out;
}

/// The separating function of two non-adjacent level-m cells: zero on B_m,
/// one at level m+1 on the children of p and their horizontal neighbors,
/// zero elsewhere at that level, then refined down to level N.
/// Throws std::invalid_argument when the cells touch or the levels are
/// inconsistent, and std::logic_error if the seeding puts a one on a child of q.
template <typename S>
BasicBallFunction<S> separating_function(const Word& p, const Word& q, int depth, unsigned workers = 1);

/// True when the closed cells K_p and K_q share a point.
bool cells_touch(const Word& p, const Word& q);

template <typename S>
BasicBallFunction<S> separating_function(const Word& p, const Word& q, int depth, unsigned workers) {
  const int m = p.length();
  if (m < 1 || q.length() != m) throw std::invalid_argument("p and q must be words of the same positive length");
  if (p == q) throw std::invalid_argument("p and q must differ");
  if (depth < m + 1) throw std::invalid_argument("depth must be at least |p| + 1");
  if (cells_touch(p, q))
    throw std::invalid_argument("cells " + p.to_string() + " and " + q.to_string() + " are adjacent");

  BasicBallFunction<S> f;
  for (int n = 0; n <= m + 1; ++n) f.levels.push_back({n, std::vector<S>(static_cast<std::size_t>(pow3(n)), S(0))});
  LevelFunction<S>& seed = f.levels[m + 1];
  for (int d = 0; d < 3; ++d) {
    const Word child = p.child(d);
    seed[child] = S(1);
    for (const WordNeighbor& nb : implicit_neighbors(child))
      if (nb.kind != EdgeKind::Vertical) seed[nb.word] = S(1);
  }
  for (int d = 0; d < 3; ++d)
    if (seed[q.child(d)] != S(0))
      throw std::logic_error("seeding conflict: child " + q.child(d).to_string() + " of q receives the value 1");
  for (int n = m + 1; n < depth; ++n) f.levels.push_back(refine_level(f.levels.back(), workers));
  return f;
}

struct SeparatingFunction {
  Word p;
  Word q;
  int seed_level = 0;  // m + 1
  BallFunction values;
  LevelEnergies<double> energies;
};

SeparatingFunction build_separating_function(const ConductanceParams& params, const Word& p, const Word& q,
                                             int depth, unsigned workers = 1);

/// A boundary function that is constant on each level-L cell.
struct CellFunction {
  int level = 0;
  std::vector<double> values;  // indexed by cell code

  double operator[](const Word& w) const { return values[w.index()]; }
  bool is_constant() const;

  /// Samples f at the barycenter of every level-L cell.
  static CellFunction from_points(int level, const std::function<double(const Eigen::Vector2d&)>& f);
  static CellFunction constant(int level, double value);
};

/// Hu(x) = E_x[u(level-L cell of the exit point)] on the whole ball B_N: the
/// Dirichlet problem with boundary data u on the children of level N, solved
/// in one linear system. Values near level N carry the truncation error.
BallFunction poisson_integral(const TruncatedKernel& kernel, const CellFunction& u);

/// The ray into cell w used to read a boundary value: w followed by 012012...
Word cell_ray(const Word& cell, int depth);

/// sqrt(2C) / (1 - sqrt(3 lambda)) * (3 lambda)^(n/2), the bound on
/// |u(xi) - u(x_n)| for a function of energy C. Throws for lambda >= 1/3.
double extension_tail_bound(const ConductanceParams& params, double energy, int n);

struct BoundaryTrace {
  int level = 0;
  int depth = 0;
  std::vector<double> values;  // per level-L cell, read at depth N along cell_ray
  double energy = 0.0;
  double tail_bound = 0.0;
};

/// Reads v along the ray into each level-L cell at depth N, with the
/// certified distance to the continuous extension.
BoundaryTrace extend_to_boundary(const ConductanceParams& params, const BallFunction& v, int level,
                                 unsigned workers = 1);

}  // namespace sg
