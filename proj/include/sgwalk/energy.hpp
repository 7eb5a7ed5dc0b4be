#pragma once

#include "sgwalk/conductance.hpp"
#include "sgwalk/harmonic.hpp"

#include <Eigen/Core>

#include <functional>
#include <span>
#include <vector>

namespace sg {

class TruncatedKernel;

enum class EnergyClass { Convergent, Divergent, Critical };

const char* to_string(EnergyClass c);

/// Per-level ratios within [0.98, 1.02] are too close to call at finite depth.
EnergyClass classify_ratio(double ratio);

struct EnergyReport {
  std::vector<double> horizontal;  // h_n
  std::vector<double> vertical;    // v_n, edges between n and n+1
  double total = 0.0;
  double fitted_ratio = 0.0;       // exp of the least-squares slope of log h_n over levels with h_n > 0
  EnergyClass classification = EnergyClass::Convergent;
};

/// (1/2) sum over ordered neighbor pairs of c(x,y) (u(x) - u(y))^2 on B_N,
/// split by level. The level-N nodes' edges to level N+1 are not included.
EnergyReport graph_energy(const ConductanceParams& params, const BallFunction& u, unsigned workers = 1);

/// Least-squares per-level growth factor of the positive entries.
double fitted_ratio(std::span<const double> per_level);

/// Energy of the Poisson extension Hu: the edges of B_N plus the edges from
/// level N to the boundary layer, where the extension takes the values of u.
double extension_energy(const TruncatedKernel& kernel, const BallFunction& hu, const CellFunction& u,
                        unsigned workers = 1);

/// sum over w != w' of (u_w - u_w')^2 |x_w - x_w'|^-(alpha + beta) 3^-2L with
/// x_w the barycenter of K_w and alpha = log 3 / log 2. Requires L <= 8.
double jump_energy(const CellFunction& u, double beta, unsigned workers = 1);

struct NaimReport {
  std::vector<double> graph_energies;
  std::vector<double> jump_energies;
  std::vector<double> ratios;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double band() const { return max_ratio / min_ratio; }
};

/// r(u) = energy of Hu / jump energy of u with beta = -log lambda / log 2.
/// Throws std::invalid_argument for a constant member of the family.
NaimReport naim_comparability(const TruncatedKernel& kernel, std::span<const CellFunction> family,
                              unsigned workers = 1);

/// Ten smooth, non-constant boundary functions sampled on level-L cells:
/// polynomials, trigonometric functions, a bump and a Lipschitz kink.
std::vector<CellFunction> smooth_test_family(int level);

/// C^2 = max{14 G(o,o) / pi(o), 4 / m(o)} with G(o,o) = 1 / (1 - lambda).
double trace_constant(const ConductanceParams& params);

struct TraceReport {
  double lhs = 0.0;        // sum_w u_w^2 3^-L
  double energy = 0.0;     // extension energy of Hu
  double l2_mass = 0.0;    // sum_x Hu(x)^2 m(x) over B_N
  double c_squared = 0.0;
  double rhs = 0.0;        // c_squared * (energy + l2_mass)
  double slack = 0.0;      // rhs / lhs
};

/// Both terms on the right are truncated sums of positive quantities, so
/// the computed right side never exceeds the true one. Requires lambda in (1/5, 1/3).
TraceReport trace_inequality_check(const TruncatedKernel& kernel, const CellFunction& u, unsigned workers = 1);

/// sum over level-n horizontal edges of c(x,y) (f(p_x) - f(p_y))^2.
double sphere_pullback_energy(const ConductanceParams& params, const std::function<double(const Eigen::Vector2d&)>& f,
                              int n);

struct ScanEntry {
  double lambda = 0.0;
  double beta = 0.0;
  double ratio = 0.0;         // A2 / A1 of a non-degenerate triangle
  double growth_ratio = 0.0;  // fitted per-level ratio of the separating function at depth N
  EnergyClass classification = EnergyClass::Convergent;
  EnergyClass growth_classification = EnergyClass::Convergent;
};

struct ScanReport {
  int depth = 0;
  std::vector<ScanEntry> entries;
  double lambda_hat = 0.0;         // ratio route
  double beta_hat = 0.0;
  double lambda_hat_growth = 0.0;  // finite-depth growth route
  double beta_hat_growth = 0.0;
};

/// Classifies each lambda of the grid and bisects the point where the
/// per-level ratio crosses 1, once from the triangle recursion and once from
/// the separating function of cells 00 and 11 built to depth N.
/// Throws std::invalid_argument for N < 7 or a grid that does not bracket the crossing.
ScanReport walk_dimension_scan(std::span<const double> lambdas, int depth, unsigned workers = 1);

}  // namespace sg
