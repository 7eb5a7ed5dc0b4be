#pragma once

#include "sgwalk/address.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace sg {

enum class EdgeKind : std::uint8_t { Vertical, HorizontalI, HorizontalII };

const char* to_string(EdgeKind kind);

struct WordNeighbor {
  Word word;
  EdgeKind kind;
};

/// Neighbors of one node in the infinite graph: father, three children and at
/// most three same-level neighbors (two siblings and one cross-cell partner).
class NeighborList {
 public:
  static constexpr int kCapacity = 7;

  void push(const Word& w, EdgeKind kind) { items_[size_++] = {w, kind}; }
  int size() const { return size_; }
  const WordNeighbor& operator[](int i) const { return items_[i]; }
  const WordNeighbor* begin() const { return items_.data(); }
  const WordNeighbor* end() const { return items_.data() + size_; }

 private:
  std::array<WordNeighbor, kCapacity> items_{};
  int size_ = 0;
};

/// The same-level word whose cell meets K_w at the point p_w, if any.
/// Writing w = u i j^k with j != i, the partner is u j i^k; constant words
/// sit at the outer corners of the gasket and have none.
std::optional<Word> cross_partner(const Word& w);

/// Neighbors in the infinite graph, derived from the address alone.
NeighborList implicit_neighbors(const Word& w);

/// Number of nodes in the ball B_N, sum_{n<=N} 3^n.
std::uint64_t ball_size(int depth);
/// Index of the first level-n node in level-major order, (3^n - 1) / 2.
std::uint64_t level_offset(int level);

using NodeId = std::uint32_t;

struct Neighbor {
  NodeId id;
  EdgeKind kind;
};

/// The Sierpinski graph truncated to the ball B_N. Immutable once built.
///
/// Horizontal edges are found geometrically: two level-n cells are joined
/// when they share a corner, and the edge is type II exactly when both
/// words map to the same vertex point.
class Graph {
 public:
  static constexpr std::size_t kDefaultMemoryBudget = std::size_t{2} << 30;

  /// Throws std::invalid_argument for depth < 1 and std::length_error when
  /// the estimated footprint exceeds `memory_budget` bytes.
  static Graph build(int depth, std::size_t memory_budget = kDefaultMemoryBudget);

  int depth() const { return depth_; }
  std::size_t node_count() const { return adj_start_.size() - 1; }
  std::size_t edge_count() const { return adj_.size() / 2; }

  bool contains(const Word& w) const { return w.length() <= depth_; }
  NodeId id(const Word& w) const;
  Word word(NodeId id) const;
  int level(NodeId id) const;

  std::span<const Neighbor> neighbors(NodeId id) const {
    return {adj_.data() + adj_start_[id], adj_.data() + adj_start_[id + 1]};
  }

 private:
  int depth_ = 0;
  std::vector<std::uint32_t> adj_start_;
  std::vector<Neighbor> adj_;
};

/// Unit-weight BFS distances from `source` over the truncated ball.
std::vector<int> bfs_distances(const Graph& g, NodeId source);

/// Shortest-path distance. Requires max(|x|,|y|) <= N-2 so that the answer
/// agrees with the infinite graph; throws std::invalid_argument otherwise.
int graph_distance(const Graph& g, const Word& x, const Word& y);

/// Exact half-integer value stored as twice the number.
struct HalfInteger {
  std::int64_t twice = 0;
  double value() const { return 0.5 * static_cast<double>(twice); }
  friend bool operator==(const HalfInteger&, const HalfInteger&) = default;
};

/// |x ^ y| = (|x| + |y| - d(x,y)) / 2.
HalfInteger gromov_product(const Graph& g, const Word& x, const Word& y);

/// rho_a(x,y) = exp(-a |x ^ y|) for x != y, and 0 on the diagonal.
double rho_a(const Graph& g, const Word& x, const Word& y, double a);

struct HolderReport {
  double slope = 0.0;           // least-squares slope of log|Phi-Phi| on log rho_a
  double expected_slope = 0.0;  // log 2 / a
  double min_ratio = 0.0;       // min over pairs of |Phi-Phi| / rho_a^(log2/a)
  double max_ratio = 0.0;
  std::size_t pairs_used = 0;
  std::size_t degenerate = 0;   // pairs mapped to the same gasket point
};

/// Compares Euclidean distances of vertex points with rho_a over the pairs.
/// Throws std::invalid_argument when every pair is degenerate.
HolderReport holder_check(const Graph& g, std::span<const std::pair<Word, Word>> pairs, double a);

/// Pairs of words at `depth` whose common prefix length is drawn uniformly
/// from [0, depth-1], so that all scales are represented.
std::vector<std::pair<Word, Word>> sample_scale_pairs(int depth, std::size_t count, std::uint64_t seed);

/// Smallest a' with rho_a(x,y) <= (1+a') max(rho_a(x,z), rho_a(z,y)) over all
/// triples of B_ball, with distances taken in B_{ball+2}.
double ultrametric_excess(int ball_depth, double a);

/// Edge list CSV: from,to,kind,level_from,level_to (each edge once).
void write_edge_csv(const Graph& g, std::ostream& out);

}  // namespace sg
