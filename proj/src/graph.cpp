#include "sgwalk/graph.hpp"

#include "sgwalk/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace sg {

const char* to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Vertical:
      return "vertical";
    case EdgeKind::HorizontalI:
      return "horizontal_I";
    case EdgeKind::HorizontalII:
      return "horizontal_II";
  }
  return "unknown";
}

std::optional<Word> cross_partner(const Word& w) {
  if (w.is_constant()) return std::nullopt;
  const int j = w.last();
  int k = 0;
  WordCode rest = w.code();
  while (static_cast<int>(rest % 3) == j) {
    rest /= 3;
    ++k;
  }
  const auto i = static_cast<WordCode>(rest % 3);
  const WordCode head = rest / 3;
  const WordCode run = (pow3(k) - 1) / 2;
  const WordCode code = (head * 3 + static_cast<WordCode>(j)) * pow3(k) + i * run;
  return Word::from_code(w.length(), code);
}

NeighborList implicit_neighbors(const Word& w) {
  NeighborList out;
  if (!w.is_root()) out.push(w.parent(), EdgeKind::Vertical);
  for (int d = 0; d < 3; ++d) out.push(w.child(d), EdgeKind::Vertical);
  if (!w.is_root()) {
    const Word p = w.parent();
    for (int d = 0; d < 3; ++d)
      if (d != w.last()) out.push(p.child(d), EdgeKind::HorizontalI);
    if (auto partner = cross_partner(w)) out.push(*partner, EdgeKind::HorizontalII);
  }
  return out;
}

std::uint64_t ball_size(int depth) { return static_cast<std::uint64_t>((pow3(depth + 1) - 1) / 2); }

std::uint64_t level_offset(int level) { return static_cast<std::uint64_t>((pow3(level) - 1) / 2); }

Graph Graph::build(int depth, std::size_t memory_budget) {
  if (depth < 1) throw std::invalid_argument("graph depth must be at least 1");
  if (depth > 19) throw std::length_error("graph depth " + std::to_string(depth) + " exceeds the 32-bit node index");
  const std::uint64_t nodes = ball_size(depth);
  // Up to 7 neighbors per node plus the row index.
  const std::uint64_t footprint = nodes * (7 * sizeof(Neighbor) + sizeof(std::uint32_t));
  if (footprint > memory_budget)
    throw std::length_error("graph depth " + std::to_string(depth) + " needs about " + std::to_string(footprint >> 20) +
                            " MiB, above the memory budget");

  std::vector<std::vector<Neighbor>> horizontal(nodes);
  for (int n = 1; n <= depth; ++n) {
    const std::uint64_t count = static_cast<std::uint64_t>(pow3(n));
    const std::uint64_t base = level_offset(n);
    const std::int64_t side = (std::int64_t{1} << n) + 1;
    std::unordered_map<std::int64_t, std::vector<std::uint64_t>> by_corner;
    by_corner.reserve(count * 2);
    for (std::uint64_t c = 0; c < count; ++c) {
      const auto [a, b] = cell_origin(Word::from_code(n, c));
      by_corner[a * side + b].push_back(c);
      by_corner[(a + 1) * side + b].push_back(c);
      by_corner[a * side + b + 1].push_back(c);
    }
    for (const auto& [corner, cells] : by_corner) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        for (std::size_t j = i + 1; j < cells.size(); ++j) {
          const Word x = Word::from_code(n, cells[i]);
          const Word y = Word::from_code(n, cells[j]);
          const EdgeKind kind = vertex_point(x) == vertex_point(y) ? EdgeKind::HorizontalII : EdgeKind::HorizontalI;
          horizontal[base + cells[i]].push_back({static_cast<NodeId>(base + cells[j]), kind});
          horizontal[base + cells[j]].push_back({static_cast<NodeId>(base + cells[i]), kind});
        }
      }
    }
  }

  Graph g;
  g.depth_ = depth;
  g.adj_start_.reserve(nodes + 1);
  g.adj_start_.push_back(0);
  for (int n = 0; n <= depth; ++n) {
    const std::uint64_t count = static_cast<std::uint64_t>(pow3(n));
    const std::uint64_t base = level_offset(n);
    for (std::uint64_t c = 0; c < count; ++c) {
      if (n > 0) g.adj_.push_back({static_cast<NodeId>(level_offset(n - 1) + c / 3), EdgeKind::Vertical});
      if (n < depth) {
        const std::uint64_t child_base = level_offset(n + 1) + 3 * c;
        for (std::uint64_t d = 0; d < 3; ++d) g.adj_.push_back({static_cast<NodeId>(child_base + d), EdgeKind::Vertical});
      }
      auto& h = horizontal[base + c];
      std::sort(h.begin(), h.end(), [](const Neighbor& l, const Neighbor& r) { return l.id < r.id; });
      g.adj_.insert(g.adj_.end(), h.begin(), h.end());
      g.adj_start_.push_back(static_cast<std::uint32_t>(g.adj_.size()));
    }
  }
  return g;
}

NodeId Graph::id(const Word& w) const {
  if (!contains(w)) throw std::out_of_range("word " + w.to_string() + " lies outside the ball of depth " + std::to_string(depth_));
  return static_cast<NodeId>(level_offset(w.length()) + w.index());
}

int Graph::level(NodeId id) const {
  int n = 0;
  while (n < depth_ && level_offset(n + 1) <= id) ++n;
  return n;
}

Word Graph::word(NodeId id) const {
  const int n = level(id);
  return Word::from_code(n, id - level_offset(n));
}

std::vector<int> bfs_distances(const Graph& g, NodeId source) {
  std::vector<int> dist(g.node_count(), -1);
  std::vector<NodeId> queue;
  queue.reserve(g.node_count());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (const Neighbor& nb : g.neighbors(u)) {
      if (dist[nb.id] < 0) {
        dist[nb.id] = dist[u] + 1;
        queue.push_back(nb.id);
      }
    }
  }
  return dist;
}

namespace {

void check_margin(const Graph& g, const Word& x, const Word& y) {
  if (std::max(x.length(), y.length()) > g.depth() - 2)
    throw std::invalid_argument("distance margin violated: words must lie at level <= " + std::to_string(g.depth() - 2));
}

}  // namespace

int graph_distance(const Graph& g, const Word& x, const Word& y) {
  check_margin(g, x, y);
  if (x == y) return 0;
  return bfs_distances(g, g.id(x))[g.id(y)];
}

HalfInteger gromov_product(const Graph& g, const Word& x, const Word& y) {
  const int d = graph_distance(g, x, y);
  return {static_cast<std::int64_t>(x.length()) + y.length() - d};
}

double rho_a(const Graph& g, const Word& x, const Word& y, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("rho_a requires a > 0");
  if (x == y) {
    check_margin(g, x, y);
    return 0.0;
  }
  return std::exp(-a * gromov_product(g, x, y).value());
}

HolderReport holder_check(const Graph& g, std::span<const std::pair<Word, Word>> pairs, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("holder_check requires a > 0");
  HolderReport report;
  report.expected_slope = std::log(2.0) / a;
  report.min_ratio = std::numeric_limits<double>::infinity();
  report.max_ratio = 0.0;

  std::unordered_map<Word, std::vector<int>> bfs_cache;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pairs) {
    if (x.length() < 6 || y.length() < 6) throw std::invalid_argument("holder_check needs words of depth >= 6");
    check_margin(g, x, y);
    const double euclid = (vertex_point(x).to_plane() - vertex_point(y).to_plane()).norm();
    if (euclid == 0.0) {
      ++report.degenerate;
      continue;
    }
    auto it = bfs_cache.find(x);
    if (it == bfs_cache.end()) it = bfs_cache.emplace(x, bfs_distances(g, g.id(x))).first;
    const int d = it->second[g.id(y)];
    const double gp = 0.5 * static_cast<double>(x.length() + y.length() - d);
    const double log_rho = -a * gp;
    const double log_euclid = std::log(euclid);
    const double ratio = euclid / std::exp(log_rho * report.expected_slope);
    report.min_ratio = std::min(report.min_ratio, ratio);
    report.max_ratio = std::max(report.max_ratio, ratio);
    sx += log_rho;
    sy += log_euclid;
    sxx += log_rho * log_rho;
    sxy += log_rho * log_euclid;
    ++report.pairs_used;
  }
  if (report.pairs_used == 0) throw std::invalid_argument("degenerate sample: every pair maps to a single point");
  const double n = static_cast<double>(report.pairs_used);
  const double denom = n * sxx - sx * sx;
  report.slope = denom > 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  return report;
}

std::vector<std::pair<Word, Word>> sample_scale_pairs(int depth, std::size_t count, std::uint64_t seed) {
  if (depth < 1) throw std::invalid_argument("depth must be positive");
  std::vector<std::pair<Word, Word>> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Philox4x32 rng(seed, s);
    const int common = static_cast<int>(rng() % static_cast<std::uint32_t>(depth));
    Word x;
    for (int i = 0; i < common; ++i) x = x.child(static_cast<int>(rng() % 3));
    Word y = x;
    const int dx = static_cast<int>(rng() % 3);
    const int dy = (dx + 1 + static_cast<int>(rng() % 2)) % 3;
    x = x.child(dx);
    y = y.child(dy);
    while (x.length() < depth) {
      x = x.child(static_cast<int>(rng() % 3));
      y = y.child(static_cast<int>(rng() % 3));
    }
    out.emplace_back(x, y);
  }
  return out;
}

double ultrametric_excess(int ball_depth, double a) {
  if (ball_depth < 1) throw std::invalid_argument("ball depth must be positive");
  const Graph g = Graph::build(ball_depth + 2);
  const std::size_t m = ball_size(ball_depth);
  std::vector<double> rho(m * m, 0.0);
  std::vector<int> levels(m);
  for (std::size_t i = 0; i < m; ++i) levels[i] = g.level(static_cast<NodeId>(i));
  for (std::size_t i = 0; i < m; ++i) {
    const auto dist = bfs_distances(g, static_cast<NodeId>(i));
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      rho[i * m + j] = std::exp(-a * 0.5 * static_cast<double>(levels[i] + levels[j] - dist[j]));
    }
  }
  double worst = 1.0;
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = x + 1; y < m; ++y) {
      const double rxy = rho[x * m + y];
      for (std::size_t z = 0; z < m; ++z) {
        const double bound = std::max(rho[x * m + z], rho[z * m + y]);
        if (bound > 0.0) worst = std::max(worst, rxy / bound);
      }
    }
  }
  return worst - 1.0;
}

void write_edge_csv(const Graph& g, std::ostream& out) {
  out << "from,to,kind,level_from,level_to\n";
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const Word wu = g.word(u);
    for (const Neighbor& nb : g.neighbors(u)) {
      if (nb.id < u) continue;
      const Word wv = g.word(nb.id);
      out << '"' << wu.to_string() << "\",\"" << wv.to_string() << "\"," << to_string(nb.kind) << ','
          << wu.length() << ',' << wv.length() << '\n';
    }
  }
}

}  // namespace sg
