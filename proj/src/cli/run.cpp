#include "sgwalk/cli.hpp"

#include "sgwalk/energy.hpp"
#include "sgwalk/graph.hpp"
#include "sgwalk/green.hpp"
#include "sgwalk/harmonic.hpp"
#include "sgwalk/rng.hpp"
#include "sgwalk/walk.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>

namespace sg::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Word word_arg(const std::string& text) { return text == "o" ? Word{} : Word::parse(text); }

std::string word_label(const Word& w) { return w.is_root() ? "o" : w.to_string(); }

struct Output {
  Json results = Json::object();
  Json references = Json::object();
  std::string csv;
};

Json config_echo(const RunConfig& c) {
  Json j;
  j["subcommand"] = c.subcommand;
  j["lambda"] = c.params.lambda;
  j["c1"] = c.params.c1;
  j["c2"] = c.params.c2;
  j["gamma"] = c.params.gamma;
  j["a"] = c.a;
  j["depth"] = c.depth;
  j["samples"] = c.samples;
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  j["workers"] = c.workers;
  j["x"] = c.x;
  j["y"] = c.y;
  j["level"] = c.level;
  j["p"] = c.p;
  j["q"] = c.q;
  j["function"] = c.function;
  j["count"] = c.count;
  j["lambda_min"] = c.lambda_min;
  j["lambda_max"] = c.lambda_max;
  j["steps"] = c.steps;
  j["step_budget"] = c.step_budget;
  j["overrun"] = c.overrun;
  return j;
}

Output build_graph(const RunConfig& c) {
  Output out;
  const Graph g = Graph::build(c.depth);
  std::vector<std::uint64_t> type_one(c.depth + 1, 0), type_two(c.depth + 1, 0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const int n = g.level(u);
    for (const Neighbor& nb : g.neighbors(u)) {
      if (nb.id <= u) continue;
      if (nb.kind == EdgeKind::HorizontalI) ++type_one[n];
      if (nb.kind == EdgeKind::HorizontalII) ++type_two[n];
    }
  }
  Json levels = Json::array();
  for (int n = 0; n <= c.depth; ++n) {
    std::set<LatticePoint> points;
    if (n > 0)
      for (std::uint64_t w = 0; w < static_cast<std::uint64_t>(pow3(n)); ++w) points.insert(vertex_point(Word::from_code(n, w)));
    Json l;
    l["level"] = n;
    l["nodes"] = static_cast<std::uint64_t>(pow3(n));
    l["type_I_edges"] = type_one[n];
    l["type_II_edges"] = type_two[n];
    l["distinct_vertex_points"] = points.size();
    levels.push_back(l);
    Json r;
    r["type_I_edges"] = n == 0 ? 0 : static_cast<std::uint64_t>(pow3(n));
    r["type_II_edges"] = n == 0 ? 0 : static_cast<std::uint64_t>((pow3(n) - 3) / 2);
    r["distinct_vertex_points"] = n == 0 ? 0 : level_vertex_count(n);
    out.references["level_" + std::to_string(n)] = r;
  }
  out.results["nodes"] = g.node_count();
  out.results["edges"] = g.edge_count();
  out.results["levels"] = levels;
  out.references["nodes"] = ball_size(c.depth);
  if (c.depth >= 8) {
    const auto pairs = sample_scale_pairs(c.depth - 2, 200, 0);
    const HolderReport h = holder_check(g, pairs, c.a);
    out.results["holder"] = {{"slope", h.slope},         {"min_ratio", h.min_ratio}, {"max_ratio", h.max_ratio},
                             {"pairs_used", h.pairs_used}, {"degenerate", h.degenerate}};
    out.references["holder_slope"] = h.expected_slope;
  }
  const int um_depth = std::min(c.depth, 5);
  out.results["ultrametric_excess"] = {{"ball_depth", um_depth}, {"a_prime", ultrametric_excess(um_depth, c.a)}};
  out.references["sqrt2_minus_1"] = std::sqrt(2.0) - 1.0;
  std::ostringstream csv;
  write_edge_csv(g, csv);
  out.csv = csv.str();
  return out;
}

Output green_cmd(const RunConfig& c) {
  Output out;
  const Word x = word_arg(c.x);
  const Word y = word_arg(c.y);
  if (x.length() > c.depth || y.length() > c.depth) throw std::invalid_argument("--x and --y must lie in B_N");
  const TruncatedKernel k0(c.params, c.depth);
  const Eigen::VectorXd column = k0.green_column(y);
  const double g0 = column[k0.graph().id(x)];
  const double g_yx = k0.green(y, x);
  const double g1 = TruncatedKernel(c.params, c.depth + 1).green(x, y);
  const double g2 = TruncatedKernel(c.params, c.depth + 2).green(x, y);
  out.results["x"] = word_label(x);
  out.results["y"] = word_label(y);
  out.results["G_N"] = g0;
  out.results["G_N+1"] = g1;
  out.results["G_N+2"] = g2;
  out.results["extrapolated"] = aitken_limit(g0, g1, g2);
  out.results["pi_x_G_xy"] = k0.pi()[k0.graph().id(x)] * g0;
  out.results["pi_y_G_yx"] = k0.pi()[k0.graph().id(y)] * g_yx;
  if (x.is_root() && y.is_root()) {
    out.references["G(o,o)"] = 1.0 / (1.0 - c.params.lambda);
    out.references["G_N(o,o)_killed_chain"] = green_root_exact(c.params.lambda, c.depth);
  }
  std::string csv = "node,level,green\n";
  for (NodeId u = 0; u < ball_size(std::min(c.depth, 5)); ++u) {
    const Word w = k0.graph().word(u);
    csv += word_label(w) + "," + std::to_string(w.length()) + "," + num(column[u]) + "\n";
  }
  out.csv = csv;
  return out;
}

Output passage_cmd(const RunConfig& c) {
  Output out;
  const TruncatedKernel k(c.params, c.depth);
  const Eigen::VectorXd f = first_passage_all(k);
  const int shown = std::min(c.depth, 4);
  std::string csv = "node,level,F,reference,killed_chain\n";
  Json levels = Json::array();
  for (int n = 0; n <= shown; ++n) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, worst = 0.0;
    const double ref = std::pow(c.params.lambda, n);
    for (std::uint64_t w = 0; w < static_cast<std::uint64_t>(pow3(n)); ++w) {
      const NodeId u = static_cast<NodeId>(level_offset(n) + w);
      lo = std::min(lo, f[u]);
      hi = std::max(hi, f[u]);
      worst = std::max(worst, std::abs(f[u] - ref) / ref);
      csv += word_label(Word::from_code(n, w)) + "," + std::to_string(n) + "," + num(f[u]) + "," + num(ref) + "," +
             num(first_passage_exact(c.params.lambda, n, c.depth)) + "\n";
    }
    levels.push_back({{"level", n}, {"min_F", lo}, {"max_F", hi}, {"max_relative_error", worst}});
    out.references["lambda^" + std::to_string(n)] = ref;
  }
  out.results["levels"] = levels;
  if (!c.x.empty()) {
    const Word x = word_arg(c.x);
    out.results["x"] = word_label(x);
    out.results["F_N(x,o)"] = f[k.graph().id(x)];
    out.references["lambda^|x|"] = std::pow(c.params.lambda, x.length());
  }
  out.csv = csv;
  return out;
}

Output hitmeasure_cmd(const RunConfig& c) {
  Output out;
  const TruncatedKernel k(c.params, c.depth);
  const Word x = word_arg(c.x);
  const std::vector<double> mass = harmonic_measure(k, x, c.level);
  const double uniform = std::pow(3.0, -c.level);
  double total = 0.0, deviation = 0.0;
  std::string csv = "cell,mass,density\n";
  for (std::size_t w = 0; w < mass.size(); ++w) {
    total += mass[w];
    deviation = std::max(deviation, std::abs(mass[w] - uniform));
    csv += word_label(Word::from_code(c.level, w)) + "," + num(mass[w]) + "," + num(mass[w] / uniform) + "\n";
  }
  out.results["x"] = word_label(x);
  out.results["total_mass"] = total;
  out.results["max_deviation_from_uniform"] = deviation;
  out.references["total_mass"] = 1.0;
  if (x.is_root()) out.references["cell_mass"] = uniform;
  out.csv = csv;
  return out;
}

Output martin_cmd(const RunConfig& c) {
  Output out;
  const TruncatedKernel k(c.params, c.depth);
  const std::vector<Word> xis = sample_boundary_proxies(c.depth, c.count, *c.seed);
  std::vector<Word> xs;
  for (int n = 0; n <= std::min(2, c.depth - 4); ++n)
    for (std::uint64_t w = 0; w < static_cast<std::uint64_t>(pow3(n)); ++w) xs.push_back(Word::from_code(n, w));
  const MartinBand band = martin_band(k, xs, xis, c.workers);
  std::string csv = "x,xi,gromov,measured,predicted,ratio\n";
  for (const MartinSample& s : band.samples)
    csv += word_label(s.x) + "," + s.xi.to_string() + "," + num(s.gromov) + "," + num(s.measured) + "," +
           num(s.predicted) + "," + num(s.ratio) + "\n";
  out.results["pairs"] = band.samples.size();
  out.results["min_ratio"] = band.min_ratio;
  out.results["max_ratio"] = band.max_ratio;
  out.results["band"] = band.band();
  out.references["K(o,xi)"] = 1.0;
  out.csv = csv;
  return out;
}

WalkOptions walk_options(const RunConfig& c) {
  WalkOptions w;
  w.stop_level = c.level;
  w.step_budget = c.step_budget;
  return w;
}

Output walk_cmd(const RunConfig& c) {
  Output out;
  const Word x = word_arg(c.x);
  WalkOptions w = walk_options(c);
  w.overrun_steps = c.overrun;
  const std::vector<WalkTrace> traces = run_ensemble(c.params, x, w, {c.samples, *c.seed, c.workers, false});
  std::string csv = "sample,exit_cell,steps,root_visits,max_level,budget_exhausted,misclassified\n";
  std::vector<double> visits, hits, steps;
  std::size_t exhausted = 0, misclassified = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const WalkTrace& t = traces[i];
    csv += std::to_string(i) + "," + word_label(t.exit_cell) + "," + std::to_string(t.steps) + "," +
           std::to_string(t.root_visits) + "," + std::to_string(t.max_level) + "," + (t.budget_exhausted ? "1" : "0") +
           "," + (t.misclassified ? "1" : "0") + "\n";
    visits.push_back(static_cast<double>(t.root_visits));
    hits.push_back(t.root_visits > 0 ? 1.0 : 0.0);
    steps.push_back(static_cast<double>(t.steps));
    exhausted += t.budget_exhausted;
    misclassified += t.misclassified;
  }
  const EmpiricalHitting hit = empirical_hitting(traces, c.level);
  const MeanEstimate g = estimate_mean(visits);
  const MeanEstimate f = estimate_mean(hits);
  out.results["x"] = word_label(x);
  out.results["exit_counts"] = hit.counts;
  out.results["finished"] = hit.total;
  out.results["budget_exhausted"] = exhausted;
  out.results["misclassified"] = misclassified;
  out.results["max_deviation_from_uniform"] = hit.max_deviation_from_uniform();
  out.results["mean_steps"] = estimate_mean(steps).mean;
  out.results["root_visits_mean"] = g.mean;
  out.results["root_visits_stderr"] = g.stderr_;
  out.results["hit_root_fraction"] = f.mean;
  out.results["hit_root_stderr"] = f.stderr_;
  if (x.is_root()) {
    out.references["cell_frequency"] = std::pow(3.0, -c.level);
    out.references["G(o,o)"] = 1.0 / (1.0 - c.params.lambda);
  }
  out.references["F(x,o)"] = std::pow(c.params.lambda, x.length());
  out.csv = csv;
  return out;
}

Output lifetime_cmd(const RunConfig& c) {
  Output out;
  const Word x = word_arg(c.x);
  const std::vector<WalkTrace> traces = run_ensemble(c.params, x, walk_options(c), {c.samples, *c.seed, c.workers, true});
  std::string csv = "sample,lifetime,tail_bound,steps,budget_exhausted\n";
  std::vector<double> life;
  std::size_t finite = 0, exhausted = 0;
  double max_tail = 0.0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const WalkTrace& t = traces[i];
    csv += std::to_string(i) + "," + num(t.lifetime) + "," + num(t.tail_bound) + "," + std::to_string(t.steps) + "," +
           (t.budget_exhausted ? "1" : "0") + "\n";
    life.push_back(t.lifetime);
    finite += std::isfinite(t.lifetime) && !t.budget_exhausted;
    exhausted += t.budget_exhausted;
    max_tail = std::max(max_tail, t.tail_bound);
  }
  const MeanEstimate m = estimate_mean(life);
  out.results["x"] = word_label(x);
  out.results["mean_lifetime"] = m.mean;
  out.results["stderr"] = m.stderr_;
  out.results["finite_fraction"] = static_cast<double>(finite) / static_cast<double>(traces.size());
  out.results["budget_exhausted"] = exhausted;
  out.results["max_tail_bound"] = max_tail;
  if (x.is_root()) {
    const double ref = expected_lifetime_from_root(c.params);
    out.references["E_o_lifetime"] = ref;
    out.results["z_score"] = m.stderr_ > 0.0 ? (m.mean - ref) / m.stderr_ : 0.0;
  }
  out.csv = csv;
  return out;
}

std::string energy_csv(const LevelEnergies<double>& e) {
  std::string csv = "level,horizontal_energy,vertical_energy,ratio\n";
  for (std::size_t n = 0; n < e.horizontal.size(); ++n) {
    const double ratio = n > 0 && e.horizontal[n - 1] > 0.0 ? e.horizontal[n] / e.horizontal[n - 1] : 0.0;
    const double v = n < e.vertical.size() ? e.vertical[n] : 0.0;
    csv += std::to_string(n) + "," + num(e.horizontal[n]) + "," + num(v) + "," + num(ratio) + "\n";
  }
  return csv;
}

Output separate_cmd(const RunConfig& c) {
  Output out;
  const Word p = word_arg(c.p);
  const Word q = word_arg(c.q);
  const SeparatingFunction s = build_separating_function(c.params, p, q, c.depth, c.workers);
  const EnergyReport report = graph_energy(c.params, s.values, c.workers);
  Json levels = Json::array();
  for (std::size_t n = s.seed_level; n + 1 < report.horizontal.size(); ++n)
    levels.push_back({{"level", n},
                      {"h_ratio", report.horizontal[n + 1] / report.horizontal[n]},
                      {"v_over_h", report.vertical[n] / report.horizontal[n]}});
  const int trace_level = std::min(c.depth, s.seed_level);
  const BoundaryTrace trace = extend_to_boundary(c.params, s.values, trace_level, c.workers);
  double p_min = 1.0, q_max = 0.0;
  for (std::size_t w = 0; w < trace.values.size(); ++w) {
    const Word cell = Word::from_code(trace_level, w);
    if (p.is_prefix_of(cell)) p_min = std::min(p_min, trace.values[w]);
    if (q.is_prefix_of(cell)) q_max = std::max(q_max, trace.values[w]);
  }
  out.results["seed_level"] = s.seed_level;
  out.results["levels"] = levels;
  out.results["total_energy"] = report.total;
  out.results["fitted_ratio"] = report.fitted_ratio;
  out.results["classification"] = to_string(report.classification);
  out.results["trace_min_on_p"] = p_min;
  out.results["trace_max_on_q"] = q_max;
  out.results["tail_bound"] = trace.tail_bound;
  out.references["h_ratio"] = 1.0 / (5.0 * c.params.lambda);
  out.references["v_over_h"] = 14.0 / (25.0 * c.params.c1);
  out.references["trace_on_p"] = 1.0;
  out.references["trace_on_q"] = 0.0;
  out.csv = energy_csv(s.energies);
  return out;
}

CellFunction coordinate_cells(int level) {
  return CellFunction::from_points(level, [](const Eigen::Vector2d& x) { return x[0]; });
}

Output energy_cmd(const RunConfig& c) {
  Output out;
  BallFunction u;
  if (c.function == "separating") {
    u = separating_function<double>(word_arg(c.p), word_arg(c.q), c.depth, c.workers);
    out.references["h_ratio"] = 1.0 / (5.0 * c.params.lambda);
  } else if (c.function == "coordinate") {
    u = BallFunction::zeros(c.depth);
    for (auto& level : u.levels)
      for (std::size_t w = 0; w < level.values.size(); ++w) level.values[w] = cell_barycenter(Word::from_code(level.level, w))[0];
  } else if (c.function == "indicator") {
    u = BallFunction::zeros(c.depth);
    u(Word{}) = 1.0;
    out.references["total"] = 3.0;
  } else {
    const TruncatedKernel k(c.params, c.depth);
    u = poisson_integral(k, coordinate_cells(c.level));
  }
  const EnergyReport r = graph_energy(c.params, u, c.workers);
  out.results["function"] = c.function;
  out.results["total"] = r.total;
  out.results["fitted_ratio"] = r.fitted_ratio;
  out.results["classification"] = to_string(r.classification);
  out.csv = energy_csv({r.horizontal, r.vertical});
  return out;
}

Output quad_cmd(const RunConfig& c) {
  Output out;
  const double beta = beta_of(c.params.lambda);
  std::string csv = "level,jump_energy,difference\n";
  Json values = Json::array();
  double prev = 0.0;
  for (int l = 1; l <= c.level; ++l) {
    const double j = jump_energy(coordinate_cells(l), beta, c.workers);
    csv += std::to_string(l) + "," + num(j) + "," + num(l > 1 ? j - prev : 0.0) + "\n";
    values.push_back(j);
    prev = j;
  }
  out.results["alpha"] = gasket_dimension();
  out.results["beta"] = beta;
  out.results["values"] = values;
  out.references["beta_star"] = std::log(5.0) / std::log(2.0);
  out.csv = csv;
  return out;
}

Output naim_cmd(const RunConfig& c) {
  Output out;
  const TruncatedKernel k(c.params, c.depth);
  const std::vector<CellFunction> family = smooth_test_family(c.level);
  const NaimReport r = naim_comparability(k, family, c.workers);
  std::string csv = "function,graph_energy,jump_energy,ratio\n";
  for (std::size_t i = 0; i < r.ratios.size(); ++i)
    csv += std::to_string(i) + "," + num(r.graph_energies[i]) + "," + num(r.jump_energies[i]) + "," + num(r.ratios[i]) + "\n";
  out.results["min_ratio"] = r.min_ratio;
  out.results["max_ratio"] = r.max_ratio;
  out.results["band"] = r.band();
  out.results["beta"] = beta_of(c.params.lambda);
  out.csv = csv;
  return out;
}

Output trace_cmd(const RunConfig& c) {
  Output out;
  const TruncatedKernel k(c.params, c.depth);
  std::vector<CellFunction> family = {CellFunction::constant(c.level, 1.0)};
  for (std::size_t i = 0; i < c.count; ++i) {
    Philox4x32 rng(*c.seed, i);
    CellFunction u = CellFunction::constant(c.level, 0.0);
    for (double& v : u.values) v = 2.0 * rng.uniform() - 1.0;
    family.push_back(std::move(u));
  }
  std::string csv = "function,lhs,energy,l2_mass,rhs,slack\n";
  double min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const TraceReport r = trace_inequality_check(k, family[i], c.workers);
    csv += std::to_string(i) + "," + num(r.lhs) + "," + num(r.energy) + "," + num(r.l2_mass) + "," + num(r.rhs) + "," +
           num(r.slack) + "\n";
    min_slack = std::min(min_slack, r.slack);
  }
  out.results["functions"] = family.size();
  out.results["min_slack"] = min_slack;
  out.results["all_hold"] = min_slack >= 1.0;
  out.references["C_squared"] = trace_constant(c.params);
  out.references["m_total"] = measure_total(c.params);
  out.csv = csv;
  return out;
}

Output scan_cmd(const RunConfig& c) {
  Output out;
  std::vector<double> grid;
  for (int i = 0; i < c.steps; ++i)
    grid.push_back(c.lambda_min + (c.lambda_max - c.lambda_min) * static_cast<double>(i) / (c.steps - 1));
  const ScanReport r = walk_dimension_scan(grid, c.depth, c.workers);
  std::string csv = "lambda,beta,ratio,growth_ratio,classification,growth_classification\n";
  Json entries = Json::array();
  for (const ScanEntry& e : r.entries) {
    csv += num(e.lambda) + "," + num(e.beta) + "," + num(e.ratio) + "," + num(e.growth_ratio) + "," +
           to_string(e.classification) + "," + to_string(e.growth_classification) + "\n";
    entries.push_back({{"lambda", e.lambda}, {"classification", to_string(e.classification)}});
  }
  out.results["entries"] = entries;
  out.results["lambda_hat"] = r.lambda_hat;
  out.results["beta_hat"] = r.beta_hat;
  out.results["lambda_hat_growth"] = r.lambda_hat_growth;
  out.results["beta_hat_growth"] = r.beta_hat_growth;
  out.references["lambda_critical"] = 0.2;
  out.references["beta_star"] = std::log(5.0) / std::log(2.0);
  out.csv = csv;
  return out;
}

Output dispatch(const RunConfig& c) {
  static const std::map<std::string, std::function<Output(const RunConfig&)>> table = {
      {"build-graph", build_graph}, {"green", green_cmd},       {"passage", passage_cmd}, {"hitmeasure", hitmeasure_cmd},
      {"martin", martin_cmd},       {"walk", walk_cmd},         {"lifetime", lifetime_cmd}, {"separate", separate_cmd},
      {"energy", energy_cmd},       {"quad", quad_cmd},         {"naim", naim_cmd},       {"trace-check", trace_cmd},
      {"scan", scan_cmd}};
  return table.at(c.subcommand)(c);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

int run(const RunConfig& config, std::ostream& log, std::ostream& err) {
  Output out;
  try {
    validate(config);
    out = dispatch(config);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tool"] = {{"name", "sgwalk"}, {"version", kToolVersion}};
  doc["config"] = config_echo(config);
  doc["results"] = out.results;
  doc["references"] = out.references;

  try {
    const std::filesystem::path dir(config.output_dir);
    std::filesystem::create_directories(dir);
    const std::filesystem::path json_path = dir / (config.subcommand + ".json");
    write_file(json_path, doc.dump(2) + "\n");
    log << "wrote " << json_path.string() << '\n';
    if (!out.csv.empty()) {
      const std::filesystem::path csv_path = dir / (config.subcommand + ".csv");
      write_file(csv_path, out.csv);
      log << "wrote " << csv_path.string() << '\n';
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace sg::cli
