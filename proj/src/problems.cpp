#include "qsim/problems.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qsim {

Graph::Graph(int nodes, std::vector<Edge> edge_list) : n(nodes), edges(std::move(edge_list)) {
  if (n < 1) throw std::invalid_argument("Graph: need at least one node");
  std::set<std::pair<int, int>> seen;
  for (Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw std::invalid_argument("Graph: edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("Graph: self loops are not allowed");
    if (e.u > e.v) std::swap(e.u, e.v);
    if (!seen.insert({e.u, e.v}).second)
      throw std::invalid_argument("Graph: duplicate edge");
  }
}

double Graph::total_weight() const {
  double sum = 0.0;
  for (const Edge& e : edges) sum += e.w;
  return sum;
}

double Graph::density() const {
  if (n < 2) return 0.0;
  return static_cast<double>(edges.size()) /
         (static_cast<double>(n) * (n - 1) / 2.0);
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(n, 0);
  for (const Edge& e : edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

std::vector<std::vector<std::pair<int, double>>> Graph::adjacency() const {
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const Edge& e : edges) {
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }
  return adj;
}

WeightModel WeightModel::uniform_real(double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("WeightModel: lo > hi");
  return {Kind::UniformReal, lo, hi};
}

WeightModel WeightModel::uniform_int(long lo, long hi) {
  if (lo > hi) throw std::invalid_argument("WeightModel: lo > hi");
  return {Kind::UniformInt, static_cast<double>(lo), static_cast<double>(hi)};
}

Graph gnp_graph(int n, double density, const WeightModel& weights, uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gnp_graph: need at least one node");
  if (density < 0.0 || density > 1.0)
    throw std::invalid_argument("gnp_graph: density must be in [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution edge_coin(density);
  std::uniform_real_distribution<double> real_w(weights.lo, weights.hi);
  std::uniform_int_distribution<long> int_w(static_cast<long>(weights.lo),
                                            static_cast<long>(weights.hi));
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      if (!edge_coin(rng)) continue;
      double w = 1.0;
      if (weights.kind == WeightModel::Kind::UniformReal) w = real_w(rng);
      else if (weights.kind == WeightModel::Kind::UniformInt)
        w = static_cast<double>(int_w(rng));
      edges.push_back({u, v, w});
    }
  return Graph(n, std::move(edges));
}

Graph two_clique_graph(int n, int r, double weight) {
  if (n < 2) throw std::invalid_argument("two_clique_graph: need n >= 2");
  if (r < 0 || r > n) throw std::invalid_argument("two_clique_graph: r out of range");
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if ((u < r) == (v < r)) edges.push_back({u, v, weight});
  return Graph(n, std::move(edges));
}

std::pair<IntensityProfile, RelationMatrix> two_clique_knobs(int n, int r, double weight) {
  if (weight >= 0.0)
    throw std::invalid_argument("two_clique_knobs: weight must be negative");
  // Max-cut reduction turns weight w into coupling -w/2 inside the groups;
  // with xi = eta = sqrt(-w/2)/2 the quadrature signs reproduce it exactly.
  const double amp = std::sqrt(-weight / 2.0) / 2.0;
  std::vector<int> signs(n, 1);
  for (int l = 0; l < r; ++l) signs[l] = -1;
  return {IntensityProfile::uniform(n, amp, amp), RelationMatrix::quadrature(signs)};
}

IsingProblem maxcut_to_ising(const Graph& g) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(g.n, g.n);
  for (const Edge& e : g.edges) {
    j(e.u, e.v) -= e.w / 2.0;
    j(e.v, e.u) -= e.w / 2.0;
  }
  return IsingProblem(std::move(j), Eigen::VectorXd::Zero(g.n), g.total_weight() / 2.0);
}

double cut_value(const Graph& g, const SpinConfig& x) {
  if (x.size() != g.n) throw std::invalid_argument("cut_value: configuration size mismatch");
  double cut = 0.0;
  for (const Edge& e : g.edges)
    if (x[e.u] != x[e.v]) cut += e.w;
  return cut;
}

CutTracker::CutTracker(const Graph& g) : adj_(g.adjacency()) {}

void CutTracker::reset(const SpinConfig& x) {
  if (x.size() != static_cast<int>(adj_.size()))
    throw std::invalid_argument("CutTracker: configuration size mismatch");
  x_ = x.spins();
  cut_ = 0.0;
  for (int u = 0; u < x_.size(); ++u)
    for (const auto& [v, w] : adj_[u])
      if (u < v && x_[u] != x_[v]) cut_ += w;
}

void CutTracker::apply(const std::vector<int>& flips) {
  for (int i : flips) {
    if (i < 0 || i >= x_.size()) throw std::invalid_argument("CutTracker: bad flip index");
    double delta = 0.0;
    for (const auto& [v, w] : adj_[i]) delta += x_[i] == x_[v] ? w : -w;
    cut_ += delta;
    x_[i] = -x_[i];
  }
}

IsingProblem vertexcover_to_ising(const Graph& g, double a_pen, double b_pen) {
  if (a_pen <= 0.0 || b_pen <= 0.0)
    throw std::invalid_argument("vertexcover_to_ising: penalties must be positive");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(g.n, g.n);
  for (const Edge& e : g.edges) {
    j(e.u, e.v) -= a_pen;
    j(e.v, e.u) -= a_pen;
  }
  const std::vector<int> deg = g.degrees();
  Eigen::VectorXd h(g.n);
  for (int v = 0; v < g.n; ++v) h[v] = a_pen * deg[v] - b_pen;
  const double offset = a_pen * static_cast<double>(g.edges.size()) + b_pen * g.n;
  return IsingProblem(std::move(j), std::move(h), offset);
}

CoverSolution CoverSolution::decode(const Graph& g, const SpinConfig& x) {
  if (x.size() != g.n)
    throw std::invalid_argument("CoverSolution: configuration size mismatch");
  CoverSolution sol;
  sol.in_cover.resize(g.n);
  for (int v = 0; v < g.n; ++v) {
    sol.in_cover[v] = x[v] == 1;
    sol.cover_size += sol.in_cover[v] ? 1 : 0;
  }
  for (const Edge& e : g.edges)
    if (!sol.in_cover[e.u] && !sol.in_cover[e.v]) ++sol.uncovered_edges;
  return sol;
}

}  // namespace qsim
