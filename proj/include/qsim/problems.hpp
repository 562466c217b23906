#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qsim/coupling.hpp"

namespace qsim {

struct Edge {
  int u = 0;
  int v = 0;
  double w = 1.0;
};

/// Simple undirected weighted graph. Edges are stored with u < v and no
/// duplicates; self loops are rejected.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;

  Graph(int nodes, std::vector<Edge> edge_list);

  double total_weight() const;
  double density() const;  // |E| / C(n, 2)
  std::vector<int> degrees() const;
  std::vector<std::vector<std::pair<int, double>>> adjacency() const;
};

struct WeightModel {
  enum class Kind { Unit, UniformReal, UniformInt };
  Kind kind = Kind::Unit;
  double lo = 1.0;
  double hi = 1.0;

  static WeightModel unit() { return {}; }
  static WeightModel uniform_real(double lo, double hi);
  static WeightModel uniform_int(long lo, long hi);
};

/// Erdos-Renyi graph: each pair becomes an edge independently with
/// probability density, weights drawn from the model.
Graph gnp_graph(int n, double density, const WeightModel& weights, uint64_t seed);

/// Two-clique family realizable exactly in the quadrature machine: nodes
/// split into groups of size r and n-r, every within-group pair is an edge
/// of the given weight and cross-group pairs carry none.
Graph two_clique_graph(int n, int r, double weight = -2.0);

/// Exact machine knobs for two_clique_graph under the max-cut reduction:
/// quadrature signs identify the groups and xi = eta makes the cross-group
/// couplings vanish. Zero residual by construction.
std::pair<IntensityProfile, RelationMatrix> two_clique_knobs(int n, int r,
                                                             double weight = -2.0);

/// Max-cut as energy minimization: J_uv = -w_uv / 2 with offset total/2, so
/// hamiltonian(x) = total_weight - cut_value(x).
IsingProblem maxcut_to_ising(const Graph& g);

double cut_value(const Graph& g, const SpinConfig& x);

/// Incremental cut bookkeeping for trace reporting: O(deg) per flip.
class CutTracker {
 public:
  explicit CutTracker(const Graph& g);

  void reset(const SpinConfig& x);
  void apply(const std::vector<int>& flips);
  double value() const { return cut_; }

 private:
  std::vector<std::vector<std::pair<int, double>>> adj_;
  Eigen::VectorXi x_;
  double cut_ = 0.0;
};

/// Minimum vertex cover as an Ising instance (spin +1 means "in the cover"):
/// J_uv = -a_pen per edge, h_v = a_pen * deg(v) - b_pen, offset chosen so
/// that H(x) = 4 a_pen * uncovered_edges(x) + 2 b_pen * cover_size(x).
/// Valid covers dominate when 2 a_pen > b_pen.
IsingProblem vertexcover_to_ising(const Graph& g, double a_pen, double b_pen);

struct CoverSolution {
  std::vector<bool> in_cover;
  long cover_size = 0;
  long uncovered_edges = 0;

  static CoverSolution decode(const Graph& g, const SpinConfig& x);
};

/// Graph text format: header "n m", then one edge per line as "u v w" or
/// "u v" (weight 1), all 0-indexed.
Graph load_graph(const std::string& path);
void save_graph(const std::string& path, const Graph& g);

}  // namespace qsim
