#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "qsim/problems.hpp"

namespace qsim {

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_graph: cannot open " + path);
  std::string line;
  long n = 0, m = 0;
  // Header is the first non-empty, non-comment line.
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    if (!(ss >> n >> m)) throw std::runtime_error("load_graph: bad header in " + path);
    break;
  }
  if (n < 1) throw std::runtime_error("load_graph: bad node count in " + path);
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(m));
  while (static_cast<long>(edges.size()) < m) {
    if (!std::getline(in, line))
      throw std::runtime_error("load_graph: expected more edges in " + path);
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    Edge e;
    if (!(ss >> e.u >> e.v)) throw std::runtime_error("load_graph: bad edge line in " + path);
    if (!(ss >> e.w)) e.w = 1.0;
    edges.push_back(e);
  }
  try {
    return Graph(static_cast<int>(n), std::move(edges));
  } catch (const std::invalid_argument& err) {
    throw std::runtime_error("load_graph: " + path + ": " + err.what());
  }
}

void save_graph(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_graph: cannot open " + path);
  out << std::setprecision(17);
  out << g.n << " " << g.edges.size() << "\n";
  for (const Edge& e : g.edges) out << e.u << " " << e.v << " " << e.w << "\n";
}

}  // namespace qsim
