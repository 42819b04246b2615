#pragma once

// Shared helpers for the unit, property, and acceptance suites.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "mb/graph.hpp"
#include "mb/oracle.hpp"
#include "mb/textio.hpp"

namespace support {

inline std::string data_path(const std::string& name) {
  return std::string(TEST_DATA_DIR) + "/" + name;
}

inline mb::Graph load_graph(const std::string& name) {
  return mb::io::parse_graph_file(data_path(name));
}

inline mb::DiscreteModel load_model(const std::string& name) {
  return mb::io::parse_model_file(data_path(name));
}

// Vertex set from labels, e.g. names(g, {"a", "b"}).
inline mb::VertexSet names(const mb::Graph& g,
                           std::initializer_list<const char*> labels) {
  std::vector<std::string> v(labels.begin(), labels.end());
  return g.resolve(v);
}

inline std::vector<std::string> labels_of(const mb::Graph& g,
                                          const mb::VertexSet& vs) {
  std::vector<std::string> out;
  for (mb::VertexId v : vs) out.push_back(g.label(v));
  std::sort(out.begin(), out.end());
  return out;
}

// A random graph with `n` in [min_v, max_v]: a random vertex order with each
// forward pair linked independently, giving a DAG (or plain undirected
// graph) of moderate density.
inline mb::Graph random_graph(mb::oracle::Rng& rng, bool directed, int min_v,
                              int max_v, double density_lo = 0.15,
                              double density_hi = 0.55) {
  int n = rng.uniform_int(min_v, max_v);
  double p = density_lo + (density_hi - density_lo) * rng.u01();
  std::vector<std::string> labels;
  labels.reserve(n);
  for (int i = 0; i < n; ++i) labels.push_back("v" + std::to_string(i));
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(order[i], order[rng.uniform_int(0, i)]);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.u01() < p) pairs.emplace_back(labels[order[i]], labels[order[j]]);
  return mb::Graph::build(
      directed ? mb::GraphKind::Directed : mb::GraphKind::Undirected, labels,
      pairs);
}

// Each pool vertex kept independently with probability p.
inline mb::VertexSet random_subset(mb::oracle::Rng& rng,
                                   const mb::VertexSet& pool, double p) {
  std::vector<mb::VertexId> ids;
  for (mb::VertexId v : pool)
    if (rng.u01() < p) ids.push_back(v);
  return mb::VertexSet(std::move(ids));
}

// Like random_subset but guaranteed non-empty when the pool is non-empty.
inline mb::VertexSet random_nonempty_subset(mb::oracle::Rng& rng,
                                            const mb::VertexSet& pool,
                                            double p) {
  mb::VertexSet s = random_subset(rng, pool, p);
  if (s.empty() && !pool.empty()) {
    int k = rng.uniform_int(0, static_cast<int>(pool.size()) - 1);
    s.insert(pool.ids()[k]);
  }
  return s;
}

// Draws disjoint non-empty B and D plus a conditioning set E from the
// remaining vertices, for directional-blanket style queries.
struct DirectionalDraw {
  mb::VertexSet b, d, e;
};

inline DirectionalDraw random_directional_draw(mb::oracle::Rng& rng,
                                               const mb::Graph& g) {
  mb::VertexSet all = g.all_vertices();
  DirectionalDraw out;
  out.b = random_nonempty_subset(rng, all, 0.2);
  out.d = random_nonempty_subset(rng, all - out.b, 0.2);
  out.e = random_subset(rng, all - out.b - out.d, 0.2);
  return out;
}

}  // namespace support
