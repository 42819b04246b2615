#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mb/errors.hpp"

namespace mb {

using VertexId = std::int32_t;

// A set of vertex ids kept as a sorted, duplicate-free vector.  Cheap to
// iterate in deterministic order and to combine with the usual set algebra.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::initializer_list<VertexId> ids)
      : VertexSet(std::vector<VertexId>(ids)) {}
  explicit VertexSet(std::vector<VertexId> ids);

  bool empty() const { return ids_.empty(); }
  std::size_t size() const { return ids_.size(); }
  bool contains(VertexId v) const;

  void insert(VertexId v);
  void erase(VertexId v);

  VertexSet unite(const VertexSet& other) const;
  VertexSet intersect(const VertexSet& other) const;
  VertexSet minus(const VertexSet& other) const;
  bool is_subset_of(const VertexSet& other) const;
  bool intersects(const VertexSet& other) const;

  const std::vector<VertexId>& ids() const { return ids_; }
  std::vector<VertexId>::const_iterator begin() const { return ids_.begin(); }
  std::vector<VertexId>::const_iterator end() const { return ids_.end(); }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<VertexId> ids_;
};

inline VertexSet operator|(const VertexSet& a, const VertexSet& b) {
  return a.unite(b);
}
inline VertexSet operator&(const VertexSet& a, const VertexSet& b) {
  return a.intersect(b);
}
inline VertexSet operator-(const VertexSet& a, const VertexSet& b) {
  return a.minus(b);
}

enum class GraphKind { Directed, Undirected };

// An immutable labelled graph: either a DAG (arcs) or an undirected graph
// (edges).  Vertices are addressed by dense ids in declaration order;
// adjacency lists are kept sorted so traversals are deterministic.
class Graph {
 public:
  // Builds a graph from vertex labels and label pairs.  Directed pairs are
  // arcs tail->head; undirected pairs are edges.  Duplicate pairs collapse.
  // Throws DuplicateLabel, UnknownLabel, SelfLoop, or CycleDetected.
  static Graph build(GraphKind kind, const std::vector<std::string>& labels,
                     const std::vector<std::pair<std::string, std::string>>& pairs);

  GraphKind kind() const { return kind_; }
  bool is_directed() const { return kind_ == GraphKind::Directed; }

  int vertex_count() const { return static_cast<int>(labels_.size()); }
  std::size_t arc_count() const { return arcs_.size(); }

  const std::string& label(VertexId v) const;
  // Resolves a label to its id; throws UnknownLabel.
  VertexId index_of(const std::string& label) const;
  bool has_label(const std::string& label) const;

  // Directed accessors (KindMismatch on undirected graphs).
  std::span<const VertexId> children_of(VertexId v) const;
  std::span<const VertexId> parents_of(VertexId v) const;
  std::span<const VertexId> topological_order() const;

  // Undirected accessor (KindMismatch on directed graphs).
  std::span<const VertexId> neighbors_of(VertexId v) const;

  // Sorted list of arcs (tail, head) or edges (min, max).
  const std::vector<std::pair<VertexId, VertexId>>& arcs() const {
    return arcs_;
  }

  // True if the arc u->v (directed) or the edge {u,v} (undirected) exists.
  bool has_arc(VertexId u, VertexId v) const;

  VertexSet all_vertices() const;
  VertexSet resolve(const std::vector<std::string>& labels) const;

  // Throws UnknownVertex unless 0 <= v < vertex_count().
  void check_vertex(VertexId v) const;
  void check_vertices(const VertexSet& vs) const;

 private:
  Graph() = default;

  GraphKind kind_ = GraphKind::Directed;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, VertexId> label_to_id_;
  // Directed: out_[v] = children, in_[v] = parents.  Undirected: out_[v] =
  // neighbors and in_ stays empty.
  std::vector<std::vector<VertexId>> out_;
  std::vector<std::vector<VertexId>> in_;
  std::vector<std::pair<VertexId, VertexId>> arcs_;
  std::vector<VertexId> topo_;
};

// Union of parent sets (directed only).
VertexSet parents(const Graph& g, const VertexSet& vs);

// All strict ancestors / descendants of the set (directed only; vertices of
// the set itself appear only when reachable through a non-empty path, which
// cannot happen in a DAG).
VertexSet ancestors(const Graph& g, const VertexSet& vs);
VertexSet descendants(const Graph& g, const VertexSet& vs);

// vs together with all its ancestors (directed only).
VertexSet ancestral_closure(const Graph& g, const VertexSet& vs);

// Copies of the graph with every arc leaving (entering) a vertex of vs
// removed (directed only).
Graph remove_outgoing(const Graph& g, const VertexSet& vs);
Graph remove_incoming(const Graph& g, const VertexSet& vs);

}  // namespace mb
