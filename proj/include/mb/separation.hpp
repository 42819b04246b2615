#pragma once

#include <vector>

#include "mb/graph.hpp"

namespace mb {

// All vertices outside `given` that can be reached from a vertex of `sources`
// along at least one active trail, where `given` is the conditioning set.
// Directed graphs use d-connection (colliders open when they or one of their
// descendants is conditioned on); undirected graphs use plain path blocking.
// Trail endpoints are never tested against `given`, but conditioned sources
// are inert and a vertex never reaches itself through a zero-length trail.
// Runs in O(|V| + |A|).
VertexSet reachable(const Graph& g, const VertexSet& sources,
                    const VertexSet& given);

// True iff every trail between X and Y is blocked by Z.  Vertices shared by
// X and Y must lie inside Z, otherwise the one-vertex trail connects them.
// is_d_separated requires a directed graph, is_separated an undirected one
// (KindMismatch otherwise); `separated` dispatches on the graph kind.
bool is_d_separated(const Graph& g, const VertexSet& x, const VertexSet& y,
                    const VertexSet& z);
bool is_separated(const Graph& g, const VertexSet& x, const VertexSet& y,
                  const VertexSet& z);
bool separated(const Graph& g, const VertexSet& x, const VertexSet& y,
               const VertexSet& z);

// True iff `trail` (a sequence of pairwise adjacent vertices) is active given
// `given`.  Interior vertices must avoid the conditioning set except at
// colliders, which must have a conditioned descendant (or be conditioned
// themselves).  Throws NotATrail when consecutive vertices are not adjacent
// or the sequence is empty.
bool is_active_trail(const Graph& g, const std::vector<VertexId>& trail,
                     const VertexSet& given);

}  // namespace mb
