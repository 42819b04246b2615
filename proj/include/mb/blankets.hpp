#pragma once

#include "mb/graph.hpp"

namespace mb {

enum class BlanketMethod { Classic, InSet, Directional, DirectionalExtended };

// Result of a blanket computation.  `dep` is populated only by the extended
// directional variant: the part of the target set that cannot be separated
// from the source set at all.
struct BlanketResult {
  VertexSet blanket;
  VertexSet dep;
  BlanketMethod method = BlanketMethod::Classic;
  GraphKind branch = GraphKind::Directed;
};

// The Markov blanket of B within the candidate set C, conditional on E: all
// v in C\B that remain connected to B once everything else in C (and E) is
// conditioned on.  Runs one linear reachability sweep per candidate,
// O(|C| * (|V| + |A|)).  Works on both graph kinds.
BlanketResult markov_blanket_in(const Graph& g, const VertexSet& b,
                                const VertexSet& c, const VertexSet& e);

// Classic Markov blanket: candidates are all vertices.
BlanketResult markov_blanket(const Graph& g, const VertexSet& b,
                             const VertexSet& e = {});

// True iff some subset of V \ (B u D), together with E, separates B from D.
// Equivalent to conditioning on the widest candidate set: everything except
// B and D (restricted to the ancestral closure of B u D u E when directed).
bool any_separator_exists(const Graph& g, const VertexSet& b,
                          const VertexSet& d, const VertexSet& e);

// The directional Markov blanket of B with respect to D given E: the unique
// minimal separator M of B and D (given E) that is itself independent of D
// given any other separator.  Computed by two nested blanket sweeps; for
// directed graphs the first sweep is confined to the ancestral closure of
// B, D and E.  Throws NoSeparator when no subset of V \ (B u D) separates
// B from D given E.
BlanketResult directional_blanket(const Graph& g, const VertexSet& b,
                                  const VertexSet& d, const VertexSet& e);

// Extended variant that always succeeds: the inseparable part of D (dep) is
// absorbed into the blanket and the directional construction is applied to
// the remainder.  When a separator exists this coincides with
// directional_blanket.
BlanketResult directional_blanket_extended(const Graph& g, const VertexSet& b,
                                           const VertexSet& d,
                                           const VertexSet& e);

// True iff M u E separates B from D and no deletion of a single vertex of M
// leaves a separating subset.  For directed graphs the single-deletion test
// restricts the remainder to the ancestral closure of B u D u E, which is
// where any separating subset would live.
bool is_minimal_separator(const Graph& g, const VertexSet& b,
                          const VertexSet& d, const VertexSet& e,
                          const VertexSet& m);

// M restricted to the ancestral closure of B u D u E (directed only).
VertexSet restrict_to_ancestral(const Graph& g, const VertexSet& b,
                                const VertexSet& d, const VertexSet& e,
                                const VertexSet& m);

// True iff some subset of M separates B from D given E (directed only);
// equivalent to testing the ancestral restriction of M itself.
bool has_separating_subset(const Graph& g, const VertexSet& b,
                           const VertexSet& d, const VertexSet& e,
                           const VertexSet& m);

}  // namespace mb
