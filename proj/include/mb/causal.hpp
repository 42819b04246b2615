#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "mb/graph.hpp"

namespace mb {

// A non-negative table over a sorted list of variables.  Values are stored
// row-major with the last scope variable varying fastest.
struct Factor {
  std::vector<VertexId> scope;  // strictly ascending ids
  std::vector<int> card;        // card[i] = cardinality of scope[i]
  std::vector<double> values;

  std::size_t table_size() const;
};

// A normalized probability table, same layout as Factor.
struct Distribution {
  std::vector<VertexId> vars;  // strictly ascending ids
  std::vector<int> card;
  std::vector<double> probs;
};

// Variable assignment, keyed by vertex id.
using Evidence = std::map<VertexId, int>;

// Row-major strides for a cardinality vector (last variable fastest).
std::vector<std::size_t> row_major_strides(const std::vector<int>& card);

Factor product(const Factor& a, const Factor& b);
Factor sum_out(const Factor& f, VertexId v);
Factor reduce(const Factor& f, VertexId v, int value);

// A discrete graphical model: a DAG with one CPT per vertex, or an
// undirected graph with non-negative clique potentials.  The constructor
// validates factor scopes against the graph (CPT scope = parents plus the
// vertex; undirected scopes must be cliques), checks CPT rows sum to one
// within 1e-12, and rejects negative entries.
class DiscreteModel {
 public:
  DiscreteModel(Graph graph, std::vector<int> domains,
                std::vector<Factor> factors);

  const Graph& graph() const { return graph_; }
  int domain(VertexId v) const;
  const std::vector<int>& domains() const { return domains_; }
  const std::vector<Factor>& factors() const { return factors_; }
  // Index into factors() of the CPT owning vertex v (directed models only).
  int cpt_index(VertexId v) const;

 private:
  Graph graph_;
  std::vector<int> domains_;
  std::vector<Factor> factors_;
  std::vector<int> cpt_of_;
};

// Conditional marginal P(query | evidence) computed by variable elimination
// with a min-degree elimination order (deterministic tie-break on vertex id).
// Throws ZeroEvidenceProbability when the evidence has probability zero.
Distribution marginal(const DiscreteModel& m, const VertexSet& query,
                      const Evidence& evidence);

// Same, but eliminating in the caller-supplied order, which must be a
// permutation of the variables outside query and evidence.  The result is
// invariant under the choice of order up to floating-point rounding.
Distribution marginal_with_order(const DiscreteModel& m, const VertexSet& query,
                                 const Evidence& evidence,
                                 std::span<const VertexId> order);

// Back-door adjustment set for the effect of B on D: the directional blanket
// of T = (descendants(B) n ancestors(D)) u D towards B in the graph with B's
// outgoing arcs removed.  Contains no descendant of B.  Throws NoSeparator
// when no valid adjustment set exists.
VertexSet adjustment_set(const Graph& g, const VertexSet& b,
                         const VertexSet& d);

struct CausalEffect {
  Distribution dist;
  // False when some adjustment stratum with positive probability could not
  // be conditioned on (zero-probability intervention stratum); such strata
  // are skipped.
  bool estimable = true;
};

// Interventional distribution P(D | do(B = b)) estimated through the
// back-door adjustment formula: sum_s P(D | S=s, B=b) P(S=s).
// `do_assign` maps each vertex of B to its forced value.
CausalEffect causal_effect_adjustment(const DiscreteModel& m,
                                      const Evidence& do_assign,
                                      const VertexSet& d);

// Ground truth for the same quantity: replaces each intervened CPT with a
// point mass in the graph with incoming arcs to B removed, then marginalizes.
Distribution causal_effect_truncated(const DiscreteModel& m,
                                     const Evidence& do_assign,
                                     const VertexSet& d);

// Sums a distribution down to the given subset of its variables.
Distribution marginalize(const Distribution& dist, const VertexSet& keep);

// Largest absolute difference between two tables over identical variables.
double max_abs_diff(const Distribution& a, const Distribution& b);

}  // namespace mb
