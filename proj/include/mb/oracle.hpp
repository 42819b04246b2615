#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mb/causal.hpp"
#include "mb/graph.hpp"

// Brute-force reference implementations.  Everything here favors obvious
// correctness over speed and is guarded against inputs too large to
// enumerate; the fast library code is validated against these.
namespace mb::oracle {

// Largest vertex count the combinatorial oracles accept.
inline constexpr int kMaxVertices = 12;

// Largest joint table exact_joint will materialize.
inline constexpr std::size_t kMaxJointEntries = std::size_t{1} << 20;

// Deterministic random source used by the sampling helpers.  The raw engine
// is transformed by hand so results do not depend on library-specific
// distribution implementations.
struct Rng {
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  std::mt19937_64 engine;

  // Uniform in the open interval (0, 1).
  double u01() {
    return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
  }
  // Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(engine() %
                                 static_cast<std::uint64_t>(hi - lo + 1));
  }
  // Standard exponential draw; always strictly positive.
  double exp1() { return -std::log(u01()); }
};

// Every simple trail from u to v (vertex sequences, no repeats, at least one
// step), in lexicographic order of the vertex sequence.  Directed graphs
// traverse arcs in both orientations.  Throws TooLarge beyond kMaxVertices.
std::vector<std::vector<VertexId>> enumerate_trails(const Graph& g, VertexId u,
                                                    VertexId v);

// Separation by exhaustive trail enumeration: true iff X n Y lies inside Z
// and no trail between X \ Z and Y \ Z is active given Z.  Works on both
// graph kinds.
bool is_d_separated_bruteforce(const Graph& g, const VertexSet& x,
                               const VertexSet& y, const VertexSet& z);

// All inclusion-minimal M, disjoint from B u D u E, with M u E separating B
// from D; sorted lexicographically.  Empty when no subset separates.
std::vector<VertexSet> all_minimal_separators(const Graph& g,
                                              const VertexSet& b,
                                              const VertexSet& d,
                                              const VertexSet& e);

// Blanket within a candidate set by definition: the unique minimum M
// contained in C \ B with B separated from C \ (B u M) given M u E.  Throws
// NoMinimum if the satisfying family has no least element.
VertexSet mb_in_set_bruteforce(const Graph& g, const VertexSet& b,
                               const VertexSet& c, const VertexSet& e);

// Directional blanket by definition: the unique minimal separator M of B
// and D (given E) with D separated from M given M' u E for every separating
// set M'.  Throws NoSeparator when nothing separates and NotUnique when the
// defining property does not pin down exactly one minimal separator.
VertexSet directional_bruteforce(const Graph& g, const VertexSet& b,
                                 const VertexSet& d, const VertexSet& e);

// A random positive model on the graph: domain sizes uniform in
// [2, max_domain], CPT rows drawn flat-Dirichlet (directed) or exponential
// potentials on the maximal cliques (undirected).
DiscreteModel sample_model(const Graph& g, std::uint64_t seed,
                           int max_domain = 2);

// The full joint table of a model, by direct evaluation of the factor
// product over every assignment.  Independent of the variable-elimination
// engine.  Throws TooLarge beyond kMaxJointEntries.
Distribution exact_joint(const DiscreteModel& m);

// Largest conditional dependence left between X and Z-stripped Y under the
// joint: max over assignments z of the total-variation distance between
// P(X, Y | z) and P(X | z) P(Y | z).  Overlapping X and Y (outside Z) count
// as fully dependent.
double ci_deviation(const Distribution& joint, const VertexSet& x,
                    const VertexSet& y, const VertexSet& z);

// True iff ci_deviation(...) <= tol.
bool check_ci(const Distribution& joint, const VertexSet& x,
              const VertexSet& y, const VertexSet& z, double tol);

// Maximal cliques of an undirected graph (each sorted; list sorted
// lexicographically).  Isolated vertices yield singleton cliques.
std::vector<VertexSet> maximal_cliques(const Graph& g);

}  // namespace mb::oracle
