#include "mb/blankets.hpp"

#include "mb/separation.hpp"

namespace mb {

namespace {

// Conditioning set that could possibly separate B from D given E: everything
// except B and D itself, restricted to the ancestral closure on directed
// graphs.  E stays in even when it overlaps B or D.
VertexSet widest_candidate_separator(const Graph& g, const VertexSet& b,
                                     const VertexSet& d, const VertexSet& e) {
  VertexSet ground = g.is_directed() ? ancestral_closure(g, b | d | e)
                                     : g.all_vertices();
  return (ground - (b | d)) | e;
}

}  // namespace

BlanketResult markov_blanket_in(const Graph& g, const VertexSet& b,
                                const VertexSet& c, const VertexSet& e) {
  g.check_vertices(b);
  g.check_vertices(c);
  g.check_vertices(e);
  VertexSet candidates = c - b;
  VertexSet blanket;
  for (VertexId v : candidates) {
    VertexSet rest = candidates;
    rest.erase(v);
    if (!separated(g, b, VertexSet{v}, e | rest)) blanket.insert(v);
  }
  return {std::move(blanket), {}, BlanketMethod::InSet, g.kind()};
}

BlanketResult markov_blanket(const Graph& g, const VertexSet& b,
                             const VertexSet& e) {
  BlanketResult r = markov_blanket_in(g, b, g.all_vertices(), e);
  r.method = BlanketMethod::Classic;
  return r;
}

bool any_separator_exists(const Graph& g, const VertexSet& b,
                          const VertexSet& d, const VertexSet& e) {
  g.check_vertices(b);
  g.check_vertices(d);
  g.check_vertices(e);
  return separated(g, b, d, widest_candidate_separator(g, b, d, e));
}

BlanketResult directional_blanket(const Graph& g, const VertexSet& b,
                                  const VertexSet& d, const VertexSet& e) {
  g.check_vertices(b);
  g.check_vertices(d);
  g.check_vertices(e);
  if (!any_separator_exists(g, b, d, e))
    throw NoSeparator("no conditioning set separates the two vertex sets");

  VertexSet inner_candidates =
      g.is_directed() ? ancestral_closure(g, b | d | e) : g.all_vertices();
  VertexSet inner = markov_blanket_in(g, b, inner_candidates, e).blanket;
  BlanketResult r = markov_blanket_in(g, d, inner, e);
  r.method = BlanketMethod::Directional;
  return r;
}

BlanketResult directional_blanket_extended(const Graph& g, const VertexSet& b,
                                           const VertexSet& d,
                                           const VertexSet& e) {
  g.check_vertices(b);
  g.check_vertices(d);
  g.check_vertices(e);
  VertexSet inner_candidates =
      g.is_directed() ? ancestral_closure(g, b | d | e) : g.all_vertices();
  VertexSet inner = markov_blanket_in(g, b, inner_candidates, e).blanket;

  // The inseparable part of D is exactly the part of B's blanket that lies
  // inside D; the directional construction applies to the rest of D.
  VertexSet dep = d & inner;
  VertexSet ind = d - dep;
  VertexSet tail = markov_blanket_in(g, ind, inner, e).blanket;
  BlanketResult r;
  r.blanket = dep | tail;
  r.dep = std::move(dep);
  r.method = BlanketMethod::DirectionalExtended;
  r.branch = g.kind();
  return r;
}

bool is_minimal_separator(const Graph& g, const VertexSet& b,
                          const VertexSet& d, const VertexSet& e,
                          const VertexSet& m) {
  g.check_vertices(b);
  g.check_vertices(d);
  g.check_vertices(e);
  g.check_vertices(m);
  if (!separated(g, b, d, m | e)) return false;
  VertexSet closure;
  if (g.is_directed()) closure = ancestral_closure(g, b | d | e);
  for (VertexId v : m) {
    VertexSet rest = m;
    rest.erase(v);
    // Dropping a vertex may only help if the remainder is trimmed to the
    // ancestral closure first; outside it, vertices can hold colliders open.
    if (g.is_directed()) rest = rest & closure;
    if (separated(g, b, d, rest | e)) return false;
  }
  return true;
}

VertexSet restrict_to_ancestral(const Graph& g, const VertexSet& b,
                                const VertexSet& d, const VertexSet& e,
                                const VertexSet& m) {
  if (!g.is_directed())
    throw KindMismatch("restrict_to_ancestral requires a directed graph");
  g.check_vertices(m);
  return m & ancestral_closure(g, b | d | e);
}

bool has_separating_subset(const Graph& g, const VertexSet& b,
                           const VertexSet& d, const VertexSet& e,
                           const VertexSet& m) {
  if (!g.is_directed())
    throw KindMismatch("has_separating_subset requires a directed graph");
  VertexSet core = restrict_to_ancestral(g, b, d, e, m);
  return separated(g, b, d, core | e);
}

}  // namespace mb
