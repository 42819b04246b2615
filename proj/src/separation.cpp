#include "mb/separation.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <utility>
#include <vector>

namespace mb {

namespace {

// Scratch space reused across reachability queries.  All per-vertex state
// lives in dense stamp arrays where a cell counts as set exactly when it
// carries the current query's epoch, so starting a query is a counter bump
// plus stamping the (usually small) conditioning set — never a full clear.
struct ReachScratch {
  std::uint32_t epoch = 0;
  std::vector<std::uint32_t> given, target, reached, down, up, anc;
  std::vector<std::uint8_t> anc_open;  // meaningful when anc[v] == epoch
  std::vector<std::pair<VertexId, std::uint8_t>> queue;
  std::vector<std::pair<VertexId, std::uint32_t>> walk;

  void prepare(int n) {
    if (static_cast<int>(given.size()) < n) {
      given.assign(n, 0);
      target.assign(n, 0);
      reached.assign(n, 0);
      down.assign(n, 0);
      up.assign(n, 0);
      anc.assign(n, 0);
      anc_open.assign(n, 0);
    }
    if (++epoch == 0) {  // stamp wrap-around: restart the numbering cleanly
      std::fill(given.begin(), given.end(), 0);
      std::fill(target.begin(), target.end(), 0);
      std::fill(reached.begin(), reached.end(), 0);
      std::fill(down.begin(), down.end(), 0);
      std::fill(up.begin(), up.end(), 0);
      std::fill(anc.begin(), anc.end(), 0);
      epoch = 1;
    }
    queue.clear();
  }
};

thread_local ReachScratch tls;

// True when arriving downward at v may bounce back up: v is conditioned or
// has a conditioned vertex somewhere below it.  Resolved on demand with a
// memoised walk over the children, so a query only ever pays for the parts
// of the graph its frontier actually touches.
bool opens_collider(const Graph& g, ReachScratch& s, VertexId root) {
  const std::uint32_t ep = s.epoch;
  if (s.given[root] == ep) return true;
  if (s.anc[root] == ep) return s.anc_open[root] == 1;
  s.anc[root] = ep;
  s.anc_open[root] = 2;  // in progress
  s.walk.clear();
  s.walk.push_back({root, 0});
  while (!s.walk.empty()) {
    auto& [v, next] = s.walk.back();
    auto ch = g.children_of(v);
    bool descended = false;
    while (next < ch.size()) {
      VertexId c = ch[next++];
      if (s.given[c] == ep || (s.anc[c] == ep && s.anc_open[c] == 1)) {
        // Everything on the walk stack sits above c, so it is all open.
        for (const auto& entry : s.walk) s.anc_open[entry.first] = 1;
        s.walk.clear();
        return true;
      }
      if (s.anc[c] != ep) {
        s.anc[c] = ep;
        s.anc_open[c] = 2;
        s.walk.push_back({c, 0});
        descended = true;
        break;
      }
      // Already resolved closed: skip.
    }
    if (descended) continue;
    s.anc_open[v] = 0;
    s.walk.pop_back();
  }
  return false;
}

// Runs the reachability flow from `sources` under conditioning set `given`.
// With `targets` set the walk stops at the first target reached and reports
// the hit; with `out` set it records every vertex reached (excluding the
// conditioning set, in visit order).
bool flow_directed(const Graph& g, const VertexSet& sources,
                   const VertexSet& given, const VertexSet* targets,
                   std::vector<VertexId>* out) {
  ReachScratch& s = tls;
  s.prepare(g.vertex_count());
  const std::uint32_t ep = s.epoch;
  for (VertexId v : given) s.given[v] = ep;
  if (targets)
    for (VertexId v : *targets)
      if (s.given[v] != ep) s.target[v] = ep;

  // State space: (vertex, direction of arrival).  Down = entered along an
  // arc pointing at the vertex, up = entered against an arc leaving it.
  auto push = [&](VertexId v, bool downwards) {
    auto& stamp = downwards ? s.down : s.up;
    if (stamp[v] != ep) {
      stamp[v] = ep;
      s.queue.emplace_back(v, downwards ? 1 : 0);
    }
  };
  for (VertexId v : sources) {
    if (s.given[v] == ep) continue;  // conditioned sources start nothing
    for (VertexId c : g.children_of(v)) push(c, true);
    for (VertexId p : g.parents_of(v)) push(p, false);
  }

  std::size_t head = 0;
  while (head < s.queue.size()) {
    auto [v, downwards] = s.queue[head++];
    if (s.given[v] != ep && s.reached[v] != ep) {
      s.reached[v] = ep;
      if (out) out->push_back(v);
      if (targets && s.target[v] == ep) return true;
    }
    if (downwards) {
      // Continue as a chain head unless blocked; bounce back upward only at
      // an open collider.
      if (s.given[v] != ep)
        for (VertexId c : g.children_of(v)) push(c, true);
      if (opens_collider(g, s, v))
        for (VertexId p : g.parents_of(v)) push(p, false);
    } else {
      // Arrived against an arc: v acts as a chain tail or a fork.
      if (s.given[v] != ep) {
        for (VertexId p : g.parents_of(v)) push(p, false);
        for (VertexId c : g.children_of(v)) push(c, true);
      }
    }
  }
  return false;
}

bool flow_undirected(const Graph& g, const VertexSet& sources,
                     const VertexSet& given, const VertexSet* targets,
                     std::vector<VertexId>* out) {
  ReachScratch& s = tls;
  s.prepare(g.vertex_count());
  const std::uint32_t ep = s.epoch;
  for (VertexId v : given) s.given[v] = ep;
  if (targets)
    for (VertexId v : *targets)
      if (s.given[v] != ep) s.target[v] = ep;

  auto visit = [&](VertexId v) -> bool {  // true: a target was reached
    if (s.given[v] == ep || s.reached[v] == ep) return false;
    s.reached[v] = ep;
    if (out) out->push_back(v);
    s.queue.emplace_back(v, 0);
    return targets && s.target[v] == ep;
  };
  for (VertexId v : sources) {
    if (s.given[v] == ep) continue;
    for (VertexId w : g.neighbors_of(v))
      if (visit(w)) return true;
  }
  std::size_t head = 0;
  while (head < s.queue.size()) {
    VertexId v = s.queue[head++].first;
    for (VertexId w : g.neighbors_of(v))
      if (visit(w)) return true;
  }
  return false;
}

// Marks `given` together with all its ancestors (the vertices whose
// conditioning opens colliders below them).  Used by the trail checker,
// where the eager version is fine: the input is a single explicit trail.
std::vector<std::uint8_t> mark_with_ancestors(const Graph& g,
                                              const VertexSet& given) {
  std::vector<std::uint8_t> flags(g.vertex_count(), 0);
  std::deque<VertexId> queue;
  for (VertexId v : given) {
    flags[v] = 1;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (VertexId p : g.parents_of(v)) {
      if (!flags[p]) {
        flags[p] = 1;
        queue.push_back(p);
      }
    }
  }
  return flags;
}

}  // namespace

VertexSet reachable(const Graph& g, const VertexSet& sources,
                    const VertexSet& given) {
  g.check_vertices(sources);
  g.check_vertices(given);
  std::vector<VertexId> out;
  if (g.is_directed())
    flow_directed(g, sources, given, nullptr, &out);
  else
    flow_undirected(g, sources, given, nullptr, &out);
  return VertexSet(std::move(out));
}

bool separated(const Graph& g, const VertexSet& x, const VertexSet& y,
               const VertexSet& z) {
  g.check_vertices(x);
  g.check_vertices(y);
  g.check_vertices(z);
  // A vertex shared by X and Y is a trivial trail unless conditioned away.
  if (!(x & y).is_subset_of(z)) return false;
  bool hit = g.is_directed() ? flow_directed(g, x, z, &y, nullptr)
                             : flow_undirected(g, x, z, &y, nullptr);
  return !hit;
}

bool is_d_separated(const Graph& g, const VertexSet& x, const VertexSet& y,
                    const VertexSet& z) {
  if (!g.is_directed())
    throw KindMismatch("is_d_separated requires a directed graph");
  return separated(g, x, y, z);
}

bool is_separated(const Graph& g, const VertexSet& x, const VertexSet& y,
                  const VertexSet& z) {
  if (g.is_directed())
    throw KindMismatch("is_separated requires an undirected graph");
  return separated(g, x, y, z);
}

bool is_active_trail(const Graph& g, const std::vector<VertexId>& trail,
                     const VertexSet& given) {
  g.check_vertices(given);
  if (trail.empty()) throw NotATrail("empty vertex sequence");
  for (VertexId v : trail) g.check_vertex(v);

  if (g.is_directed()) {
    // Determine each step's orientation; a DAG admits exactly one.
    const int len = static_cast<int>(trail.size());
    std::vector<bool> forward(len - 1);
    for (int i = 0; i + 1 < len; ++i) {
      if (g.has_arc(trail[i], trail[i + 1]))
        forward[i] = true;
      else if (g.has_arc(trail[i + 1], trail[i]))
        forward[i] = false;
      else
        throw NotATrail("vertices " + g.label(trail[i]) + " and " +
                        g.label(trail[i + 1]) + " are not adjacent");
    }
    auto opens = mark_with_ancestors(g, given);
    for (int i = 1; i + 1 < len; ++i) {
      bool collider = forward[i - 1] && !forward[i];
      if (collider) {
        if (!opens[trail[i]]) return false;
      } else {
        if (given.contains(trail[i])) return false;
      }
    }
    return true;
  }

  for (std::size_t i = 0; i + 1 < trail.size(); ++i) {
    if (!g.has_arc(trail[i], trail[i + 1]))
      throw NotATrail("vertices " + g.label(trail[i]) + " and " +
                      g.label(trail[i + 1]) + " are not adjacent");
  }
  for (std::size_t i = 1; i + 1 < trail.size(); ++i)
    if (given.contains(trail[i])) return false;
  return true;
}

}  // namespace mb
