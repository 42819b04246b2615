#include "mb/graph.hpp"

#include <algorithm>
#include <deque>
#include <queue>

namespace mb {

VertexSet::VertexSet(std::vector<VertexId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool VertexSet::contains(VertexId v) const {
  return std::binary_search(ids_.begin(), ids_.end(), v);
}

void VertexSet::insert(VertexId v) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
  if (it == ids_.end() || *it != v) ids_.insert(it, v);
}

void VertexSet::erase(VertexId v) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
  if (it != ids_.end() && *it == v) ids_.erase(it);
}

VertexSet VertexSet::unite(const VertexSet& other) const {
  std::vector<VertexId> out;
  out.reserve(ids_.size() + other.ids_.size());
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(),
                 other.ids_.end(), std::back_inserter(out));
  VertexSet r;
  r.ids_ = std::move(out);
  return r;
}

VertexSet VertexSet::intersect(const VertexSet& other) const {
  std::vector<VertexId> out;
  std::set_intersection(ids_.begin(), ids_.end(), other.ids_.begin(),
                        other.ids_.end(), std::back_inserter(out));
  VertexSet r;
  r.ids_ = std::move(out);
  return r;
}

VertexSet VertexSet::minus(const VertexSet& other) const {
  std::vector<VertexId> out;
  std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(),
                      other.ids_.end(), std::back_inserter(out));
  VertexSet r;
  r.ids_ = std::move(out);
  return r;
}

bool VertexSet::is_subset_of(const VertexSet& other) const {
  return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(),
                       ids_.end());
}

bool VertexSet::intersects(const VertexSet& other) const {
  auto a = ids_.begin();
  auto b = other.ids_.begin();
  while (a != ids_.end() && b != other.ids_.end()) {
    if (*a == *b) return true;
    if (*a < *b)
      ++a;
    else
      ++b;
  }
  return false;
}

namespace {

// Walks depth-first from any unfinished vertex until it meets a vertex on the
// current stack, then formats the cycle for the error message.
std::string find_cycle(const std::vector<std::vector<VertexId>>& out,
                       const std::vector<std::string>& labels) {
  const int n = static_cast<int>(labels.size());
  std::vector<int> state(n, 0);  // 0 unseen, 1 on stack, 2 done
  std::vector<VertexId> stack;

  // Iterative DFS that remembers the path to the current vertex.
  for (VertexId root = 0; root < n; ++root) {
    if (state[root] != 0) continue;
    std::vector<std::pair<VertexId, std::size_t>> frames{{root, 0}};
    state[root] = 1;
    stack.push_back(root);
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < out[v].size()) {
        VertexId w = out[v][next++];
        if (state[w] == 1) {
          // Found a cycle: slice the stack from w onwards.
          std::string msg = "cycle:";
          auto it = std::find(stack.begin(), stack.end(), w);
          for (; it != stack.end(); ++it) msg += " " + labels[*it] + " ->";
          msg += " " + labels[w];
          return msg;
        }
        if (state[w] == 0) {
          state[w] = 1;
          stack.push_back(w);
          frames.emplace_back(w, 0);
        }
      } else {
        state[v] = 2;
        stack.pop_back();
        frames.pop_back();
      }
    }
  }
  return "cycle detected";
}

}  // namespace

Graph Graph::build(GraphKind kind, const std::vector<std::string>& labels,
                   const std::vector<std::pair<std::string, std::string>>& pairs) {
  Graph g;
  g.kind_ = kind;
  g.labels_ = labels;
  g.label_to_id_.reserve(labels.size());
  for (VertexId i = 0; i < static_cast<VertexId>(labels.size()); ++i) {
    auto [it, inserted] = g.label_to_id_.emplace(labels[i], i);
    (void)it;
    if (!inserted) throw DuplicateLabel("duplicate vertex label: " + labels[i]);
  }

  const int n = g.vertex_count();
  g.out_.assign(n, {});
  if (kind == GraphKind::Directed) g.in_.assign(n, {});

  std::vector<std::pair<VertexId, VertexId>> arcs;
  arcs.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    VertexId u = g.index_of(a);
    VertexId v = g.index_of(b);
    if (u == v) throw SelfLoop("self-loop on vertex: " + a);
    if (kind == GraphKind::Undirected && u > v) std::swap(u, v);
    arcs.emplace_back(u, v);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  g.arcs_ = std::move(arcs);

  for (const auto& [u, v] : g.arcs_) {
    if (kind == GraphKind::Directed) {
      g.out_[u].push_back(v);
      g.in_[v].push_back(u);
    } else {
      g.out_[u].push_back(v);
      g.out_[v].push_back(u);
    }
  }
  for (auto& adj : g.out_) std::sort(adj.begin(), adj.end());
  for (auto& adj : g.in_) std::sort(adj.begin(), adj.end());

  if (kind == GraphKind::Directed) {
    // Kahn's algorithm; a leftover vertex means a cycle.
    std::vector<int> indeg(n, 0);
    for (const auto& [u, v] : g.arcs_) {
      (void)u;
      ++indeg[v];
    }
    std::deque<VertexId> ready;
    for (VertexId v = 0; v < n; ++v)
      if (indeg[v] == 0) ready.push_back(v);
    g.topo_.reserve(n);
    while (!ready.empty()) {
      VertexId v = ready.front();
      ready.pop_front();
      g.topo_.push_back(v);
      for (VertexId w : g.out_[v])
        if (--indeg[w] == 0) ready.push_back(w);
    }
    if (static_cast<int>(g.topo_.size()) != n)
      throw CycleDetected(find_cycle(g.out_, g.labels_));
  }

  return g;
}

const std::string& Graph::label(VertexId v) const {
  check_vertex(v);
  return labels_[v];
}

VertexId Graph::index_of(const std::string& label) const {
  auto it = label_to_id_.find(label);
  if (it == label_to_id_.end()) throw UnknownLabel("unknown label: " + label);
  return it->second;
}

bool Graph::has_label(const std::string& label) const {
  return label_to_id_.count(label) != 0;
}

std::span<const VertexId> Graph::children_of(VertexId v) const {
  if (!is_directed()) throw KindMismatch("children_of requires a directed graph");
  check_vertex(v);
  return out_[v];
}

std::span<const VertexId> Graph::parents_of(VertexId v) const {
  if (!is_directed()) throw KindMismatch("parents_of requires a directed graph");
  check_vertex(v);
  return in_[v];
}

std::span<const VertexId> Graph::topological_order() const {
  if (!is_directed())
    throw KindMismatch("topological_order requires a directed graph");
  return topo_;
}

std::span<const VertexId> Graph::neighbors_of(VertexId v) const {
  if (is_directed())
    throw KindMismatch("neighbors_of requires an undirected graph");
  check_vertex(v);
  return out_[v];
}

bool Graph::has_arc(VertexId u, VertexId v) const {
  check_vertex(u);
  check_vertex(v);
  const auto& adj = out_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

VertexSet Graph::all_vertices() const {
  std::vector<VertexId> ids(vertex_count());
  for (int i = 0; i < vertex_count(); ++i) ids[i] = i;
  return VertexSet(std::move(ids));
}

VertexSet Graph::resolve(const std::vector<std::string>& labels) const {
  std::vector<VertexId> ids;
  ids.reserve(labels.size());
  for (const auto& l : labels) ids.push_back(index_of(l));
  return VertexSet(std::move(ids));
}

void Graph::check_vertex(VertexId v) const {
  if (v < 0 || v >= vertex_count())
    throw UnknownVertex("vertex id out of range: " + std::to_string(v));
}

void Graph::check_vertices(const VertexSet& vs) const {
  for (VertexId v : vs) check_vertex(v);
}

VertexSet parents(const Graph& g, const VertexSet& vs) {
  if (!g.is_directed()) throw KindMismatch("parents requires a directed graph");
  g.check_vertices(vs);
  std::vector<VertexId> out;
  for (VertexId v : vs) {
    auto ps = g.parents_of(v);
    out.insert(out.end(), ps.begin(), ps.end());
  }
  return VertexSet(std::move(out));
}

namespace {

// BFS over one adjacency direction; returns all vertices reachable from vs
// through at least one arc.
VertexSet sweep(const Graph& g, const VertexSet& vs, bool follow_children) {
  g.check_vertices(vs);
  std::vector<std::uint8_t> seen(g.vertex_count(), 0);
  std::deque<VertexId> queue;
  auto expand = [&](VertexId v) {
    auto next = follow_children ? g.children_of(v) : g.parents_of(v);
    for (VertexId w : next) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  };
  for (VertexId v : vs) expand(v);
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    expand(v);
  }
  std::vector<VertexId> out;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (seen[v]) out.push_back(v);
  return VertexSet(std::move(out));
}

}  // namespace

VertexSet ancestors(const Graph& g, const VertexSet& vs) {
  if (!g.is_directed())
    throw KindMismatch("ancestors requires a directed graph");
  return sweep(g, vs, /*follow_children=*/false);
}

VertexSet descendants(const Graph& g, const VertexSet& vs) {
  if (!g.is_directed())
    throw KindMismatch("descendants requires a directed graph");
  return sweep(g, vs, /*follow_children=*/true);
}

VertexSet ancestral_closure(const Graph& g, const VertexSet& vs) {
  return vs | ancestors(g, vs);
}

namespace {

Graph rebuild_without(const Graph& g, const VertexSet& vs,
                      bool drop_outgoing) {
  if (!g.is_directed())
    throw KindMismatch("arc removal requires a directed graph");
  g.check_vertices(vs);
  std::vector<std::string> labels;
  labels.reserve(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) labels.push_back(g.label(v));
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& [u, v] : g.arcs()) {
    VertexId pivot = drop_outgoing ? u : v;
    if (vs.contains(pivot)) continue;
    pairs.emplace_back(g.label(u), g.label(v));
  }
  return Graph::build(GraphKind::Directed, labels, pairs);
}

}  // namespace

Graph remove_outgoing(const Graph& g, const VertexSet& vs) {
  return rebuild_without(g, vs, /*drop_outgoing=*/true);
}

Graph remove_incoming(const Graph& g, const VertexSet& vs) {
  return rebuild_without(g, vs, /*drop_outgoing=*/false);
}

}  // namespace mb
