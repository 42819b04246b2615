#include "mb/causal.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mb/blankets.hpp"

namespace mb {

namespace {

constexpr double kRowSumTolerance = 1e-12;

std::size_t table_size_of(const std::vector<int>& card) {
  std::size_t n = 1;
  for (int c : card) n *= static_cast<std::size_t>(c);
  return n;
}

int position_in_scope(const Factor& f, VertexId v) {
  auto it = std::lower_bound(f.scope.begin(), f.scope.end(), v);
  if (it == f.scope.end() || *it != v) return -1;
  return static_cast<int>(it - f.scope.begin());
}

}  // namespace

std::size_t Factor::table_size() const { return table_size_of(card); }

std::vector<std::size_t> row_major_strides(const std::vector<int>& card) {
  std::vector<std::size_t> s(card.size(), 1);
  for (int i = static_cast<int>(card.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * static_cast<std::size_t>(card[i + 1]);
  return s;
}

Factor product(const Factor& a, const Factor& b) {
  Factor r;
  // Merge the two sorted scopes.
  std::size_t ia = 0, ib = 0;
  while (ia < a.scope.size() || ib < b.scope.size()) {
    bool take_a;
    if (ia == a.scope.size())
      take_a = false;
    else if (ib == b.scope.size())
      take_a = true;
    else if (a.scope[ia] == b.scope[ib]) {
      if (a.card[ia] != b.card[ib])
        throw Error("factor product: cardinality mismatch on shared variable");
      r.scope.push_back(a.scope[ia]);
      r.card.push_back(a.card[ia]);
      ++ia;
      ++ib;
      continue;
    } else
      take_a = a.scope[ia] < b.scope[ib];
    if (take_a) {
      r.scope.push_back(a.scope[ia]);
      r.card.push_back(a.card[ia]);
      ++ia;
    } else {
      r.scope.push_back(b.scope[ib]);
      r.card.push_back(b.card[ib]);
      ++ib;
    }
  }

  const int k = static_cast<int>(r.scope.size());
  auto sa = row_major_strides(a.card);
  auto sb = row_major_strides(b.card);
  // Stride each result variable contributes inside a and b (0 when absent).
  std::vector<std::size_t> ca(k, 0), cb(k, 0);
  for (int i = 0; i < k; ++i) {
    int pa = position_in_scope(a, r.scope[i]);
    int pb = position_in_scope(b, r.scope[i]);
    if (pa >= 0) ca[i] = sa[pa];
    if (pb >= 0) cb[i] = sb[pb];
  }

  r.values.resize(table_size_of(r.card));
  std::vector<int> assign(k, 0);
  std::size_t idx_a = 0, idx_b = 0;
  for (std::size_t linear = 0;; ++linear) {
    r.values[linear] = a.values[idx_a] * b.values[idx_b];
    int p = k - 1;
    while (p >= 0) {
      ++assign[p];
      idx_a += ca[p];
      idx_b += cb[p];
      if (assign[p] < r.card[p]) break;
      idx_a -= ca[p] * static_cast<std::size_t>(r.card[p]);
      idx_b -= cb[p] * static_cast<std::size_t>(r.card[p]);
      assign[p] = 0;
      --p;
    }
    if (p < 0) break;
  }
  return r;
}

Factor sum_out(const Factor& f, VertexId v) {
  int pos = position_in_scope(f, v);
  if (pos < 0) throw Error("sum_out: variable not in factor scope");
  Factor r;
  r.scope = f.scope;
  r.card = f.card;
  r.scope.erase(r.scope.begin() + pos);
  r.card.erase(r.card.begin() + pos);
  r.values.assign(table_size_of(r.card), 0.0);

  auto sr = row_major_strides(r.card);
  const int k = static_cast<int>(f.scope.size());
  std::vector<std::size_t> cr(k, 0);  // result stride per source variable
  for (int i = 0, j = 0; i < k; ++i) {
    if (i == pos) continue;
    cr[i] = sr[j++];
  }

  std::vector<int> assign(k, 0);
  std::size_t idx_r = 0;
  for (std::size_t linear = 0; linear < f.values.size(); ++linear) {
    r.values[idx_r] += f.values[linear];
    int p = k - 1;
    while (p >= 0) {
      ++assign[p];
      idx_r += cr[p];
      if (assign[p] < f.card[p]) break;
      idx_r -= cr[p] * static_cast<std::size_t>(f.card[p]);
      assign[p] = 0;
      --p;
    }
    if (p < 0) break;
  }
  return r;
}

Factor reduce(const Factor& f, VertexId v, int value) {
  int pos = position_in_scope(f, v);
  if (pos < 0) throw Error("reduce: variable not in factor scope");
  if (value < 0 || value >= f.card[pos])
    throw Error("reduce: value out of range");
  Factor r;
  r.scope = f.scope;
  r.card = f.card;
  r.scope.erase(r.scope.begin() + pos);
  r.card.erase(r.card.begin() + pos);
  r.values.resize(table_size_of(r.card));

  auto sf = row_major_strides(f.card);
  const int k = static_cast<int>(r.scope.size());
  std::vector<std::size_t> cf(k, 0);  // source stride per result variable
  for (int i = 0, j = 0; i < static_cast<int>(f.scope.size()); ++i) {
    if (i == pos) continue;
    cf[j++] = sf[i];
  }

  std::vector<int> assign(k, 0);
  std::size_t idx_f = static_cast<std::size_t>(value) * sf[pos];
  for (std::size_t linear = 0; linear < r.values.size(); ++linear) {
    r.values[linear] = f.values[idx_f];
    int p = k - 1;
    while (p >= 0) {
      ++assign[p];
      idx_f += cf[p];
      if (assign[p] < r.card[p]) break;
      idx_f -= cf[p] * static_cast<std::size_t>(r.card[p]);
      assign[p] = 0;
      --p;
    }
    if (p < 0) break;
  }
  return r;
}

DiscreteModel::DiscreteModel(Graph graph, std::vector<int> domains,
                             std::vector<Factor> factors)
    : graph_(std::move(graph)),
      domains_(std::move(domains)),
      factors_(std::move(factors)) {
  const int n = graph_.vertex_count();
  if (static_cast<int>(domains_.size()) != n)
    throw Error("model: one domain size per vertex required");
  for (int c : domains_)
    if (c < 2) throw Error("model: every domain needs at least two values");

  for (const auto& f : factors_) {
    if (f.scope.size() != f.card.size())
      throw Error("model: factor scope/cardinality length mismatch");
    if (!std::is_sorted(f.scope.begin(), f.scope.end()) ||
        std::adjacent_find(f.scope.begin(), f.scope.end()) != f.scope.end())
      throw Error("model: factor scope must be strictly ascending");
    for (std::size_t i = 0; i < f.scope.size(); ++i) {
      graph_.check_vertex(f.scope[i]);
      if (f.card[i] != domains_[f.scope[i]])
        throw Error("model: factor cardinality disagrees with domain");
    }
    if (f.values.size() != f.table_size())
      throw Error("model: factor table has the wrong number of entries");
    for (double x : f.values)
      if (!(x >= 0.0)) throw Error("model: negative or NaN factor entry");
  }

  if (graph_.is_directed()) {
    cpt_of_.assign(n, -1);
    for (int idx = 0; idx < static_cast<int>(factors_.size()); ++idx) {
      const auto& f = factors_[idx];
      // The CPT of v spans v and its parents; identify v as the scope vertex
      // whose parents make up the rest.
      VertexId child = -1;
      for (VertexId v : f.scope) {
        auto ps = graph_.parents_of(v);
        VertexSet expect(std::vector<VertexId>(ps.begin(), ps.end()));
        expect.insert(v);
        if (expect == VertexSet(f.scope)) {
          child = v;
          break;
        }
      }
      if (child < 0)
        throw Error("model: factor scope is not a vertex plus its parents");
      if (cpt_of_[child] >= 0)
        throw Error("model: two tables claim vertex " + graph_.label(child));
      cpt_of_[child] = idx;

      // Conditional rows must be distributions.
      int pos = position_in_scope(f, child);
      std::size_t rows = f.table_size() / f.card[pos];
      std::vector<double> row_sum(rows, 0.0);
      std::vector<int> assign(f.scope.size(), 0);
      std::size_t row_idx = 0;  // linear index with the child removed
      std::vector<std::size_t> row_stride(f.scope.size(), 0);
      {
        Factor shape = f;
        shape.scope.erase(shape.scope.begin() + pos);
        shape.card.erase(shape.card.begin() + pos);
        auto rs = row_major_strides(shape.card);
        for (std::size_t i = 0, j = 0; i < f.scope.size(); ++i) {
          if (static_cast<int>(i) == pos) continue;
          row_stride[i] = rs[j++];
        }
      }
      for (std::size_t linear = 0; linear < f.values.size(); ++linear) {
        row_sum[row_idx] += f.values[linear];
        int p = static_cast<int>(f.scope.size()) - 1;
        while (p >= 0) {
          ++assign[p];
          row_idx += row_stride[p];
          if (assign[p] < f.card[p]) break;
          row_idx -= row_stride[p] * static_cast<std::size_t>(f.card[p]);
          assign[p] = 0;
          --p;
        }
        if (p < 0) break;
      }
      for (double s : row_sum)
        if (std::abs(s - 1.0) > kRowSumTolerance)
          throw BadRowSum("table row for vertex " + graph_.label(child) +
                          " sums to " + std::to_string(s));
    }
    for (VertexId v = 0; v < n; ++v)
      if (cpt_of_[v] < 0)
        throw MissingCPT("no table for vertex " + graph_.label(v));
  } else {
    for (const auto& f : factors_) {
      for (std::size_t i = 0; i < f.scope.size(); ++i)
        for (std::size_t j = i + 1; j < f.scope.size(); ++j)
          if (!graph_.has_arc(f.scope[i], f.scope[j]))
            throw Error("model: potential scope is not a clique");
    }
  }
}

int DiscreteModel::domain(VertexId v) const {
  graph_.check_vertex(v);
  return domains_[v];
}

int DiscreteModel::cpt_index(VertexId v) const {
  if (!graph_.is_directed())
    throw KindMismatch("cpt_index requires a directed model");
  graph_.check_vertex(v);
  return cpt_of_[v];
}

namespace {

// Min-degree elimination order over the interaction graph induced by the
// factor scopes; ties break on the smaller vertex id.
std::vector<VertexId> min_degree_order(int n,
                                       const std::vector<Factor>& factors,
                                       const VertexSet& eliminate) {
  std::vector<std::set<VertexId>> adj(n);
  for (const auto& f : factors)
    for (std::size_t i = 0; i < f.scope.size(); ++i)
      for (std::size_t j = i + 1; j < f.scope.size(); ++j) {
        adj[f.scope[i]].insert(f.scope[j]);
        adj[f.scope[j]].insert(f.scope[i]);
      }

  std::vector<VertexId> order;
  VertexSet remaining = eliminate;
  while (!remaining.empty()) {
    VertexId best = -1;
    std::size_t best_deg = 0;
    for (VertexId v : remaining) {
      std::size_t deg = adj[v].size();
      if (best < 0 || deg < best_deg) {
        best = v;
        best_deg = deg;
      }
    }
    order.push_back(best);
    // Fill in: neighbors of the eliminated vertex become a clique.
    std::vector<VertexId> nb(adj[best].begin(), adj[best].end());
    for (VertexId u : nb) adj[u].erase(best);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        adj[nb[i]].insert(nb[j]);
        adj[nb[j]].insert(nb[i]);
      }
    adj[best].clear();
    remaining.erase(best);
  }
  return order;
}

Factor scalar_one() { return Factor{{}, {}, {1.0}}; }

}  // namespace

Distribution marginal_with_order(const DiscreteModel& m, const VertexSet& query,
                                 const Evidence& evidence,
                                 std::span<const VertexId> order) {
  const Graph& g = m.graph();
  g.check_vertices(query);
  VertexSet ev_vars;
  for (const auto& [v, val] : evidence) {
    g.check_vertex(v);
    if (val < 0 || val >= m.domain(v))
      throw Error("marginal: evidence value out of range for vertex " +
                  g.label(v));
    ev_vars.insert(v);
  }
  if (query.intersects(ev_vars))
    throw Error("marginal: query and evidence variables overlap");

  VertexSet eliminate = g.all_vertices() - query - ev_vars;
  {
    VertexSet given(std::vector<VertexId>(order.begin(), order.end()));
    if (!(given == eliminate) || given.size() != order.size())
      throw Error("marginal: elimination order must cover exactly the "
                  "non-query, non-evidence variables");
  }

  std::vector<Factor> live;
  live.reserve(m.factors().size());
  for (const auto& f : m.factors()) {
    Factor cur = f;
    for (VertexId v : ev_vars)
      if (position_in_scope(cur, v) >= 0) cur = reduce(cur, v, evidence.at(v));
    live.push_back(std::move(cur));
  }

  for (VertexId v : order) {
    Factor joined = scalar_one();
    bool any = false;
    std::vector<Factor> next;
    next.reserve(live.size());
    for (auto& f : live) {
      if (position_in_scope(f, v) >= 0) {
        joined = any ? product(joined, f) : std::move(f);
        any = true;
      } else {
        next.push_back(std::move(f));
      }
    }
    // A variable in no live factor only scales the table uniformly.
    if (any) next.push_back(sum_out(joined, v));
    live = std::move(next);
  }

  Factor result = scalar_one();
  for (auto& f : live) result = product(result, f);

  // Query variables untouched by any factor contribute a uniform axis.
  for (VertexId v : query) {
    if (position_in_scope(result, v) < 0) {
      Factor unit;
      unit.scope = {v};
      unit.card = {m.domain(v)};
      unit.values.assign(m.domain(v), 1.0);
      result = product(result, unit);
    }
  }

  double total = 0.0;
  for (double x : result.values) total += x;
  if (total <= 0.0)
    throw ZeroEvidenceProbability("conditioning event has probability zero");
  Distribution dist;
  dist.vars = result.scope;
  dist.card = result.card;
  dist.probs = std::move(result.values);
  for (double& x : dist.probs) x /= total;
  return dist;
}

Distribution marginal(const DiscreteModel& m, const VertexSet& query,
                      const Evidence& evidence) {
  const Graph& g = m.graph();
  VertexSet ev_vars;
  for (const auto& [v, val] : evidence) {
    g.check_vertex(v);
    if (val < 0 || val >= m.domain(v))
      throw Error("marginal: evidence value out of range for vertex " +
                  g.label(v));
    ev_vars.insert(v);
  }
  VertexSet eliminate = g.all_vertices() - query - ev_vars;

  std::vector<Factor> reduced;
  reduced.reserve(m.factors().size());
  for (const auto& f : m.factors()) {
    Factor cur = f;
    for (VertexId v : ev_vars)
      if (position_in_scope(cur, v) >= 0)
        cur = reduce(cur, v, evidence.at(v));
    reduced.push_back(std::move(cur));
  }
  auto order = min_degree_order(g.vertex_count(), reduced, eliminate);
  return marginal_with_order(m, query, evidence, order);
}

VertexSet adjustment_set(const Graph& g, const VertexSet& b,
                         const VertexSet& d) {
  if (!g.is_directed())
    throw KindMismatch("adjustment_set requires a directed graph");
  g.check_vertices(b);
  g.check_vertices(d);
  if (b.intersects(d))
    throw Error("adjustment_set: cause and effect sets overlap");

  VertexSet t = (descendants(g, b) & ancestors(g, d)) | d;
  Graph cut = remove_outgoing(g, b);
  VertexSet s = directional_blanket(cut, t, b, {}).blanket;

  // A usable set must stay clear of everything downstream of the
  // intervention: conditioning on a descendant biases the stratum weights
  // P(S=s). With a single intervened vertex the construction above cannot
  // pick one (any vertex reaching B or T from below would close a cycle),
  // but with several, a vertex can sit above one intervened vertex and
  // below another, and then no set found this way is usable.
  if (s.intersects(descendants(g, b)))
    throw NoSeparator(
        "adjustment_set: the candidate set contains descendants of the "
        "intervened vertices");
  return s;
}

CausalEffect causal_effect_adjustment(const DiscreteModel& m,
                                      const Evidence& do_assign,
                                      const VertexSet& d) {
  const Graph& g = m.graph();
  VertexSet b;
  for (const auto& [v, val] : do_assign) {
    g.check_vertex(v);
    if (val < 0 || val >= m.domain(v))
      throw Error("causal effect: intervention value out of range");
    b.insert(v);
  }
  if (b.empty()) throw Error("causal effect: empty intervention");

  VertexSet s = adjustment_set(g, b, d);

  // Joint over the adjustment set and the intervened variables, used both
  // for the stratum weights P(s) and the positivity check P(s, b) > 0.
  Distribution joint_sb = marginal(m, s | b, {});
  Distribution p_s = marginalize(joint_sb, s);

  Distribution out;
  out.vars = d.ids();
  for (VertexId v : d) out.card.push_back(m.domain(v));
  std::vector<double> accum(table_size_of(out.card), 0.0);
  bool estimable = true;

  // Iterate over the strata of S.
  auto s_strides = row_major_strides(p_s.card);
  std::size_t s_count = p_s.probs.size();
  auto sb_strides = row_major_strides(joint_sb.card);
  for (std::size_t si = 0; si < s_count; ++si) {
    double ps = p_s.probs[si];
    if (ps <= 0.0) continue;

    // Decode the stratum assignment and locate P(S=s, B=b).
    Evidence ev = do_assign;
    std::size_t rem = si;
    std::size_t sb_idx = 0;
    for (std::size_t i = 0; i < p_s.vars.size(); ++i) {
      int val = static_cast<int>(rem / s_strides[i]);
      rem %= s_strides[i];
      ev[p_s.vars[i]] = val;
    }
    for (std::size_t i = 0; i < joint_sb.vars.size(); ++i)
      sb_idx += static_cast<std::size_t>(ev.at(joint_sb.vars[i])) *
                sb_strides[i];
    if (joint_sb.probs[sb_idx] <= 0.0) {
      // P(B=b) vanishes on this stratum: the conditional is undefined.
      estimable = false;
      continue;
    }

    Distribution cond = marginal(m, d, ev);
    for (std::size_t i = 0; i < accum.size(); ++i)
      accum[i] += ps * cond.probs[i];
  }

  double total = 0.0;
  for (double x : accum) total += x;
  if (total <= 0.0)
    throw ZeroEvidenceProbability(
        "intervention assignment has probability zero in every stratum");
  for (double& x : accum) x /= total;
  out.probs = std::move(accum);
  return {std::move(out), estimable};
}

Distribution causal_effect_truncated(const DiscreteModel& m,
                                     const Evidence& do_assign,
                                     const VertexSet& d) {
  const Graph& g = m.graph();
  if (!g.is_directed())
    throw KindMismatch("causal_effect_truncated requires a directed model");
  VertexSet b;
  for (const auto& [v, val] : do_assign) {
    g.check_vertex(v);
    if (val < 0 || val >= m.domain(v))
      throw Error("causal effect: intervention value out of range");
    b.insert(v);
  }
  if (b.empty()) throw Error("causal effect: empty intervention");

  Graph cut = remove_incoming(g, b);
  std::vector<Factor> factors;
  factors.reserve(m.factors().size());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (b.contains(v)) {
      Factor point;
      point.scope = {v};
      point.card = {m.domain(v)};
      point.values.assign(m.domain(v), 0.0);
      point.values[do_assign.at(v)] = 1.0;
      factors.push_back(std::move(point));
    } else {
      factors.push_back(m.factors()[m.cpt_index(v)]);
    }
  }
  DiscreteModel cut_model(std::move(cut), m.domains(), std::move(factors));
  return marginal(cut_model, d, {});
}

Distribution marginalize(const Distribution& dist, const VertexSet& keep) {
  Factor f{dist.vars, dist.card, dist.probs};
  for (VertexId v : dist.vars)
    if (!keep.contains(v)) f = sum_out(f, v);
  return Distribution{f.scope, f.card, f.values};
}

double max_abs_diff(const Distribution& a, const Distribution& b) {
  if (a.vars != b.vars || a.card != b.card ||
      a.probs.size() != b.probs.size())
    throw Error("max_abs_diff: distributions have different shapes");
  double m = 0.0;
  for (std::size_t i = 0; i < a.probs.size(); ++i)
    m = std::max(m, std::abs(a.probs[i] - b.probs[i]));
  return m;
}

}  // namespace mb
