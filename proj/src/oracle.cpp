#include "mb/oracle.hpp"

#include <algorithm>
#include <bit>

#include "mb/separation.hpp"

namespace mb::oracle {

namespace {

void guard_size(const Graph& g, const char* what) {
  if (g.vertex_count() > kMaxVertices)
    throw TooLarge(std::string(what) + ": graph has " +
                   std::to_string(g.vertex_count()) + " vertices, limit is " +
                   std::to_string(kMaxVertices));
}

// Adjacency ignoring orientation, used for trail enumeration.
std::vector<std::vector<VertexId>> trail_adjacency(const Graph& g) {
  std::vector<std::vector<VertexId>> adj(g.vertex_count());
  for (const auto& [u, v] : g.arcs()) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

void collect_trails(const std::vector<std::vector<VertexId>>& adj, VertexId at,
                    VertexId target, std::vector<VertexId>& path,
                    std::vector<std::uint8_t>& on_path,
                    std::vector<std::vector<VertexId>>& out) {
  if (at == target && path.size() >= 2) {
    out.push_back(path);
    return;  // extending past the target would revisit it
  }
  for (VertexId w : adj[at]) {
    if (on_path[w]) continue;
    on_path[w] = 1;
    path.push_back(w);
    collect_trails(adj, w, target, path, on_path, out);
    path.pop_back();
    on_path[w] = 0;
  }
}

VertexSet mask_to_set(const std::vector<VertexId>& ground,
                      std::uint32_t mask) {
  std::vector<VertexId> ids;
  for (std::size_t i = 0; i < ground.size(); ++i)
    if (mask & (std::uint32_t{1} << i)) ids.push_back(ground[i]);
  return VertexSet(std::move(ids));
}

// Keeps only the inclusion-minimal masks, assuming input sorted by
// population count.
std::vector<std::uint32_t> minimal_masks(std::vector<std::uint32_t> masks) {
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint32_t a, std::uint32_t b) {
                     int pa = std::popcount(a), pb = std::popcount(b);
                     return pa != pb ? pa < pb : a < b;
                   });
  std::vector<std::uint32_t> kept;
  for (std::uint32_t m : masks) {
    bool dominated = false;
    for (std::uint32_t k : kept)
      if ((m & k) == k) {
        dominated = true;
        break;
      }
    if (!dominated) kept.push_back(m);
  }
  return kept;
}

}  // namespace

std::vector<std::vector<VertexId>> enumerate_trails(const Graph& g, VertexId u,
                                                    VertexId v) {
  guard_size(g, "enumerate_trails");
  g.check_vertex(u);
  g.check_vertex(v);
  auto adj = trail_adjacency(g);
  std::vector<std::vector<VertexId>> out;
  std::vector<VertexId> path{u};
  std::vector<std::uint8_t> on_path(g.vertex_count(), 0);
  on_path[u] = 1;
  collect_trails(adj, u, v, path, on_path, out);
  return out;
}

bool is_d_separated_bruteforce(const Graph& g, const VertexSet& x,
                               const VertexSet& y, const VertexSet& z) {
  guard_size(g, "is_d_separated_bruteforce");
  g.check_vertices(x);
  g.check_vertices(y);
  g.check_vertices(z);
  if (!(x & y).is_subset_of(z)) return false;
  for (VertexId a : x - z)
    for (VertexId b : y - z) {
      if (a == b) return false;
      for (const auto& trail : enumerate_trails(g, a, b))
        if (is_active_trail(g, trail, z)) return false;
    }
  return true;
}

std::vector<VertexSet> all_minimal_separators(const Graph& g,
                                              const VertexSet& b,
                                              const VertexSet& d,
                                              const VertexSet& e) {
  guard_size(g, "all_minimal_separators");
  g.check_vertices(b);
  g.check_vertices(d);
  g.check_vertices(e);
  // Candidate separators avoid B and D, so the shared part of B and D must
  // already be conditioned by E for any separator to exist.
  if (!(b & d).is_subset_of(e)) return {};

  std::vector<VertexId> ground = (g.all_vertices() - (b | d | e)).ids();
  // The endpoints never vary with the candidate set, so enumerate the
  // trails between them once.
  std::vector<std::vector<VertexId>> trails;
  for (VertexId a : b - e)
    for (VertexId c : d - e) {
      if (a == c) return {};  // an unconditioned shared vertex never separates
      auto t = enumerate_trails(g, a, c);
      trails.insert(trails.end(), t.begin(), t.end());
    }

  std::vector<std::uint32_t> separating;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << ground.size());
       ++mask) {
    VertexSet given = mask_to_set(ground, mask) | e;
    bool blocked_all = true;
    for (const auto& trail : trails)
      if (is_active_trail(g, trail, given)) {
        blocked_all = false;
        break;
      }
    if (blocked_all) separating.push_back(mask);
  }

  std::vector<VertexSet> out;
  for (std::uint32_t mask : minimal_masks(separating))
    out.push_back(mask_to_set(ground, mask));
  std::sort(out.begin(), out.end(),
            [](const VertexSet& a, const VertexSet& b) {
              return a.ids() < b.ids();
            });
  return out;
}

VertexSet mb_in_set_bruteforce(const Graph& g, const VertexSet& b,
                               const VertexSet& c, const VertexSet& e) {
  guard_size(g, "mb_in_set_bruteforce");
  g.check_vertices(b);
  g.check_vertices(c);
  g.check_vertices(e);
  std::vector<VertexId> ground = (c - b).ids();

  std::vector<std::uint32_t> satisfying;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << ground.size());
       ++mask) {
    VertexSet m = mask_to_set(ground, mask);
    VertexSet rest = (c - b) - m;
    if (is_d_separated_bruteforce(g, b, rest, m | e)) satisfying.push_back(mask);
  }

  // The full candidate set always satisfies the condition, so the family is
  // non-empty; the blanket exists iff the family is closed under
  // intersection down to a least element.
  std::uint32_t inter = satisfying.front();
  for (std::uint32_t m : satisfying) inter &= m;
  if (std::find(satisfying.begin(), satisfying.end(), inter) ==
      satisfying.end())
    throw NoMinimum(
        "the satisfying sets have no least element under inclusion");
  return mask_to_set(ground, inter);
}

VertexSet directional_bruteforce(const Graph& g, const VertexSet& b,
                                 const VertexSet& d, const VertexSet& e) {
  guard_size(g, "directional_bruteforce");
  g.check_vertices(b);
  g.check_vertices(d);
  g.check_vertices(e);
  std::vector<VertexId> ground = (g.all_vertices() - (b | d | e)).ids();

  std::vector<std::uint32_t> separating;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << ground.size());
       ++mask) {
    if (is_d_separated_bruteforce(g, b, d, mask_to_set(ground, mask) | e))
      separating.push_back(mask);
  }
  if (separating.empty())
    throw NoSeparator("no conditioning set separates the two vertex sets");

  std::vector<VertexSet> candidates;
  for (std::uint32_t mask : minimal_masks(separating)) {
    VertexSet m = mask_to_set(ground, mask);
    bool independent_given_all = true;
    for (std::uint32_t other : separating) {
      VertexSet given = mask_to_set(ground, other) | e;
      if (!is_d_separated_bruteforce(g, d, m, given)) {
        independent_given_all = false;
        break;
      }
    }
    if (independent_given_all) candidates.push_back(std::move(m));
  }
  if (candidates.size() != 1)
    throw NotUnique("expected exactly one qualifying minimal separator, got " +
                    std::to_string(candidates.size()));
  return candidates.front();
}

namespace {

// Bron-Kerbosch with pivoting over bitmask vertex sets.
void bron_kerbosch(const std::vector<std::uint32_t>& nb, std::uint32_t r,
                   std::uint32_t p, std::uint32_t x,
                   std::vector<std::uint32_t>& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  std::uint32_t px = p | x;
  int pivot = -1, best = -1;
  for (int v = 0; v < 32; ++v)
    if (px & (std::uint32_t{1} << v)) {
      int gain = std::popcount(p & nb[v]);
      if (gain > best) {
        best = gain;
        pivot = v;
      }
    }
  std::uint32_t work = p & ~nb[pivot];
  for (int v = 0; v < 32; ++v) {
    std::uint32_t bit = std::uint32_t{1} << v;
    if (!(work & bit)) continue;
    bron_kerbosch(nb, r | bit, p & nb[v], x & nb[v], out);
    p &= ~bit;
    x |= bit;
  }
}

}  // namespace

std::vector<VertexSet> maximal_cliques(const Graph& g) {
  if (g.is_directed())
    throw KindMismatch("maximal_cliques requires an undirected graph");
  guard_size(g, "maximal_cliques");
  const int n = g.vertex_count();
  if (n == 0) return {};
  std::vector<std::uint32_t> nb(n, 0);
  for (const auto& [u, v] : g.arcs()) {
    nb[u] |= std::uint32_t{1} << v;
    nb[v] |= std::uint32_t{1} << u;
  }
  std::vector<std::uint32_t> masks;
  bron_kerbosch(nb, 0, n == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1,
                0, masks);
  std::vector<VertexSet> out;
  out.reserve(masks.size());
  for (std::uint32_t m : masks) {
    std::vector<VertexId> ids;
    for (int v = 0; v < n; ++v)
      if (m & (std::uint32_t{1} << v)) ids.push_back(v);
    out.push_back(VertexSet(std::move(ids)));
  }
  std::sort(out.begin(), out.end(),
            [](const VertexSet& a, const VertexSet& b) {
              return a.ids() < b.ids();
            });
  return out;
}

DiscreteModel sample_model(const Graph& g, std::uint64_t seed,
                           int max_domain) {
  if (max_domain < 2) throw Error("sample_model: max_domain must be >= 2");
  Rng rng(seed);
  const int n = g.vertex_count();
  std::vector<int> domains(n);
  for (int v = 0; v < n; ++v) domains[v] = rng.uniform_int(2, max_domain);

  std::vector<Factor> factors;
  if (g.is_directed()) {
    for (VertexId v = 0; v < n; ++v) {
      auto ps = g.parents_of(v);
      VertexSet scope_set(std::vector<VertexId>(ps.begin(), ps.end()));
      scope_set.insert(v);
      Factor f;
      f.scope = scope_set.ids();
      for (VertexId s : f.scope) f.card.push_back(domains[s]);
      f.values.assign(f.table_size(), 0.0);

      auto strides = row_major_strides(f.card);
      int vpos = 0;
      while (f.scope[vpos] != v) ++vpos;
      // Walk the parent configurations in row-major order and fill each
      // conditional row with a normalized vector of exponential draws.
      std::vector<int> parent_assign(f.scope.size(), 0);
      std::size_t base = 0;
      for (;;) {
        std::vector<double> row(domains[v]);
        double sum = 0.0;
        for (double& x : row) {
          x = rng.exp1();
          sum += x;
        }
        for (int val = 0; val < domains[v]; ++val)
          f.values[base + static_cast<std::size_t>(val) * strides[vpos]] =
              row[val] / sum;
        // Advance the parent odometer (skipping the child position).
        int p = static_cast<int>(f.scope.size()) - 1;
        while (p >= 0) {
          if (p == vpos) {
            --p;
            continue;
          }
          ++parent_assign[p];
          base += strides[p];
          if (parent_assign[p] < f.card[p]) break;
          base -= strides[p] * static_cast<std::size_t>(f.card[p]);
          parent_assign[p] = 0;
          --p;
        }
        if (p < 0) break;
      }
      factors.push_back(std::move(f));
    }
  } else {
    for (const VertexSet& clique : maximal_cliques(g)) {
      Factor f;
      f.scope = clique.ids();
      for (VertexId s : f.scope) f.card.push_back(domains[s]);
      f.values.resize(f.table_size());
      for (double& x : f.values) x = rng.exp1();
      factors.push_back(std::move(f));
    }
  }
  return DiscreteModel(g, std::move(domains), std::move(factors));
}

Distribution exact_joint(const DiscreteModel& m) {
  const Graph& g = m.graph();
  const int n = g.vertex_count();
  std::size_t total = 1;
  for (int v = 0; v < n; ++v) {
    total *= static_cast<std::size_t>(m.domain(v));
    if (total > kMaxJointEntries)
      throw TooLarge("exact_joint: joint table exceeds " +
                     std::to_string(kMaxJointEntries) + " entries");
  }

  struct Site {
    const Factor* f;
    std::vector<std::size_t> strides;  // per scope position
  };
  std::vector<Site> sites;
  for (const auto& f : m.factors())
    sites.push_back({&f, row_major_strides(f.card)});

  Distribution joint;
  joint.vars.resize(n);
  joint.card.resize(n);
  for (int v = 0; v < n; ++v) {
    joint.vars[v] = v;
    joint.card[v] = m.domain(v);
  }
  joint.probs.assign(total, 0.0);

  std::vector<int> assign(n, 0);
  double sum = 0.0;
  for (std::size_t linear = 0;; ++linear) {
    double p = 1.0;
    for (const auto& site : sites) {
      std::size_t idx = 0;
      for (std::size_t i = 0; i < site.f->scope.size(); ++i)
        idx += static_cast<std::size_t>(assign[site.f->scope[i]]) *
               site.strides[i];
      p *= site.f->values[idx];
    }
    joint.probs[linear] = p;
    sum += p;
    int q = n - 1;
    while (q >= 0) {
      ++assign[q];
      if (assign[q] < joint.card[q]) break;
      assign[q] = 0;
      --q;
    }
    if (q < 0) break;
  }
  if (sum <= 0.0) throw Error("exact_joint: model has zero total mass");
  for (double& p : joint.probs) p /= sum;
  return joint;
}

double ci_deviation(const Distribution& joint, const VertexSet& x,
                    const VertexSet& y, const VertexSet& z) {
  VertexSet all(joint.vars);
  if (!x.is_subset_of(all) || !y.is_subset_of(all) || !z.is_subset_of(all))
    throw Error("ci_deviation: variables outside the joint");

  VertexSet xs = x - z;
  VertexSet ys = y - z;
  if (xs.intersects(ys)) return 1.0;
  if (xs.empty() || ys.empty()) return 0.0;

  Distribution m = marginalize(joint, xs | ys | z);

  // Classify each variable of the marginal and give it a stride within its
  // class (row-major per class, ids ascending).
  enum Class { X, Y, Z };
  const std::size_t k = m.vars.size();
  std::vector<Class> cls(k);
  std::vector<int> card_x, card_y, card_z;
  for (std::size_t i = 0; i < k; ++i) {
    if (xs.contains(m.vars[i])) {
      cls[i] = X;
      card_x.push_back(m.card[i]);
    } else if (ys.contains(m.vars[i])) {
      cls[i] = Y;
      card_y.push_back(m.card[i]);
    } else {
      cls[i] = Z;
      card_z.push_back(m.card[i]);
    }
  }
  auto sx = row_major_strides(card_x);
  auto sy = row_major_strides(card_y);
  auto sz = row_major_strides(card_z);
  std::vector<std::size_t> stride(k);
  for (std::size_t i = 0, jx = 0, jy = 0, jz = 0; i < k; ++i) {
    if (cls[i] == X)
      stride[i] = sx[jx++];
    else if (cls[i] == Y)
      stride[i] = sy[jy++];
    else
      stride[i] = sz[jz++];
  }

  std::size_t nx = 1, ny = 1, nz = 1;
  for (int c : card_x) nx *= static_cast<std::size_t>(c);
  for (int c : card_y) ny *= static_cast<std::size_t>(c);
  for (int c : card_z) nz *= static_cast<std::size_t>(c);

  std::vector<double> pz(nz, 0.0), pxz(nz * nx, 0.0), pyz(nz * ny, 0.0),
      pxyz(nz * nx * ny, 0.0);

  std::vector<int> assign(k, 0);
  for (std::size_t linear = 0; linear < m.probs.size(); ++linear) {
    std::size_t ix = 0, iy = 0, iz = 0;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t c = static_cast<std::size_t>(assign[i]) * stride[i];
      if (cls[i] == X)
        ix += c;
      else if (cls[i] == Y)
        iy += c;
      else
        iz += c;
    }
    double p = m.probs[linear];
    pz[iz] += p;
    pxz[iz * nx + ix] += p;
    pyz[iz * ny + iy] += p;
    pxyz[(iz * nx + ix) * ny + iy] += p;

    int q = static_cast<int>(k) - 1;
    while (q >= 0) {
      ++assign[q];
      if (assign[q] < m.card[q]) break;
      assign[q] = 0;
      --q;
    }
    if (q < 0) break;
  }

  double worst = 0.0;
  for (std::size_t iz = 0; iz < nz; ++iz) {
    if (pz[iz] <= 0.0) continue;
    double dev = 0.0;
    for (std::size_t ix = 0; ix < nx; ++ix)
      for (std::size_t iy = 0; iy < ny; ++iy) {
        double lhs = pxyz[(iz * nx + ix) * ny + iy] / pz[iz];
        double rhs = (pxz[iz * nx + ix] / pz[iz]) * (pyz[iz * ny + iy] / pz[iz]);
        dev += std::abs(lhs - rhs);
      }
    worst = std::max(worst, 0.5 * dev);
  }
  return worst;
}

bool check_ci(const Distribution& joint, const VertexSet& x, const VertexSet& y,
              const VertexSet& z, double tol) {
  return ci_deviation(joint, x, y, z) <= tol;
}

}  // namespace mb::oracle
