#include <cstddef>
#include <vector>

#include <doctest.h>
#include "mb/blankets.hpp"
#include "mb/oracle.hpp"
#include "mb/separation.hpp"
#include "support.hpp"

using mb::Graph;
using mb::separated;
using mb::VertexId;
using mb::VertexSet;
namespace oracle = mb::oracle;

namespace {

std::vector<VertexSet> all_subsets(const VertexSet& pool) {
  const auto& ids = pool.ids();
  const std::size_t n = ids.size();
  std::vector<VertexSet> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<VertexId> v;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) v.push_back(ids[i]);
    out.emplace_back(std::move(v));
  }
  return out;
}

bool contains_set(const std::vector<VertexSet>& sets, const VertexSet& s) {
  for (const auto& m : sets)
    if (m == s) return true;
  return false;
}

}  // namespace

TEST_CASE("separation agrees with exhaustive trail checking") {
  oracle::Rng rng(101);
  for (int it = 0; it < 300; ++it) {
    Graph g = support::random_graph(rng, it % 2 == 0, 2, 8);
    VertexSet all = g.all_vertices();
    VertexSet x = support::random_nonempty_subset(rng, all, 0.3);
    VertexSet y = support::random_nonempty_subset(rng, all, 0.3);
    VertexSet z = support::random_subset(rng, all, 0.3);
    bool fast = separated(g, x, y, z);
    bool slow = oracle::is_d_separated_bruteforce(g, x, y, z);
    CHECK(fast == slow);
  }
}

TEST_CASE("blanket in a set agrees with subset enumeration") {
  oracle::Rng rng(102);
  for (int it = 0; it < 200; ++it) {
    Graph g = support::random_graph(rng, it % 2 == 0, 2, 8);
    VertexSet all = g.all_vertices();
    VertexSet b = support::random_nonempty_subset(rng, all, 0.25);
    VertexSet c = support::random_subset(rng, all, 0.5);
    VertexSet e = support::random_subset(rng, all, 0.2);
    VertexSet fast = mb::markov_blanket_in(g, b, c, e).blanket;
    VertexSet slow = oracle::mb_in_set_bruteforce(g, b, c, e);
    CHECK(fast == slow);
  }
}

TEST_CASE("directional blanket agrees with the definitional search") {
  oracle::Rng rng(103);
  for (int it = 0; it < 250; ++it) {
    Graph g = support::random_graph(rng, it % 2 == 0, 2, 8);
    auto draw = support::random_directional_draw(rng, g);

    bool fast_throws = false, slow_throws = false;
    VertexSet fast, slow;
    try {
      fast = mb::directional_blanket(g, draw.b, draw.d, draw.e).blanket;
    } catch (const mb::NoSeparator&) {
      fast_throws = true;
    }
    try {
      slow = oracle::directional_bruteforce(g, draw.b, draw.d, draw.e);
    } catch (const mb::NoSeparator&) {
      slow_throws = true;
    }
    CHECK(fast_throws == slow_throws);
    if (!fast_throws && !slow_throws) CHECK(fast == slow);
  }
}

TEST_CASE("minimal separator test agrees with enumeration") {
  oracle::Rng rng(104);
  for (int it = 0; it < 150; ++it) {
    Graph g = support::random_graph(rng, it % 2 == 0, 2, 8);
    auto draw = support::random_directional_draw(rng, g);
    auto minimal = oracle::all_minimal_separators(g, draw.b, draw.d, draw.e);

    for (const auto& m : minimal)
      CHECK(mb::is_minimal_separator(g, draw.b, draw.d, draw.e, m));

    VertexSet pool = g.all_vertices() - draw.b - draw.d;
    for (int k = 0; k < 6; ++k) {
      VertexSet m = support::random_subset(rng, pool, 0.4);
      CHECK(mb::is_minimal_separator(g, draw.b, draw.d, draw.e, m) ==
            contains_set(minimal, m));
    }
  }
}

TEST_CASE("blanket membership characterizes admissible conditioning sets") {
  // The computed blanket M is contained in exactly those S <= C\B whose
  // conditioning (together with E) separates B from the rest of C.
  oracle::Rng rng(105);
  for (int it = 0; it < 150; ++it) {
    Graph g = support::random_graph(rng, it % 2 == 0, 2, 7);
    VertexSet all = g.all_vertices();
    VertexSet b = support::random_nonempty_subset(rng, all, 0.25);
    VertexSet c = support::random_subset(rng, all, 0.6);
    VertexSet e = support::random_subset(rng, all - b, 0.2);
    VertexSet candidates = c - b;
    if (candidates.size() > 6) continue;

    VertexSet m = mb::markov_blanket_in(g, b, c, e).blanket;
    for (const auto& s : all_subsets(candidates)) {
      bool admissible = separated(g, b, candidates - s, s | e);
      CHECK(admissible == m.is_subset_of(s));
    }
  }
}

TEST_CASE("growing the candidate set is neutral iff the growth is separated") {
  // Candidate sets here stay clear of B: members of B are inert in every
  // blanket computation but would trivialize the separation side.
  oracle::Rng rng(106);
  for (int it = 0; it < 250; ++it) {
    Graph g = support::random_graph(rng, it % 2 == 0, 2, 8);
    VertexSet all = g.all_vertices();
    VertexSet b = support::random_nonempty_subset(rng, all, 0.25);
    VertexSet c = support::random_subset(rng, all - b, 0.4);
    VertexSet cp = support::random_subset(rng, all - b, 0.4);
    VertexSet e = support::random_subset(rng, all - b, 0.2);

    VertexSet grown = mb::markov_blanket_in(g, b, c | cp, e).blanket;
    VertexSet base = mb::markov_blanket_in(g, b, c, e).blanket;
    CHECK((grown == base) == separated(g, cp, b, c | e));
  }
}

TEST_CASE("a minimal separator is its own blanket") {
  oracle::Rng rng(107);
  for (int it = 0; it < 150; ++it) {
    Graph g = support::random_graph(rng, it % 2 == 0, 2, 8);
    auto draw = support::random_directional_draw(rng, g);
    for (const auto& m :
         oracle::all_minimal_separators(g, draw.b, draw.d, draw.e)) {
      CHECK(mb::markov_blanket_in(g, draw.b, m, draw.e).blanket == m);
    }
  }
}

TEST_CASE("the blanket inside a separator still separates") {
  oracle::Rng rng(108);
  int hits = 0;
  for (int it = 0; it < 400 && hits < 150; ++it) {
    Graph g = support::random_graph(rng, it % 2 == 0, 2, 8);
    auto draw = support::random_directional_draw(rng, g);
    VertexSet pool = g.all_vertices() - draw.b - draw.d;
    VertexSet m = support::random_subset(rng, pool, 0.5);
    if (!separated(g, draw.b, draw.d, m | draw.e)) continue;
    ++hits;
    VertexSet inner = mb::markov_blanket_in(g, draw.b, m, draw.e).blanket;
    CHECK(separated(g, draw.b, draw.d, inner | draw.e));
  }
  CHECK(hits > 0);
}

TEST_CASE("the directional blanket is the unique nearest minimal separator") {
  oracle::Rng rng(109);
  for (int it = 0; it < 120; ++it) {
    Graph g = support::random_graph(rng, it % 2 == 0, 2, 7);
    auto draw = support::random_directional_draw(rng, g);
    VertexSet pool = g.all_vertices() - draw.b - draw.d;
    if (pool.size() > 6) continue;

    std::vector<VertexSet> separating;
    for (const auto& s : all_subsets(pool))
      if (separated(g, draw.b, draw.d, s | draw.e)) separating.push_back(s);
    if (separating.empty()) continue;

    VertexSet m1 =
        mb::directional_blanket(g, draw.b, draw.d, draw.e).blanket;
    auto minimal = oracle::all_minimal_separators(g, draw.b, draw.d, draw.e);
    CHECK(contains_set(minimal, m1));

    auto detached_from_d = [&](const VertexSet& m) {
      for (const auto& s : separating)
        if (!separated(g, m, draw.d, s | draw.e)) return false;
      return true;
    };
    CHECK(detached_from_d(m1));
    for (const auto& m : minimal)
      if (!(m == m1)) CHECK_FALSE(detached_from_d(m));
  }
}

TEST_CASE("separator quantifier symmetry") {
  // For a minimal separator M: D is separated from M given every separator
  // exactly when B is separated from every minimal separator given M.
  oracle::Rng rng(110);
  for (int it = 0; it < 100; ++it) {
    Graph g = support::random_graph(rng, it % 2 == 0, 2, 7);
    auto draw = support::random_directional_draw(rng, g);
    VertexSet pool = g.all_vertices() - draw.b - draw.d;
    if (pool.size() > 6) continue;

    std::vector<VertexSet> separating;
    for (const auto& s : all_subsets(pool))
      if (separated(g, draw.b, draw.d, s | draw.e)) separating.push_back(s);
    auto minimal = oracle::all_minimal_separators(g, draw.b, draw.d, draw.e);

    for (const auto& m : minimal) {
      bool lhs = true;
      for (const auto& s : separating)
        if (!separated(g, draw.d, m, s | draw.e)) {
          lhs = false;
          break;
        }
      bool rhs = true;
      for (const auto& mp : minimal)
        if (!separated(g, draw.b, mp, m | draw.e)) {
          rhs = false;
          break;
        }
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("closed forms of the classic blanket") {
  oracle::Rng rng(111);
  for (int it = 0; it < 200; ++it) {
    bool directed = it % 2 == 0;
    Graph g = support::random_graph(rng, directed, 2, 9);
    VertexSet b = support::random_nonempty_subset(rng, g.all_vertices(), 0.3);
    VertexSet blanket = mb::markov_blanket(g, b).blanket;

    VertexSet expected;
    if (directed) {
      VertexSet children;
      for (VertexId v : b)
        for (VertexId c : g.children_of(v)) children.insert(c);
      expected = (mb::parents(g, b) | children | mb::parents(g, children)) - b;
    } else {
      for (VertexId v : b)
        for (VertexId w : g.neighbors_of(v)) expected.insert(w);
      expected = expected - b;
    }
    CHECK(blanket == expected);
  }
}

TEST_CASE("padding a separator with ancestral vertices preserves it") {
  oracle::Rng rng(112);
  int hits = 0;
  for (int it = 0; it < 400 && hits < 150; ++it) {
    bool directed = it % 2 == 0;
    Graph g = support::random_graph(rng, directed, 2, 8);
    auto draw = support::random_directional_draw(rng, g);
    VertexSet m = support::random_subset(
        rng, g.all_vertices() - draw.b - draw.d, 0.5);
    if (!separated(g, draw.b, draw.d, m | draw.e)) continue;
    ++hits;
    VertexSet extent =
        directed ? mb::ancestral_closure(g, draw.b | draw.d | m | draw.e)
                 : g.all_vertices();
    VertexSet n = support::random_subset(rng, extent, 0.4);
    CHECK(separated(g, draw.b, draw.d, (m | n) | draw.e));
  }
  CHECK(hits > 0);
}

TEST_CASE("every ancestral vertex is separated from one side") {
  oracle::Rng rng(113);
  int hits = 0;
  for (int it = 0; it < 300 && hits < 120; ++it) {
    Graph g = support::random_graph(rng, true, 2, 8);
    auto draw = support::random_directional_draw(rng, g);
    VertexSet m = support::random_subset(
        rng, g.all_vertices() - draw.b - draw.d, 0.5);
    if (!separated(g, draw.b, draw.d, m | draw.e)) continue;
    ++hits;
    VertexSet closure =
        mb::ancestral_closure(g, draw.b | draw.d | m | draw.e);
    for (VertexId x : closure) {
      bool from_b = separated(g, VertexSet{x}, draw.b, m | draw.e);
      bool from_d = separated(g, VertexSet{x}, draw.d, m | draw.e);
      CHECK((from_b || from_d));
    }
  }
  CHECK(hits > 0);
}

TEST_CASE("extended blanket properties") {
  oracle::Rng rng(114);
  for (int it = 0; it < 120; ++it) {
    Graph g = support::random_graph(rng, it % 2 == 0, 2, 7);
    auto draw = support::random_directional_draw(rng, g);
    mb::BlanketResult r =
        mb::directional_blanket_extended(g, draw.b, draw.d, draw.e);
    const VertexSet& m = r.blanket;

    // The blanket always separates, and the inseparable part of D is
    // exactly what forces itself into the conditioning set.
    CHECK(separated(g, draw.b, draw.d, m | draw.e));
    CHECK(r.dep.is_subset_of(draw.d));
    CHECK(r.dep.is_subset_of(m));
    bool exists = mb::any_separator_exists(g, draw.b, draw.d, draw.e);
    CHECK(r.dep.empty() == exists);
    if (exists) {
      CHECK(m == mb::directional_blanket(g, draw.b, draw.d, draw.e).blanket);
    }

    // Against every admissible conditioning set S (subsets of V \ B): if S
    // separates B from D then D detaches from the blanket given S, and any
    // such S that is itself detached from D given the blanket contains it.
    VertexSet pool = g.all_vertices() - draw.b;
    if (pool.size() > 6) continue;
    for (const auto& s : all_subsets(pool)) {
      if (!separated(g, draw.b, draw.d, s | draw.e)) continue;
      CHECK(separated(g, draw.d, m, s | draw.e));
      if (separated(g, draw.d, s, m | draw.e)) CHECK(m.is_subset_of(s));
    }
  }
}

TEST_CASE("separation certifies independence in sampled models") {
  oracle::Rng rng(115);
  for (int it = 0; it < 60; ++it) {
    Graph g = support::random_graph(rng, it % 2 == 0, 2, 5);
    mb::Distribution joint =
        oracle::exact_joint(oracle::sample_model(g, 5000 + it));
    VertexSet all = g.all_vertices();
    for (int k = 0; k < 10; ++k) {
      VertexSet x = support::random_nonempty_subset(rng, all, 0.3);
      VertexSet y = support::random_nonempty_subset(rng, all, 0.3);
      VertexSet z = support::random_subset(rng, all, 0.3);
      if (!separated(g, x, y, z)) continue;
      CHECK(oracle::check_ci(joint, x, y, z, 1e-9));
    }
  }
}
