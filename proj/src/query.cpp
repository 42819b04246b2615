#include "mb/query.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "mb/blankets.hpp"
#include "mb/causal.hpp"
#include "mb/oracle.hpp"
#include "mb/separation.hpp"
#include "mb/textio.hpp"

namespace mb::io {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kNumericTolerance = 1e-9;

const char* kind_name(QueryKind k) {
  switch (k) {
    case QueryKind::DSeparation:
      return "dsep";
    case QueryKind::Blanket:
      return "mb";
    case QueryKind::BlanketIn:
      return "mb-in";
    case QueryKind::Directional:
      return "mb-dir";
    case QueryKind::DirectionalExtended:
      return "mb-dir-ext";
    case QueryKind::Adjust:
      return "adjust";
    case QueryKind::Effect:
      return "effect";
  }
  return "unknown";
}

const char* method_name(BlanketMethod m) {
  switch (m) {
    case BlanketMethod::Classic:
      return "classic";
    case BlanketMethod::InSet:
      return "in-set";
    case BlanketMethod::Directional:
      return "directional";
    case BlanketMethod::DirectionalExtended:
      return "directional-extended";
  }
  return "unknown";
}

const char* branch_name(GraphKind k) {
  return k == GraphKind::Directed ? "directed" : "undirected";
}

std::string error_name(const Error& e) {
  if (dynamic_cast<const CycleDetected*>(&e)) return "CycleDetected";
  if (dynamic_cast<const DuplicateLabel*>(&e)) return "DuplicateLabel";
  if (dynamic_cast<const SelfLoop*>(&e)) return "SelfLoop";
  if (dynamic_cast<const UnknownLabel*>(&e)) return "UnknownLabel";
  if (dynamic_cast<const UnknownVertex*>(&e)) return "UnknownVertex";
  if (dynamic_cast<const KindMismatch*>(&e)) return "KindMismatch";
  if (dynamic_cast<const NotATrail*>(&e)) return "NotATrail";
  if (dynamic_cast<const NoSeparator*>(&e)) return "NoSeparator";
  if (dynamic_cast<const TooLarge*>(&e)) return "TooLarge";
  if (dynamic_cast<const NoMinimum*>(&e)) return "NoMinimum";
  if (dynamic_cast<const NotUnique*>(&e)) return "NotUnique";
  if (dynamic_cast<const ZeroEvidenceProbability*>(&e))
    return "ZeroEvidenceProbability";
  if (dynamic_cast<const BadRowSum*>(&e)) return "BadRowSum";
  if (dynamic_cast<const MissingCPT*>(&e)) return "MissingCPT";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  return "Error";
}

std::vector<std::string> sorted_labels(const Graph& g, const VertexSet& vs) {
  std::vector<std::string> out;
  out.reserve(vs.size());
  for (VertexId v : vs) out.push_back(g.label(v));
  std::sort(out.begin(), out.end());
  return out;
}

// Renders a distribution with variables ordered by label, the last one
// varying fastest, so the output does not depend on internal vertex ids.
ordered_json table_json(const Graph& g, const Distribution& dist) {
  const std::size_t k = dist.vars.size();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return g.label(dist.vars[a]) < g.label(dist.vars[b]);
  });

  ordered_json vars = ordered_json::array();
  ordered_json card = ordered_json::array();
  std::vector<int> display_card(k);
  for (std::size_t i = 0; i < k; ++i) {
    vars.push_back(g.label(dist.vars[perm[i]]));
    card.push_back(dist.card[perm[i]]);
    display_card[i] = dist.card[perm[i]];
  }

  auto internal = row_major_strides(dist.card);
  ordered_json probs = ordered_json::array();
  std::vector<int> assign(k, 0);
  for (;;) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < k; ++i)
      idx += static_cast<std::size_t>(assign[i]) * internal[perm[i]];
    probs.push_back(dist.probs[idx]);
    int p = static_cast<int>(k) - 1;
    while (p >= 0) {
      ++assign[p];
      if (assign[p] < display_card[p]) break;
      assign[p] = 0;
      --p;
    }
    if (p < 0) break;
  }

  ordered_json out;
  out["vars"] = std::move(vars);
  out["card"] = std::move(card);
  out["probs"] = std::move(probs);
  return out;
}

void fill_blanket_fields(ordered_json& out, const Graph& g,
                         const BlanketResult& r) {
  out["blanket"] = sorted_labels(g, r.blanket);
  out["method"] = method_name(r.method);
  out["branch"] = branch_name(r.branch);
}

int handle_dsep(const Query& q, ordered_json& out) {
  Graph g = parse_graph_text(q.graph_text);
  VertexSet x = g.resolve(q.x), y = g.resolve(q.y), z = g.resolve(q.z);
  bool sep = separated(g, x, y, z);
  out["separated"] = sep;
  if (q.with_oracle) {
    bool ref = oracle::is_d_separated_bruteforce(g, x, y, z);
    out["oracle_separated"] = ref;
    out["oracle_match"] = (ref == sep);
  }
  if (q.seed) {
    DiscreteModel model = oracle::sample_model(g, *q.seed);
    Distribution joint = oracle::exact_joint(model);
    double dev = oracle::ci_deviation(joint, x, y, z);
    out["ci_deviation"] = dev;
    // Separation is sound, not complete: a separated triple must be
    // independent in every compatible model, the converse need not hold.
    out["ci_consistent"] = sep ? dev <= kNumericTolerance : true;
  }
  return 0;
}

int handle_blanket(const Query& q, ordered_json& out) {
  Graph g = parse_graph_text(q.graph_text);
  VertexSet b = g.resolve(q.b), e = g.resolve(q.e);
  bool in_set = q.kind == QueryKind::BlanketIn;
  VertexSet c = in_set ? g.resolve(q.c) : g.all_vertices();
  BlanketResult r = in_set ? markov_blanket_in(g, b, c, e)
                           : markov_blanket(g, b, e);
  fill_blanket_fields(out, g, r);
  if (q.with_oracle) {
    VertexSet ref = oracle::mb_in_set_bruteforce(g, b, c, e);
    out["oracle_blanket"] = sorted_labels(g, ref);
    out["oracle_match"] = (ref == r.blanket);
  }
  return 0;
}

int handle_directional(const Query& q, ordered_json& out) {
  Graph g = parse_graph_text(q.graph_text);
  VertexSet b = g.resolve(q.b), d = g.resolve(q.d), e = g.resolve(q.e);
  try {
    BlanketResult r = directional_blanket(g, b, d, e);
    fill_blanket_fields(out, g, r);
    out["separator_exists"] = true;
    if (q.with_oracle) {
      VertexSet ref = oracle::directional_bruteforce(g, b, d, e);
      out["oracle_blanket"] = sorted_labels(g, ref);
      out["oracle_match"] = (ref == r.blanket);
    }
    return 0;
  } catch (const NoSeparator& ex) {
    out["error"] = "NoSeparator";
    out["message"] = ex.what();
    out["separator_exists"] = false;
    if (q.with_oracle) {
      bool ref_throws = false;
      try {
        oracle::directional_bruteforce(g, b, d, e);
      } catch (const NoSeparator&) {
        ref_throws = true;
      }
      out["oracle_match"] = ref_throws;
    }
    return 2;
  }
}

int handle_directional_extended(const Query& q, ordered_json& out) {
  if (q.with_oracle)
    throw Error("no brute-force reference is available for mb-dir-ext");
  Graph g = parse_graph_text(q.graph_text);
  VertexSet b = g.resolve(q.b), d = g.resolve(q.d), e = g.resolve(q.e);
  BlanketResult r = directional_blanket_extended(g, b, d, e);
  fill_blanket_fields(out, g, r);
  out["dep"] = sorted_labels(g, r.dep);
  out["separator_exists"] = any_separator_exists(g, b, d, e);
  return 0;
}

int handle_adjust(const Query& q, ordered_json& out) {
  Graph g = parse_graph_text(q.graph_text);
  VertexSet b = g.resolve(q.b), d = g.resolve(q.d);
  try {
    VertexSet s = adjustment_set(g, b, d);
    out["adjustment_set"] = sorted_labels(g, s);
    if (q.with_oracle) {
      VertexSet t = (descendants(g, b) & ancestors(g, d)) | d;
      Graph cut = remove_outgoing(g, b);
      VertexSet ref = oracle::directional_bruteforce(cut, t, b, {});
      out["oracle_adjustment_set"] = sorted_labels(g, ref);
      out["oracle_match"] = (ref == s);
    }
    return 0;
  } catch (const NoSeparator& ex) {
    out["error"] = "NoSeparator";
    out["message"] = ex.what();
    if (q.with_oracle) {
      VertexSet t = (descendants(g, b) & ancestors(g, d)) | d;
      Graph cut = remove_outgoing(g, b);
      bool ref_throws = false;
      try {
        oracle::directional_bruteforce(cut, t, b, {});
      } catch (const NoSeparator&) {
        ref_throws = true;
      }
      out["oracle_match"] = ref_throws;
    }
    return 2;
  }
}

int handle_effect(const Query& q, ordered_json& out) {
  DiscreteModel model = parse_model_text(q.model_text);
  const Graph& g = model.graph();
  VertexSet d = g.resolve(q.d);
  Evidence ev;
  VertexSet b;
  for (const auto& [label, value] : q.intervention) {
    VertexId v = g.index_of(label);
    if (ev.count(v))
      throw Error("duplicate intervention for vertex '" + label + "'");
    ev[v] = value;
    b.insert(v);
  }
  try {
    VertexSet s = adjustment_set(g, b, d);
    out["adjustment_set"] = sorted_labels(g, s);
    CausalEffect effect = causal_effect_adjustment(model, ev, d);
    ordered_json table = table_json(g, effect.dist);
    out["vars"] = table["vars"];
    out["card"] = table["card"];
    out["probs"] = table["probs"];
    out["estimable"] = effect.estimable;
    if (q.with_oracle) {
      Distribution ref = causal_effect_truncated(model, ev, d);
      double diff = max_abs_diff(effect.dist, ref);
      out["oracle_max_abs_diff"] = diff;
      out["oracle_match"] = diff <= kNumericTolerance;
    }
    return 0;
  } catch (const NoSeparator& ex) {
    out["error"] = "NoSeparator";
    out["message"] = ex.what();
    return 2;
  }
}

}  // namespace

QueryOutcome run_query(const Query& q) {
  ordered_json out;
  out["kind"] = kind_name(q.kind);
  int code = 0;
  try {
    switch (q.kind) {
      case QueryKind::DSeparation:
        code = handle_dsep(q, out);
        break;
      case QueryKind::Blanket:
      case QueryKind::BlanketIn:
        code = handle_blanket(q, out);
        break;
      case QueryKind::Directional:
        code = handle_directional(q, out);
        break;
      case QueryKind::DirectionalExtended:
        code = handle_directional_extended(q, out);
        break;
      case QueryKind::Adjust:
        code = handle_adjust(q, out);
        break;
      case QueryKind::Effect:
        code = handle_effect(q, out);
        break;
    }
  } catch (const Error& ex) {
    ordered_json err;
    err["kind"] = kind_name(q.kind);
    err["error"] = error_name(ex);
    err["message"] = ex.what();
    return {err.dump() + "\n", 1};
  } catch (const std::exception& ex) {
    ordered_json err;
    err["kind"] = kind_name(q.kind);
    err["error"] = "Error";
    err["message"] = ex.what();
    return {err.dump() + "\n", 1};
  }
  return {out.dump() + "\n", code};
}

}  // namespace mb::io
