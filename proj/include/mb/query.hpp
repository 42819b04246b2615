#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mb::io {

enum class QueryKind {
  DSeparation,          // "dsep"
  Blanket,              // "mb"
  BlanketIn,            // "mb-in"
  Directional,          // "mb-dir"
  DirectionalExtended,  // "mb-dir-ext"
  Adjust,               // "adjust"
  Effect,               // "effect"
};

// A fully parsed CLI request.  Vertex sets are lists of labels; `graph_text`
// holds the graph description for the structural kinds and `model_text` the
// model description for `effect`.
struct Query {
  QueryKind kind = QueryKind::DSeparation;
  std::string graph_text;
  std::string model_text;
  std::vector<std::string> b, c, d, e, x, y, z;
  // Intervened assignments for `effect` (label, value).
  std::vector<std::pair<std::string, int>> intervention;
  // Cross-check the result against the brute-force reference (small graphs).
  bool with_oracle = false;
  // For dsep: also test the verdict against a model sampled with this seed.
  std::optional<std::uint64_t> seed;
};

struct QueryOutcome {
  std::string json;  // one JSON object, newline-terminated
  int exit_code;     // 0 = answered, 2 = no separator exists, 1 = other error
};

// Executes a query and renders the outcome.  Never throws: every library
// error is mapped to a JSON error object and a non-zero exit code.  The
// rendering is deterministic, with vertex lists sorted by label.
QueryOutcome run_query(const Query& q);

}  // namespace mb::io
