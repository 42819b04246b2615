#pragma once

#include <string>

#include "mb/causal.hpp"
#include "mb/graph.hpp"

namespace mb::io {

// Parses the plain-text graph format:
//
//   # comment to end of line
//   directed            (or: undirected)
//   a -> b              (directed arc; undirected graphs use:  a -- b)
//   c                   (declares an isolated vertex)
//
// Labels match [A-Za-z0-9_]+ and are interned in order of first appearance.
// Malformed input raises ParseError with a 1-based line and column; graph
// construction may raise SelfLoop or CycleDetected.
Graph parse_graph_text(const std::string& text);

// Reads the file at `path` and parses it; throws Error when unreadable.
Graph parse_graph_file(const std::string& path);

// Renders a graph back to the text format: the kind line, one line per
// vertex label in id order, then the sorted arc lines.  Parsing the output
// reproduces the graph exactly (same labels, same ids).
std::string serialize_graph(const Graph& g);

// Parses the discrete-model format: a directed graph block, then
//
//   domain <vertex> = <k>        (cardinality, >= 2; defaults to 2)
//   cpt <vertex>: <p1> <p2> ...  (row-major conditional table)
//
// Table rows follow the parents sorted by label, earlier parents varying
// slowest and the vertex's own value fastest.  The words `domain` and `cpt`
// are reserved at the start of a model line.  Raises ParseError, BadRowSum
// (row off by more than 1e-12), or MissingCPT.
DiscreteModel parse_model_text(const std::string& text);

// Reads the file at `path` and parses it; throws Error when unreadable.
DiscreteModel parse_model_file(const std::string& path);

// Reads a whole file into a string; throws Error when unreadable.
std::string read_text_file(const std::string& path);

}  // namespace mb::io
