#include "mb/textio.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

namespace mb::io {

namespace {

bool is_label_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

// Tokenizer over one physical line (comments already stripped).
struct LineScanner {
  const std::string& s;
  int line;
  std::size_t i = 0;

  int col() const { return static_cast<int>(i) + 1; }
  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool at_end() {
    skip_ws();
    return i >= s.size();
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line, col(), what);
  }
  std::string read_label(const std::string& what) {
    skip_ws();
    std::size_t start = i;
    while (i < s.size() && is_label_char(s[i])) ++i;
    if (i == start) fail("expected " + what);
    return s.substr(start, i - start);
  }
  // Reads "->" or "--"; returns true for "->".
  bool read_arrow() {
    skip_ws();
    if (i + 1 < s.size() && s[i] == '-' && s[i + 1] == '>') {
      i += 2;
      return true;
    }
    if (i + 1 < s.size() && s[i] == '-' && s[i + 1] == '-') {
      i += 2;
      return false;
    }
    fail("expected '->' or '--'");
  }
  void expect_char(char c, const std::string& what) {
    skip_ws();
    if (i >= s.size() || s[i] != c) fail("expected " + what);
    ++i;
  }
  void expect_end() {
    skip_ws();
    if (i < s.size()) fail("unexpected trailing characters");
  }
  double read_double() {
    skip_ws();
    std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data() + start, s.data() + i, value);
    if (ec != std::errc{} || ptr != s.data() + i) {
      i = start;
      fail("expected a number");
    }
    return value;
  }
  long read_int() {
    skip_ws();
    std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    long value = 0;
    auto [ptr, ec] = std::from_chars(s.data() + start, s.data() + i, value);
    if (ec != std::errc{} || ptr != s.data() + i) {
      i = start;
      fail("expected an integer");
    }
    return value;
  }
};

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  lines.push_back(cur);
  return lines;
}

struct GraphAccumulator {
  GraphKind kind = GraphKind::Directed;
  bool kind_known = false;
  std::vector<std::string> labels;
  std::unordered_set<std::string> seen;
  std::vector<std::pair<std::string, std::string>> pairs;

  void intern(const std::string& label) {
    if (seen.insert(label).second) labels.push_back(label);
  }

  // One content line: `a -> b`, `a -- b`, or a bare vertex label.
  void add_line(const std::string& line, int lineno) {
    LineScanner sc{line, lineno};
    std::string a = sc.read_label("vertex label");
    intern(a);
    if (sc.at_end()) return;  // isolated vertex declaration
    int arrow_col = sc.col();
    bool directed_arrow = sc.read_arrow();
    if (directed_arrow && kind == GraphKind::Undirected)
      throw ParseError(lineno, arrow_col,
                       "'->' is not allowed in an undirected graph");
    if (!directed_arrow && kind == GraphKind::Directed)
      throw ParseError(lineno, arrow_col,
                       "'--' is not allowed in a directed graph");
    std::string b = sc.read_label("vertex label");
    intern(b);
    sc.expect_end();
    pairs.emplace_back(a, b);
  }

  void set_kind(const std::string& line, int lineno) {
    LineScanner sc{line, lineno};
    sc.skip_ws();
    int col = sc.col();
    std::string word = sc.read_label("graph kind 'directed' or 'undirected'");
    if (word == "directed")
      kind = GraphKind::Directed;
    else if (word == "undirected")
      kind = GraphKind::Undirected;
    else
      throw ParseError(lineno, col,
                       "expected graph kind 'directed' or 'undirected'");
    sc.expect_end();
    kind_known = true;
  }

  Graph build() const {
    if (!kind_known)
      throw ParseError(1, 1, "missing graph kind 'directed' or 'undirected'");
    return Graph::build(kind, labels, pairs);
  }
};

}  // namespace

Graph parse_graph_text(const std::string& text) {
  GraphAccumulator acc;
  auto lines = split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    std::string line = strip_comment(lines[li]);
    LineScanner probe{line, static_cast<int>(li) + 1};
    if (probe.at_end()) continue;
    if (!acc.kind_known)
      acc.set_kind(line, static_cast<int>(li) + 1);
    else
      acc.add_line(line, static_cast<int>(li) + 1);
  }
  return acc.build();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error("cannot read file: " + path);
  return buf.str();
}

Graph parse_graph_file(const std::string& path) {
  return parse_graph_text(read_text_file(path));
}

std::string serialize_graph(const Graph& g) {
  std::string out = g.is_directed() ? "directed\n" : "undirected\n";
  for (VertexId v = 0; v < g.vertex_count(); ++v) out += g.label(v) + "\n";
  const char* arrow = g.is_directed() ? " -> " : " -- ";
  for (const auto& [u, v] : g.arcs())
    out += g.label(u) + arrow + g.label(v) + "\n";
  return out;
}

DiscreteModel parse_model_text(const std::string& text) {
  GraphAccumulator acc;
  struct DomainDecl {
    int k;
    int line;
  };
  struct CptDecl {
    std::vector<double> values;
    int line;
    int col;  // of the first value
  };
  std::map<std::string, DomainDecl> domain_decls;
  std::map<std::string, CptDecl> cpt_decls;
  std::vector<std::string> cpt_order;  // declaration order for stable errors
  bool graph_done = false;

  auto lines = split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int lineno = static_cast<int>(li) + 1;
    std::string line = strip_comment(lines[li]);
    LineScanner probe{line, lineno};
    if (probe.at_end()) continue;

    if (!acc.kind_known) {
      acc.set_kind(line, lineno);
      if (acc.kind != GraphKind::Directed)
        throw ParseError(lineno, 1, "model files require a directed graph");
      continue;
    }

    // Peek the first token to route the line.
    LineScanner sc{line, lineno};
    std::string head = sc.read_label("vertex label or declaration");
    if (head == "domain") {
      graph_done = true;
      int label_col = sc.col();
      std::string label = sc.read_label("vertex label");
      sc.expect_char('=', "'='");
      int value_col = sc.col();
      long k = sc.read_int();
      sc.expect_end();
      if (k < 2)
        throw ParseError(lineno, value_col, "domain size must be at least 2");
      if (!domain_decls.emplace(label, DomainDecl{static_cast<int>(k), lineno})
               .second)
        throw ParseError(lineno, label_col,
                         "duplicate domain declaration for '" + label + "'");
      continue;
    }
    if (head == "cpt") {
      graph_done = true;
      int label_col = sc.col();
      std::string label = sc.read_label("vertex label");
      sc.expect_char(':', "':'");
      CptDecl decl;
      decl.line = lineno;
      decl.col = sc.col();
      while (!sc.at_end()) {
        int col = sc.col();
        double v = sc.read_double();
        if (v < 0.0)
          throw ParseError(lineno, col, "probabilities must be non-negative");
        decl.values.push_back(v);
      }
      if (decl.values.empty())
        throw ParseError(lineno, sc.col(), "expected at least one probability");
      if (!cpt_decls.emplace(label, std::move(decl)).second)
        throw ParseError(lineno, label_col,
                         "duplicate table declaration for '" + label + "'");
      cpt_order.push_back(label);
      continue;
    }
    if (graph_done)
      throw ParseError(lineno, 1,
                       "graph lines must precede domain and cpt declarations");
    acc.add_line(line, lineno);
  }

  Graph g = acc.build();

  std::vector<int> domains(g.vertex_count(), 2);
  for (const auto& [label, decl] : domain_decls) {
    if (!g.has_label(label))
      throw ParseError(decl.line, 1,
                       "domain declared for unknown vertex '" + label + "'");
    domains[g.index_of(label)] = decl.k;
  }

  std::vector<Factor> factors;
  factors.reserve(cpt_decls.size());
  for (const std::string& label : cpt_order) {
    const CptDecl& decl = cpt_decls.at(label);
    if (!g.has_label(label))
      throw ParseError(decl.line, 1,
                       "table declared for unknown vertex '" + label + "'");
    VertexId v = g.index_of(label);

    // File order: parents sorted by label (earlier ones vary slowest),
    // then the vertex itself varying fastest.
    auto ps = g.parents_of(v);
    std::vector<VertexId> file_vars(ps.begin(), ps.end());
    std::sort(file_vars.begin(), file_vars.end(),
              [&](VertexId a, VertexId b) { return g.label(a) < g.label(b); });
    file_vars.push_back(v);
    std::vector<int> file_card;
    std::size_t expect = 1;
    for (VertexId w : file_vars) {
      file_card.push_back(domains[w]);
      expect *= static_cast<std::size_t>(domains[w]);
    }
    if (decl.values.size() != expect)
      throw ParseError(decl.line, decl.col,
                       "expected " + std::to_string(expect) +
                           " probabilities for '" + label + "', got " +
                           std::to_string(decl.values.size()));

    Factor f;
    {
      VertexSet scope_set(file_vars);
      f.scope = scope_set.ids();
    }
    for (VertexId w : f.scope) f.card.push_back(domains[w]);
    f.values.assign(f.table_size(), 0.0);
    auto canon_strides = row_major_strides(f.card);
    auto file_strides = row_major_strides(file_card);
    // Stride of each file variable inside the canonical table.
    std::vector<std::size_t> canon_of_file(file_vars.size());
    for (std::size_t i = 0; i < file_vars.size(); ++i) {
      auto it = std::lower_bound(f.scope.begin(), f.scope.end(), file_vars[i]);
      canon_of_file[i] =
          canon_strides[static_cast<std::size_t>(it - f.scope.begin())];
    }
    for (std::size_t idx = 0; idx < decl.values.size(); ++idx) {
      std::size_t rem = idx, canon = 0;
      for (std::size_t i = 0; i < file_vars.size(); ++i) {
        std::size_t val = rem / file_strides[i];
        rem %= file_strides[i];
        canon += val * canon_of_file[i];
      }
      f.values[canon] = decl.values[idx];
    }
    factors.push_back(std::move(f));
  }

  // DiscreteModel validation reports BadRowSum and MissingCPT.
  return DiscreteModel(std::move(g), std::move(domains), std::move(factors));
}

DiscreteModel parse_model_file(const std::string& path) {
  return parse_model_text(read_text_file(path));
}

}  // namespace mb::io
