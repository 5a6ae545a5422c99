#pragma once

#include <iosfwd>
#include <string>

#include "osc/graph.hpp"

namespace osc {

struct DimacsStats {
  int duplicate_edges = 0;   // dropped while deduplicating
  int declared_edges = 0;    // edge count from the p line
};

// DIMACS .col subset: 'c' comments, exactly one 'p edge <n> <m>' line,
// 'e <u> <v>' with 1-based endpoints. Unknown line types, missing or
// repeated p lines, out-of-range endpoints, and self-loops are errors
// (std::runtime_error carrying the line number).
Graph parse_dimacs(std::istream& in, DimacsStats* stats = nullptr);
Graph parse_dimacs(const std::string& text, DimacsStats* stats = nullptr);

// Inverse of parse_dimacs up to comments: emits the p line and the edge
// list sorted lexicographically, 1-based.
void emit_dimacs(std::ostream& out, const Graph& g);

// JSON object {"n": int, "edges": [[u,v],...], "classes": [[...],...]?}
// with 0-based indices; "classes" is optional.
Graph graph_from_json(const std::string& text);
std::string graph_to_json(const Graph& g);

// Dispatches on extension: .col/.dimacs -> DIMACS, .json -> JSON.
Graph load_graph_file(const std::string& path);

}  // namespace osc
