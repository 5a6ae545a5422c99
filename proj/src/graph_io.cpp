#include "osc/graph_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace osc {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw std::runtime_error("dimacs line " + std::to_string(line) + ": " + msg);
}

}  // namespace

Graph parse_dimacs(std::istream& in, DimacsStats* stats) {
  int n = -1;
  int declared = 0;
  std::vector<std::pair<int, int>> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;  // blank line
    if (tag == "c") continue;
    if (tag == "p") {
      if (n >= 0) parse_fail(lineno, "repeated p line");
      std::string fmt;
      long nn = 0, mm = 0;
      if (!(ls >> fmt >> nn >> mm)) parse_fail(lineno, "malformed p line");
      if (fmt != "edge" && fmt != "edges")
        parse_fail(lineno, "expected 'p edge', got 'p " + fmt + "'");
      if (nn < 1) parse_fail(lineno, "node count must be positive");
      n = static_cast<int>(nn);
      declared = static_cast<int>(mm);
      continue;
    }
    if (tag == "e") {
      if (n < 0) parse_fail(lineno, "e line before p line");
      long u = 0, v = 0;
      if (!(ls >> u >> v)) parse_fail(lineno, "malformed e line");
      if (u < 1 || u > n || v < 1 || v > n)
        parse_fail(lineno, "endpoint out of range");
      if (u == v) parse_fail(lineno, "self-loop");
      edges.emplace_back(static_cast<int>(u) - 1, static_cast<int>(v) - 1);
      continue;
    }
    parse_fail(lineno, "unknown line type '" + tag + "'");
  }
  if (n < 0) throw std::runtime_error("dimacs: missing p line");

  size_t raw = edges.size();
  Graph g = make_graph(n, std::move(edges));
  if (stats) {
    stats->duplicate_edges = static_cast<int>(raw - g.edges.size());
    stats->declared_edges = declared;
  }
  return g;
}

Graph parse_dimacs(const std::string& text, DimacsStats* stats) {
  std::istringstream in(text);
  return parse_dimacs(in, stats);
}

void emit_dimacs(std::ostream& out, const Graph& g) {
  out << "p edge " << g.n << " " << g.edges.size() << "\n";
  for (auto [u, v] : g.edges) out << "e " << u + 1 << " " << v + 1 << "\n";
}

Graph graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("graph json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw std::runtime_error("graph json: need object with 'n' and 'edges'");
  int n = j.at("n").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw std::runtime_error("graph json: edge entries must be pairs");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  std::vector<std::vector<int>> classes;
  if (j.contains("classes"))
    classes = j.at("classes").get<std::vector<std::vector<int>>>();
  try {
    return make_graph(n, std::move(edges), std::move(classes));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("graph json: ") + e.what());
  }
}

std::string graph_to_json(const Graph& g) {
  nlohmann::json j;
  j["n"] = g.n;
  auto edges = nlohmann::json::array();
  for (auto [u, v] : g.edges) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  if (g.has_planted_classes()) j["classes"] = g.planted_classes;
  return j.dump(2);
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  auto ends_with = [&](const std::string& suf) {
    return path.size() >= suf.size() &&
           path.compare(path.size() - suf.size(), suf.size(), suf) == 0;
  };
  std::stringstream buf;
  buf << in.rdbuf();
  if (ends_with(".json")) return graph_from_json(buf.str());
  if (ends_with(".col") || ends_with(".dimacs")) return parse_dimacs(buf.str());
  throw std::runtime_error("unrecognized graph file extension: " + path);
}

}  // namespace osc
