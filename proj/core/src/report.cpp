#include "cowichan/report.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>

namespace cowichan {

const char* edge_style_name(EdgeStyle s) {
  return s == EdgeStyle::Solid ? "solid" : "dotted";
}

namespace {

bool style_at_least(EdgeStyle have, EdgeStyle need) {
  return have == EdgeStyle::Solid || need == EdgeStyle::Dotted;
}

// True when `to` is reachable from `from` over qualifying edges, skipping
// the edge under test itself.
bool reachable(const std::vector<GraphEdge>& edges, std::size_t skip, const std::string& from,
               const std::string& to, EdgeStyle need) {
  std::vector<std::string> stack{from};
  std::vector<std::string> seen;
  while (!stack.empty()) {
    const std::string node = stack.back();
    stack.pop_back();
    if (std::find(seen.begin(), seen.end(), node) != seen.end()) continue;
    seen.push_back(node);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (i == skip) continue;
      if (edges[i].from != node || !style_at_least(edges[i].style, need)) continue;
      if (edges[i].to == to) return true;
      stack.push_back(edges[i].to);
    }
  }
  return false;
}

void check_acyclic(const std::vector<GraphEdge>& edges) {
  // The direction rule cannot produce a cycle from one paired test per pair;
  // fail loudly if it somehow does.
  std::vector<std::string> nodes;
  for (const auto& e : edges) {
    for (const auto& n : {e.from, e.to}) {
      if (std::find(nodes.begin(), nodes.end(), n) == nodes.end()) nodes.push_back(n);
    }
  }
  std::map<std::string, int> state;  // 0 new, 1 active, 2 done
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    state[n] = 1;
    for (const auto& e : edges) {
      if (e.from != n) continue;
      if (state[e.to] == 1) throw Error("ordering graph contains a cycle through " + e.to);
      if (state[e.to] == 0) visit(e.to);
    }
    state[n] = 2;
  };
  for (const auto& n : nodes) {
    if (state[n] == 0) visit(n);
  }
}

}  // namespace

OrderingGraph ordering_graph(const MetricTable& table) {
  OrderingGraph graph;
  graph.metric = table.metric;
  const auto paradigms = table.paradigms();
  const auto problems = table.problems();

  const auto ratings = rating(table);
  for (const auto& L : paradigms) graph.nodes.push_back({L, ratings.at(L)});
  std::sort(graph.nodes.begin(), graph.nodes.end(), [](const GraphNode& a, const GraphNode& b) {
    if (a.rating != b.rating) return a.rating < b.rating;
    return a.paradigm < b.paradigm;
  });

  std::vector<GraphEdge> edges;
  for (std::size_t i = 0; i < paradigms.size(); ++i) {
    for (std::size_t j = i + 1; j < paradigms.size(); ++j) {
      const std::string& a = paradigms[i];
      const std::string& b = paradigms[j];
      std::vector<std::pair<double, double>> pairs;
      pairs.reserve(problems.size());
      for (const auto& P : problems) pairs.emplace_back(table.at(a, P), table.at(b, P));
      PairwiseResult r = wilcoxon_signed_rank(pairs, a, b);
      if (r.strength != Strength::None && r.better) {
        const std::string& winner = *r.better;
        const std::string& loser = winner == a ? b : a;
        edges.push_back({loser, winner,
                         r.strength == Strength::Significant ? EdgeStyle::Solid
                                                             : EdgeStyle::Dotted});
      }
      graph.pairwise.push_back(std::move(r));
    }
  }
  check_acyclic(edges);

  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!reachable(edges, i, edges[i].from, edges[i].to, edges[i].style)) {
      graph.edges.push_back(edges[i]);
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
    if (a.from != b.from) return a.from < b.from;
    return a.to < b.to;
  });
  return graph;
}

DiffTable diff_table(const MetricTable& expert, const MetricTable& non_expert) {
  DiffTable out;
  out.metric = expert.metric;
  for (const auto& [L, row] : expert.values) {
    for (const auto& [P, v] : row) {
      const double base = non_expert.at(L, P);  // throws naming the missing cell
      if (!(v > 0.0) || !(base > 0.0))
        throw Error("diff_table: cell (" + L + ", " + P + ") must be positive");
      out.cells[L][P] = v / base;
    }
  }
  for (const auto& [L, row] : non_expert.values) {
    for (const auto& [P, v] : row) {
      (void)v;
      expert.at(L, P);  // symmetric key check
    }
  }
  return out;
}

std::string emit_dot(const OrderingGraph& graph) {
  std::ostringstream out;
  out << "digraph \"" << metric_name(graph.metric) << "\" {\n";
  out << "  rankdir=LR;\n";
  for (const auto& node : graph.nodes) {
    char rating[32];
    std::snprintf(rating, sizeof rating, "%.1f", node.rating);
    out << "  \"" << node.paradigm << "\" [label=\"" << node.paradigm << " (" << rating
        << ")\"];\n";
  }
  for (const auto& edge : graph.edges) {
    out << "  \"" << edge.from << "\" -> \"" << edge.to << "\"";
    if (edge.style == EdgeStyle::Dotted) out << " [style=dashed]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace cowichan
