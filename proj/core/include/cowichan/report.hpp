#pragma once

#include <string>
#include <vector>

#include "cowichan/stats.hpp"

namespace cowichan {

enum class EdgeStyle { Solid, Dotted };
const char* edge_style_name(EdgeStyle s);

struct GraphNode {
  std::string paradigm;
  double rating = 1.0;  // doubles as the node's axis coordinate
};

/// Edge from the worse paradigm to the better one: solid when p < 0.05,
/// dotted when 0.05 <= p < 0.1.
struct GraphEdge {
  std::string from;
  std::string to;
  EdgeStyle style = EdgeStyle::Solid;
};

struct OrderingGraph {
  Metric metric = Metric::ExecTime;
  std::vector<GraphNode> nodes;            // sorted by (rating, name)
  std::vector<GraphEdge> edges;            // sorted by (from, to), post reduction
  std::vector<PairwiseResult> pairwise;    // every pair's test, pre reduction
};

/// Runs the signed-rank test for every unordered paradigm pair, draws edges
/// per strength, and applies transitive reduction: an edge is dropped when a
/// chain of edges of equal-or-stronger style already implies it (dotted
/// edges never justify removing a solid one). Throws if the edges cycle.
OrderingGraph ordering_graph(const MetricTable& table);

/// Cell-wise expert / non-expert ratio.
struct DiffTable {
  Metric metric = Metric::ExecTime;
  std::map<std::string, std::map<std::string, double>> cells;  // paradigm -> problem -> ratio
};

DiffTable diff_table(const MetricTable& expert, const MetricTable& non_expert);

/// Deterministic DOT digraph: nodes labeled "name (rating)" in rating order,
/// dotted edges rendered with style=dashed. Identical input yields identical
/// bytes.
std::string emit_dot(const OrderingGraph& graph);

}  // namespace cowichan
