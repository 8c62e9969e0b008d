#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "incrtopo/topo_graph.hpp"

namespace incrtopo {

struct VertexErrorReport {
  bool avg_defined = false;
  double avg_dist = 0.0;     // mean nearest distance over non-outliers
  int outliers = 0;          // candidates with nearest distance > threshold
  int total = 0;             // candidate vertices considered (in region)
  double pct_within_1 = 0.0; // % of non-outliers with distance <= 1
  std::vector<std::pair<int, double>> per_vertex;  // (vertex id, nearest dist)
};

// For each candidate vertex (restricted to `region` when given), the
// Euclidean distance to the nearest reference vertex. Distances above
// `outlier_threshold` count as outliers and are excluded from the average
// and the within-1 percentage. Exhaustive nearest-neighbor search.
VertexErrorReport vertex_error(const TopoGraph& candidate,
                               const TopoGraph& reference,
                               double outlier_threshold = 20.0,
                               const std::optional<Rect>& region = std::nullopt);

std::string report_to_json(const VertexErrorReport& r);
// Aligned two-column table for standard output.
std::string report_to_table(const VertexErrorReport& r);

}  // namespace incrtopo
