#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "incrtopo/raster.hpp"

namespace incrtopo {

struct Vertex {
  int id = 0;
  PixelCoord pos;
  int degree = 0;  // incident edge count, self-loops count twice

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Edge {
  int id = 0;
  int v1 = 0;
  int v2 = 0;
  double length = 0.0;            // step-length sum along `path`
  std::vector<PixelCoord> path;   // 8-connected, path.front() at v1, back() at v2

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Vertices at pixel positions, edges carrying full pixel polylines.
// Multi-edges and self-loops are permitted; vertex positions are unique.
struct TopoGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;

  const Vertex* find_vertex(int id) const;
  const Vertex* find_vertex_at(PixelCoord pos) const;
  void recompute_degrees();
  double total_length() const;
};

using PixelSet = std::unordered_set<PixelCoord, PixelCoordHash>;

// One vertex per set pixel (ids in row-major order), an edge to every set
// orthogonal neighbor, and a diagonal edge only when the two pixels share no
// set orthogonal common neighbor (the 2x2 L rule, which would otherwise add
// a redundant shortcut). Edges are unit steps with 2-pixel paths.
// `restrict_to` (optional) keeps only pixels whose mask value is set.
TopoGraph pixels_to_graph(const SkeletonMap& sk,
                          const DirtyMask* restrict_to = nullptr);

// True when the diagonal pair (a, b) gets an edge given the other two cells
// of their 2x2 window; exposed for exhaustive enumeration of the rule.
bool diagonal_edge_allowed(bool common1_set, bool common2_set);

// Collapse every maximal chain of degree-2 vertices into one edge whose path
// is the pixel chain. Junctions (degree >= 3), endpoints (degree 1) and
// isolated pixels survive. A pure cycle keeps its lexicographically smallest
// (row, col) pixel as an anchor vertex carrying a self-loop edge.
// Vertices in `keep` survive contraction regardless of degree (the engine
// pins seam pixels this way). Output ids are dense: vertices in row-major
// position order, edges in discovery order.
TopoGraph contract_degree2(const TopoGraph& g, const PixelSet* keep = nullptr);

// JSON schema: {"vertices":[{"id","col","row"}...],
//               "edges":[{"id","v1","v2","length","path":[[col,row]...]}...]}
std::string graph_to_json(const TopoGraph& g);
TopoGraph graph_from_json(const std::string& text);
void save_graph_json(const std::string& path, const TopoGraph& g);
TopoGraph load_graph_json(const std::string& path);

std::string graph_to_dot(const TopoGraph& g);

// Structural equality up to id relabeling: same vertex position set and the
// same multiset of edges keyed by endpoint positions + path (either
// orientation). Used by batch-vs-incremental equivalence tests.
bool graphs_equivalent(const TopoGraph& a, const TopoGraph& b);

}  // namespace incrtopo
