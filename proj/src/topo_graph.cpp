#include "incrtopo/topo_graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace incrtopo {

const Vertex* TopoGraph::find_vertex(int id) const {
  for (const Vertex& v : vertices)
    if (v.id == id) return &v;
  return nullptr;
}

const Vertex* TopoGraph::find_vertex_at(PixelCoord pos) const {
  for (const Vertex& v : vertices)
    if (v.pos == pos) return &v;
  return nullptr;
}

void TopoGraph::recompute_degrees() {
  std::unordered_map<int, int> deg;
  for (const Edge& e : edges) {
    deg[e.v1] += 1;
    deg[e.v2] += 1;  // self-loop counts twice
  }
  for (Vertex& v : vertices) {
    auto it = deg.find(v.id);
    v.degree = it == deg.end() ? 0 : it->second;
  }
}

double TopoGraph::total_length() const {
  double sum = 0.0;
  for (const Edge& e : edges) sum += e.length;
  return sum;
}

bool diagonal_edge_allowed(bool common1_set, bool common2_set) {
  return !common1_set && !common2_set;
}

TopoGraph pixels_to_graph(const SkeletonMap& sk, const DirtyMask* restrict_to) {
  auto set = [&](int c, int r) -> bool {
    if (!sk.in_bounds(c, r) || !sk.at(c, r)) return false;
    if (restrict_to) {
      PixelCoord g{c + sk.origin.col, r + sk.origin.row};
      if (!restrict_to->contains(g) || !(*restrict_to)[g]) return false;
    }
    return true;
  };

  TopoGraph g;
  std::unordered_map<int64_t, int> id_at;  // local (r * width + c) -> vertex id
  auto key = [&](int c, int r) { return int64_t(r) * sk.width + c; };

  for (int r = 0; r < sk.height; ++r)
    for (int c = 0; c < sk.width; ++c)
      if (set(c, r)) {
        id_at[key(c, r)] = int(g.vertices.size());
        g.vertices.push_back(
            {int(g.vertices.size()), {c + sk.origin.col, r + sk.origin.row}, 0});
      }

  auto add_edge = [&](int c0, int r0, int c1, int r1) {
    Edge e;
    e.id = int(g.edges.size());
    e.v1 = id_at.at(key(c0, r0));
    e.v2 = id_at.at(key(c1, r1));
    e.path = {{c0 + sk.origin.col, r0 + sk.origin.row},
              {c1 + sk.origin.col, r1 + sk.origin.row}};
    bool diag = c0 != c1 && r0 != r1;
    e.length = diag ? M_SQRT2 : 1.0;
    g.edges.push_back(std::move(e));
  };

  // Scan in row-major order, linking each pixel to neighbors that follow it
  // so every unordered pair appears once: E, then SW, S, SE.
  for (int r = 0; r < sk.height; ++r)
    for (int c = 0; c < sk.width; ++c) {
      if (!set(c, r)) continue;
      if (set(c + 1, r)) add_edge(c, r, c + 1, r);
      if (set(c, r + 1)) add_edge(c, r, c, r + 1);
      // L rule: a diagonal step is redundant when the two pixels already
      // share a set orthogonal neighbor inside their 2x2 window.
      if (set(c - 1, r + 1) &&
          diagonal_edge_allowed(set(c - 1, r), set(c, r + 1)))
        add_edge(c, r, c - 1, r + 1);
      if (set(c + 1, r + 1) &&
          diagonal_edge_allowed(set(c + 1, r), set(c, r + 1)))
        add_edge(c, r, c + 1, r + 1);
    }

  g.recompute_degrees();
  return g;
}

namespace {

// Adjacency over unit edges, used by the chain walk in contract_degree2.
struct UnitAdjacency {
  // per vertex: list of (edge index, other vertex index)
  std::vector<std::vector<std::pair<int, int>>> incident;

  explicit UnitAdjacency(const TopoGraph& g) : incident(g.vertices.size()) {
    for (size_t ei = 0; ei < g.edges.size(); ++ei) {
      const Edge& e = g.edges[ei];
      incident[e.v1].push_back({int(ei), e.v2});
      if (e.v1 != e.v2) incident[e.v2].push_back({int(ei), e.v1});
    }
  }
};

}  // namespace

TopoGraph contract_degree2(const TopoGraph& g, const PixelSet* keep) {
  // ids in g are assumed dense 0..n-1 (pixels_to_graph output)
  for (size_t i = 0; i < g.vertices.size(); ++i)
    if (g.vertices[i].id != int(i))
      throw std::runtime_error("contract_degree2: vertex ids must be dense");

  UnitAdjacency adj(g);
  // Unit graphs from pixels contain no self-loops, so incident list size
  // equals degree.
  auto degree = [&](int vi) { return int(adj.incident[vi].size()); };

  std::vector<char> edge_used(g.edges.size(), 0);
  std::vector<char> vertex_kept(g.vertices.size(), 0);
  for (size_t vi = 0; vi < g.vertices.size(); ++vi)
    vertex_kept[vi] = degree(int(vi)) != 2 ||
                      (keep && keep->count(g.vertices[vi].pos));

  TopoGraph out;
  std::unordered_map<int, int> new_id;  // old vertex index -> new id
  // vertices in row-major position order == old id order (pixels_to_graph)
  for (size_t vi = 0; vi < g.vertices.size(); ++vi)
    if (vertex_kept[vi]) {
      new_id[int(vi)] = int(out.vertices.size());
      out.vertices.push_back({int(out.vertices.size()), g.vertices[vi].pos, 0});
    }

  auto walk = [&](int start, std::pair<int, int> first) {
    // Follow the chain from node vertex `start` through unit edges until the
    // next kept vertex, consuming edges along the way.
    std::vector<PixelCoord> path{g.vertices[start].pos};
    double length = 0.0;
    int edge = first.first, cur = first.second;
    for (;;) {
      edge_used[edge] = 1;
      length += g.edges[edge].length;
      path.push_back(g.vertices[cur].pos);
      if (vertex_kept[cur]) break;
      // degree-2 interior: exactly one unused continuation
      int next_edge = -1, next_vtx = -1;
      for (auto [ei, vi] : adj.incident[cur])
        if (!edge_used[ei]) { next_edge = ei; next_vtx = vi; }
      if (next_edge < 0) break;  // defensive: dangling chain
      edge = next_edge;
      cur = next_vtx;
    }
    Edge e;
    e.id = int(out.edges.size());
    e.v1 = new_id.at(start);
    e.v2 = new_id.at(cur);
    e.length = length;
    e.path = std::move(path);
    out.edges.push_back(std::move(e));
  };

  for (size_t vi = 0; vi < g.vertices.size(); ++vi) {
    if (!vertex_kept[vi]) continue;
    for (auto [ei, other] : adj.incident[int(vi)])
      if (!edge_used[ei]) walk(int(vi), {ei, other});
  }

  // Remaining unconsumed edges belong to pure degree-2 cycles. Anchor each
  // cycle at its lexicographically smallest (row, col) pixel.
  for (size_t vi = 0; vi < g.vertices.size(); ++vi) {
    if (vertex_kept[vi]) continue;
    bool fresh = false;
    for (auto [ei, other] : adj.incident[int(vi)])
      if (!edge_used[ei]) fresh = true;
    if (!fresh) continue;
    // collect the cycle
    std::vector<int> cycle{int(vi)};
    int cur = adj.incident[int(vi)][0].second;
    int cur_edge = adj.incident[int(vi)][0].first;
    while (cur != int(vi)) {
      cycle.push_back(cur);
      int next_edge = -1, next_vtx = -1;
      for (auto [ei, nv] : adj.incident[cur])
        if (ei != cur_edge) { next_edge = ei; next_vtx = nv; }
      cur_edge = next_edge;
      cur = next_vtx;
    }
    // anchor = smallest position; ids come from pixels_to_graph row-major
    int anchor_k = 0;
    for (size_t k = 1; k < cycle.size(); ++k)
      if (g.vertices[cycle[k]].pos < g.vertices[cycle[anchor_k]].pos) anchor_k = int(k);
    std::rotate(cycle.begin(), cycle.begin() + anchor_k, cycle.end());

    int anchor = cycle[0];
    new_id[anchor] = int(out.vertices.size());
    vertex_kept[anchor] = 1;
    out.vertices.push_back({int(out.vertices.size()), g.vertices[anchor].pos, 0});

    Edge e;
    e.id = int(out.edges.size());
    e.v1 = e.v2 = new_id.at(anchor);
    for (int ci : cycle) e.path.push_back(g.vertices[ci].pos);
    e.path.push_back(g.vertices[anchor].pos);
    e.length = path_length(e.path);
    // mark the cycle's edges consumed
    for (size_t k = 0; k < cycle.size(); ++k)
      for (auto [ei, nv] : adj.incident[cycle[k]]) edge_used[ei] = 1;
    out.edges.push_back(std::move(e));
  }

  // Cycle anchors were appended after the row-major block; restore row-major
  // vertex ids for deterministic serialization.
  std::vector<int> order(out.vertices.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = int(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return out.vertices[a].pos < out.vertices[b].pos;
  });
  std::vector<int> remap(out.vertices.size());
  for (size_t i = 0; i < order.size(); ++i) remap[order[i]] = int(i);
  TopoGraph final_g;
  final_g.vertices.resize(out.vertices.size());
  for (size_t i = 0; i < out.vertices.size(); ++i)
    final_g.vertices[remap[i]] = {remap[i], out.vertices[i].pos, 0};
  final_g.edges = std::move(out.edges);
  for (Edge& e : final_g.edges) {
    e.v1 = remap[e.v1];
    e.v2 = remap[e.v2];
  }
  final_g.recompute_degrees();
  return final_g;
}

std::string graph_to_json(const TopoGraph& g) {
  nlohmann::ordered_json j;
  j["vertices"] = nlohmann::ordered_json::array();
  for (const Vertex& v : g.vertices)
    j["vertices"].push_back({{"id", v.id}, {"col", v.pos.col}, {"row", v.pos.row}});
  j["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : g.edges) {
    nlohmann::ordered_json je{
        {"id", e.id}, {"v1", e.v1}, {"v2", e.v2}, {"length", e.length}};
    auto& path = je["path"] = nlohmann::ordered_json::array();
    for (const PixelCoord& p : e.path) path.push_back({p.col, p.row});
    j["edges"].push_back(std::move(je));
  }
  return j.dump(2) + "\n";
}

TopoGraph graph_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  TopoGraph g;
  for (const auto& jv : j.at("vertices"))
    g.vertices.push_back({jv.at("id").get<int>(),
                          {jv.at("col").get<int>(), jv.at("row").get<int>()}, 0});
  for (const auto& je : j.at("edges")) {
    Edge e;
    e.id = je.at("id").get<int>();
    e.v1 = je.at("v1").get<int>();
    e.v2 = je.at("v2").get<int>();
    e.length = je.at("length").get<double>();
    for (const auto& jp : je.at("path"))
      e.path.push_back({jp.at(0).get<int>(), jp.at(1).get<int>()});
    g.edges.push_back(std::move(e));
  }
  g.recompute_degrees();
  return g;
}

void save_graph_json(const std::string& path, const TopoGraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << graph_to_json(g);
  if (!out) throw std::runtime_error(path + ": write failed");
}

TopoGraph load_graph_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return graph_from_json(ss.str());
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string graph_to_dot(const TopoGraph& g) {
  std::ostringstream out;
  out << "graph topo {\n  node [shape=point];\n";
  for (const Vertex& v : g.vertices)
    out << "  v" << v.id << " [pos=\"" << v.pos.col << "," << v.pos.row
        << "!\"];\n";
  for (const Edge& e : g.edges)
    out << "  v" << e.v1 << " -- v" << e.v2 << " [label=\"" << e.length
        << "\"];\n";
  out << "}\n";
  return out.str();
}

bool graphs_equivalent(const TopoGraph& a, const TopoGraph& b) {
  auto vertex_positions = [](const TopoGraph& g) {
    std::vector<PixelCoord> pos;
    for (const Vertex& v : g.vertices) pos.push_back(v.pos);
    std::sort(pos.begin(), pos.end());
    return pos;
  };
  if (vertex_positions(a) != vertex_positions(b)) return false;

  auto edge_keys = [](const TopoGraph& g) {
    std::vector<std::vector<PixelCoord>> keys;
    for (const Edge& e : g.edges) {
      std::vector<PixelCoord> k = e.path;
      std::vector<PixelCoord> rev(k.rbegin(), k.rend());
      if (rev < k) k = rev;
      keys.push_back(std::move(k));
    }
    std::sort(keys.begin(), keys.end());
    return keys;
  };
  return edge_keys(a) == edge_keys(b);
}

}  // namespace incrtopo
