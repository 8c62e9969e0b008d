#include "incrtopo/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace incrtopo {

VertexErrorReport vertex_error(const TopoGraph& candidate,
                               const TopoGraph& reference,
                               double outlier_threshold,
                               const std::optional<Rect>& region) {
  if (reference.vertices.empty())
    throw std::runtime_error("vertex_error: reference graph has no vertices");

  VertexErrorReport rep;
  double sum = 0.0;
  int within1 = 0;
  for (const Vertex& v : candidate.vertices) {
    if (region && !region->contains(v.pos)) continue;
    double best = std::numeric_limits<double>::infinity();
    for (const Vertex& r : reference.vertices)
      best = std::min(best, pixel_distance(v.pos, r.pos));
    rep.per_vertex.push_back({v.id, best});
    ++rep.total;
    if (best > outlier_threshold) {
      ++rep.outliers;
    } else {
      sum += best;
      if (best <= 1.0) ++within1;
    }
  }
  int counted = rep.total - rep.outliers;
  rep.avg_defined = counted > 0;
  rep.avg_dist = rep.avg_defined ? sum / counted : 0.0;
  rep.pct_within_1 = counted > 0 ? 100.0 * within1 / counted : 0.0;
  return rep;
}

std::string report_to_json(const VertexErrorReport& r) {
  nlohmann::ordered_json j;
  if (r.avg_defined)
    j["avg_dist"] = r.avg_dist;
  else
    j["avg_dist"] = nullptr;
  j["outliers"] = r.outliers;
  j["total"] = r.total;
  j["pct_within_1"] = r.pct_within_1;
  auto& pv = j["per_vertex"] = nlohmann::ordered_json::array();
  for (const auto& [id, d] : r.per_vertex) pv.push_back({{"id", id}, {"dist", d}});
  return j.dump(2) + "\n";
}

std::string report_to_table(const VertexErrorReport& r) {
  char buf[128];
  std::ostringstream out;
  if (r.avg_defined)
    std::snprintf(buf, sizeof(buf), "%-14s %.3f px\n", "avg_dist", r.avg_dist);
  else
    std::snprintf(buf, sizeof(buf), "%-14s n/a (no counted vertices)\n", "avg_dist");
  out << buf;
  std::snprintf(buf, sizeof(buf), "%-14s %d / %d\n", "outliers/total", r.outliers,
                r.total);
  out << buf;
  std::snprintf(buf, sizeof(buf), "%-14s %.1f%%\n", "pct_within_1", r.pct_within_1);
  out << buf;
  return out.str();
}

}  // namespace incrtopo
