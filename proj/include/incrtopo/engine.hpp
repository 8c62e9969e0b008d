#pragma once

#include <future>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "incrtopo/config.hpp"
#include "incrtopo/distance_map.hpp"
#include "incrtopo/scan.hpp"
#include "incrtopo/skeleton.hpp"
#include "incrtopo/topo_graph.hpp"

namespace incrtopo {

struct TimingStats {
  int count = 0;
  double min_ms = 0.0;
  double max_ms = 0.0;
  double total_ms = 0.0;

  void add(double ms);
  double mean_ms() const { return count ? total_ms / count : 0.0; }
};

struct UpdateReport {
  enum class Kind { kSkeleton, kGraph };
  Kind kind;
  int64_t frame = 0;
  Rect region;            // recomputed window (skeleton) / mask bbox (graph)
  DirtyMask mask;         // the dirty mask this update consumed
  int dangling = 0;       // seam vertices left without a partner (graph only)
  size_t dirty_pixels = 0;
};

// Batch pipeline: distance map -> ridge -> binarize -> thin -> T-suppression
// -> pixel graph -> degree-2 contraction.
struct BatchResult {
  DistanceMap dm;
  RidgeMap ridge;
  BinaryMap binary;
  SkeletonMap skeleton;
  TopoGraph graph;
};
BatchResult build_topo_batch(std::span<const PixelCoord> obstacles,
                             const Rect& bounds, const RunConfig& cfg);

// Maintains the global distance map, skeleton and topology graph over a
// stream of scan frames. The distance map merges every frame; the skeleton
// and graph refresh on their own periods, each consuming the dirty mask
// accumulated since its last run. In pipelined mode the skeleton and graph
// updates run on worker threads against snapshots taken at their trigger
// frames, producing outputs identical to the single-threaded mode.
class Engine {
 public:
  explicit Engine(RunConfig cfg);
  ~Engine();

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  void ingest_frame(const ScanFrame& frame);
  // Joins in-flight updates and flushes pending dirty masks through the
  // skeleton and graph loops. Call once after the last frame.
  void finalize();

  int64_t frame_count() const { return frame_count_; }
  const RunConfig& config() const { return cfg_; }
  const DistanceMap& distance_map() const { return dm_; }
  const SkeletonMap& skeleton() const { return skeleton_; }
  const TopoGraph& graph() const { return graph_; }
  const DirtyMask& dm_dirty() const { return dm_dirty_; }
  const DirtyMask& sk_dirty() const { return sk_dirty_; }

  const std::vector<UpdateReport>& reports() const { return reports_; }
  const TimingStats& distmap_timing() const { return distmap_timing_; }
  const TimingStats& skeleton_timing() const { return skeleton_timing_; }
  const TimingStats& graph_timing() const { return graph_timing_; }

  // Writes distance_map.dmap, skeleton.pbm, dm_dirty.pbm, sk_dirty.pbm,
  // graph.json and manifest.txt into `dir` (created if missing).
  void save_checkpoint(const std::string& dir) const;

 private:
  struct SkeletonTask;
  struct GraphTask;

  void merge_pending();
  void trigger_skeleton(int64_t frame);
  void trigger_graph(int64_t frame);
  void apply_skeleton(std::unique_ptr<SkeletonTask> task);
  void apply_graph(std::unique_ptr<GraphTask> task);
  void join_skeleton();
  void join_graph();

  RunConfig cfg_;
  GaussianKernel kernel_;
  int64_t frame_count_ = 0;
  std::vector<PixelCoord> pending_obstacles_;

  DistanceMap dm_;
  DirtyMask dm_dirty_;
  SkeletonMap skeleton_;
  DirtyMask sk_dirty_;
  TopoGraph graph_;
  int next_vertex_id_ = 0;
  int next_edge_id_ = 0;

  std::vector<UpdateReport> reports_;
  TimingStats distmap_timing_, skeleton_timing_, graph_timing_;

  std::future<std::unique_ptr<SkeletonTask>> skeleton_future_;
  std::future<std::unique_ptr<GraphTask>> graph_future_;
};

}  // namespace incrtopo
