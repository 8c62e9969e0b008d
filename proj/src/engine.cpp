#include "incrtopo/engine.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <span>
#include <unordered_map>

#include "incrtopo/image_io.hpp"

namespace incrtopo {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Rect bbox_of_points(std::span<const PixelCoord> pts) {
  int x0 = pts[0].col, x1 = pts[0].col, y0 = pts[0].row, y1 = pts[0].row;
  for (const PixelCoord& p : pts) {
    x0 = std::min(x0, p.col); x1 = std::max(x1, p.col);
    y0 = std::min(y0, p.row); y1 = std::max(y1, p.row);
  }
  return {{x0, y0}, x1 - x0 + 1, y1 - y0 + 1};
}

}  // namespace

void TimingStats::add(double ms) {
  if (count == 0) {
    min_ms = max_ms = ms;
  } else {
    min_ms = std::min(min_ms, ms);
    max_ms = std::max(max_ms, ms);
  }
  total_ms += ms;
  ++count;
}

BatchResult build_topo_batch(std::span<const PixelCoord> obstacles,
                             const Rect& bounds, const RunConfig& cfg) {
  cfg.validate();
  GaussianKernel kernel = GaussianKernel::make(cfg.sigma, cfg.kernel_radius);
  BatchResult out;
  out.dm = build_distance_map(obstacles, bounds, kernel);
  out.ridge = ridge_filter(out.dm, cfg.laplacian_scale);
  out.binary = binarize(out.ridge, cfg.binarize_threshold);
  out.skeleton = suppress_t_cross(thin(out.binary));
  out.graph = contract_degree2(pixels_to_graph(out.skeleton));
  return out;
}

// ---------------------------------------------------------------------------
// skeleton update task

struct Engine::SkeletonTask {
  // inputs
  Rect region;
  DistanceMap dm_patch;    // region grown by 1 px (true neighbor reads)
  SkeletonMap sk_region;   // previous skeleton over region
  DirtyMask dirty_region;  // dm dirty mask over region
  double scale = 255.0;
  double threshold = 10.0;
  int layer_width = 3;
  size_t report_index = 0;
  // outputs
  SkeletonMap result;
  double ms = 0.0;

  void run() {
    auto t0 = Clock::now();
    RidgeMap ridge = ridge_filter_region(dm_patch, region, scale);
    BinaryMap binary = binarize(ridge, threshold);

    // Ring of width layer_width just outside the dirty pixels: a Chebyshev
    // dilation of the mask minus the mask itself.
    DirtyMask reach = dirty_region;
    for (int pass = 0; pass < layer_width; ++pass) {
      DirtyMask next = reach;
      for (int r = 0; r < reach.height; ++r)
        for (int c = 0; c < reach.width; ++c) {
          if (next.at(c, r)) continue;
          for (int dr = -1; dr <= 1 && !next.at(c, r); ++dr)
            for (int dc = -1; dc <= 1; ++dc)
              if (reach.in_bounds(c + dc, r + dr) && reach.at(c + dc, r + dr)) {
                next.at(c, r) = 1;
                break;
              }
        }
      reach = std::move(next);
    }

    // Protected layer: old skeleton pixels in the ring, plus old skeleton
    // pixels on the region border. They survive thinning unconditionally so
    // the refreshed local skeleton stays connected to the global one.
    SkeletonMap protect(region);
    for (int r = 0; r < region.height; ++r)
      for (int c = 0; c < region.width; ++c) {
        if (!sk_region.at(c, r)) continue;
        bool ring = reach.at(c, r) && !dirty_region.at(c, r);
        bool border = r == 0 || c == 0 || r == region.height - 1 ||
                      c == region.width - 1;
        if (ring || border) protect.at(c, r) = 1;
      }

    BinaryMap combined = binary;
    for (size_t i = 0; i < combined.data.size(); ++i)
      if (protect.data[i]) combined.data[i] = 1;

    result = suppress_t_cross(thin(combined, &protect), &protect);
    ms = ms_since(t0);
  }
};

// ---------------------------------------------------------------------------
// graph update task (the five-step merge)

struct Engine::GraphTask {
  // inputs
  TopoGraph graph;       // previous global graph
  SkeletonMap skeleton;  // post-skeleton-update snapshot, full canvas
  DirtyMask mask;        // skeleton dirty mask, full canvas
  int next_vid = 0;
  int next_eid = 0;
  int connect_radius = 3;
  size_t report_index = 0;
  // outputs
  TopoGraph result;
  int dangling = 0;
  double ms = 0.0;

  bool in_mask(PixelCoord p) const { return mask.contains(p) && mask[p]; }

  void run();
};

void Engine::GraphTask::run() {
  auto t0 = Clock::now();

  // Step 1: local graph from the skeleton restricted to the mask. Pixels
  // whose skeleton continues outside the mask are pinned as vertices so the
  // seam has something to connect to.
  PixelSet boundary;
  for (int r = 0; r < skeleton.height; ++r)
    for (int c = 0; c < skeleton.width; ++c) {
      if (!skeleton.at(c, r)) continue;
      PixelCoord p{c + skeleton.origin.col, r + skeleton.origin.row};
      if (!in_mask(p)) continue;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          if (!dr && !dc) continue;
          PixelCoord q{p.col + dc, p.row + dr};
          if (skeleton.get(q) && !in_mask(q)) {
            boundary.insert(p);
            dr = dc = 2;
          }
        }
    }
  TopoGraph local = contract_degree2(pixels_to_graph(skeleton, &mask), &boundary);
  for (Vertex& v : local.vertices) v.id += next_vid;
  for (Edge& e : local.edges) {
    e.id += next_eid;
    e.v1 += next_vid;
    e.v2 += next_vid;
  }
  next_vid += int(local.vertices.size());
  next_eid += int(local.edges.size());

  // Step 2: trim the previous graph against the mask. Edges fully covered
  // disappear; partially covered edges keep their outside runs as sub-edges
  // split at the last path pixel outside the mask.
  TopoGraph outer;
  std::unordered_map<PixelCoord, int, PixelCoordHash> outer_at;
  std::vector<int> seam_ids;  // split vertices, step-5 candidates
  for (const Vertex& v : graph.vertices)
    if (!in_mask(v.pos)) {
      outer_at[v.pos] = v.id;
      outer.vertices.push_back({v.id, v.pos, 0});
    }
  auto outer_vertex = [&](PixelCoord pos, bool* created) -> int {
    auto it = outer_at.find(pos);
    if (it != outer_at.end()) {
      *created = false;
      return it->second;
    }
    int id = next_vid++;
    outer_at[pos] = id;
    outer.vertices.push_back({id, pos, 0});
    *created = true;
    return id;
  };
  for (const Edge& e : graph.edges) {
    bool any_inside = false;
    for (const PixelCoord& p : e.path)
      if (in_mask(p)) {
        any_inside = true;
        break;
      }
    if (!any_inside) {
      outer.edges.push_back(e);  // untouched, identity preserved
      continue;
    }
    size_t i = 0;
    while (i < e.path.size()) {
      if (in_mask(e.path[i])) {
        ++i;
        continue;
      }
      size_t j = i;
      while (j + 1 < e.path.size() && !in_mask(e.path[j + 1])) ++j;
      if (j > i) {
        Edge sub;
        sub.path.assign(e.path.begin() + i, e.path.begin() + j + 1);
        bool created = false;
        sub.v1 = outer_vertex(sub.path.front(), &created);
        if (created) seam_ids.push_back(sub.v1);
        sub.v2 = outer_vertex(sub.path.back(), &created);
        if (created) seam_ids.push_back(sub.v2);
        sub.length = path_length(sub.path);
        sub.id = next_eid++;
        outer.edges.push_back(std::move(sub));
      }
      // single-pixel runs carry no length: kept only if already a vertex
      i = j + 1;
    }
  }

  // Step 3: connect local boundary vertices to the nearest trimmed-graph
  // vertex within the connect radius (straight pixel segments). Vertices
  // with no partner stay as dangling endpoints and are reported.
  std::vector<Edge> connections;
  std::vector<int> boundary_ids;
  for (const Vertex& v : local.vertices)
    if (boundary.count(v.pos)) boundary_ids.push_back(v.id);
  for (int bid : boundary_ids) {
    const Vertex* b = local.find_vertex(bid);
    int best_id = -1;
    double best_d = double(connect_radius) + 1e-9;
    for (const Vertex& w : outer.vertices) {
      double d = pixel_distance(b->pos, w.pos);
      if (d < best_d || (d == best_d && best_id >= 0 && w.id < best_id)) {
        best_d = d;
        best_id = w.id;
      }
    }
    if (best_id < 0) {
      ++dangling;
      continue;
    }
    const Vertex* w = nullptr;
    for (const Vertex& ov : outer.vertices)
      if (ov.id == best_id) w = &ov;
    Edge conn;
    conn.id = next_eid++;
    conn.v1 = bid;
    conn.v2 = best_id;
    conn.path = bresenham_line(b->pos, w->pos);
    conn.length = path_length(conn.path);
    connections.push_back(std::move(conn));
  }

  // Step 4: union.
  result = std::move(outer);
  result.vertices.insert(result.vertices.end(), local.vertices.begin(),
                         local.vertices.end());
  result.edges.insert(result.edges.end(), local.edges.begin(), local.edges.end());
  result.edges.insert(result.edges.end(), connections.begin(), connections.end());

  // Step 5: contract the degree-2 seam vertices introduced above so a
  // corridor crossing the mask border becomes one edge again.
  std::vector<int> candidates = seam_ids;
  candidates.insert(candidates.end(), boundary_ids.begin(), boundary_ids.end());
  std::sort(candidates.begin(), candidates.end());
  result.recompute_degrees();
  for (int cid : candidates) {
    const Vertex* v = result.find_vertex(cid);
    if (!v || v->degree != 2) continue;
    int e1 = -1, e2 = -1;
    for (size_t k = 0; k < result.edges.size(); ++k) {
      const Edge& e = result.edges[k];
      if (e.v1 == cid || e.v2 == cid) (e1 < 0 ? e1 : e2) = int(k);
    }
    if (e1 < 0 || e2 < 0) continue;  // degree 2 via a self-loop: keep
    Edge merged;
    merged.id = next_eid++;
    const Edge& a = result.edges[e1];
    const Edge& b = result.edges[e2];
    // orient a to end at cid, b to start at cid
    std::vector<PixelCoord> pa = a.path, pb = b.path;
    int va = a.v1 == cid ? a.v2 : a.v1;
    int vb = b.v1 == cid ? b.v2 : b.v1;
    if (a.v2 != cid) std::reverse(pa.begin(), pa.end());
    if (b.v1 != cid) std::reverse(pb.begin(), pb.end());
    merged.v1 = va;
    merged.v2 = vb;
    merged.path = std::move(pa);
    merged.path.insert(merged.path.end(), pb.begin() + 1, pb.end());
    merged.length = a.length + b.length;
    size_t hi = size_t(std::max(e1, e2)), lo = size_t(std::min(e1, e2));
    result.edges.erase(result.edges.begin() + hi);
    result.edges.erase(result.edges.begin() + lo);
    result.edges.push_back(std::move(merged));
    for (size_t k = 0; k < result.vertices.size(); ++k)
      if (result.vertices[k].id == cid) {
        result.vertices.erase(result.vertices.begin() + k);
        break;
      }
    result.recompute_degrees();
  }
  ms = ms_since(t0);
}

// ---------------------------------------------------------------------------
// engine

Engine::Engine(RunConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  kernel_ = GaussianKernel::make(cfg_.sigma, cfg_.kernel_radius);
}

Engine::~Engine() {
  if (skeleton_future_.valid()) skeleton_future_.wait();
  if (graph_future_.valid()) graph_future_.wait();
}

void Engine::merge_pending() {
  if (pending_obstacles_.empty()) return;
  Rect bounds = bbox_of_points(pending_obstacles_).expanded(kernel_.radius);
  DistanceMap local = build_distance_map(pending_obstacles_, bounds, kernel_);
  merge_distance_maps_into(dm_, local, {0, 0}, dm_dirty_, cfg_.tile);
  skeleton_.grow_to(dm_.rect());
  sk_dirty_.grow_to(dm_.rect());
  pending_obstacles_.clear();
}

void Engine::ingest_frame(const ScanFrame& frame) {
  auto t0 = Clock::now();
  std::vector<PixelCoord> obstacles =
      scan_to_obstacles(frame, cfg_.resolution, cfg_.origin_x, cfg_.origin_y);
  pending_obstacles_.insert(pending_obstacles_.end(), obstacles.begin(),
                            obstacles.end());
  ++frame_count_;
  if (frame_count_ % cfg_.schedule.distmap_every == 0) merge_pending();
  distmap_timing_.add(ms_since(t0));
  if (frame_count_ % cfg_.schedule.skeleton_every == 0)
    trigger_skeleton(frame_count_);
  if (frame_count_ % cfg_.schedule.graph_every == 0) trigger_graph(frame_count_);
}

void Engine::trigger_skeleton(int64_t frame) {
  join_skeleton();
  if (count_set(dm_dirty_) == 0) return;

  // The ridge stencil reaches one pixel past a changed distance-map pixel,
  // so the skeleton may legitimately change on a 1 px rim around the dirty
  // mask. The refresh mask is that dilation.
  Rect dirty_box = *bbox_of_set(dm_dirty_);
  Rect mask_box = dirty_box.expanded(1).intersect(dm_.rect());
  DirtyMask update_mask(mask_box);
  for (int r = 0; r < mask_box.height; ++r)
    for (int c = 0; c < mask_box.width; ++c) {
      PixelCoord p{mask_box.origin.col + c, mask_box.origin.row + r};
      bool near_dirty = false;
      for (int dr = -1; dr <= 1 && !near_dirty; ++dr)
        for (int dc = -1; dc <= 1; ++dc)
          if (dm_dirty_.get({p.col + dc, p.row + dr})) {
            near_dirty = true;
            break;
          }
      update_mask.at(c, r) = near_dirty;
    }

  auto task = std::make_unique<SkeletonTask>();
  task->region = mask_box.expanded(kernel_.radius).intersect(dm_.rect());
  task->dm_patch = copy_rect(dm_, task->region.expanded(1).intersect(dm_.rect()));
  task->sk_region = copy_rect(skeleton_, task->region);
  task->dirty_region = copy_rect(update_mask, task->region);
  task->scale = cfg_.laplacian_scale;
  task->threshold = cfg_.binarize_threshold;
  task->layer_width = cfg_.protected_layer_width;
  task->report_index = reports_.size();

  UpdateReport rep;
  rep.kind = UpdateReport::Kind::kSkeleton;
  rep.frame = frame;
  rep.region = task->region;
  rep.mask = update_mask;
  rep.dirty_pixels = count_set(dm_dirty_);
  reports_.push_back(std::move(rep));

  accumulate_or(sk_dirty_, update_mask);
  dm_dirty_.fill(0);

  if (cfg_.pipelined) {
    skeleton_future_ = std::async(std::launch::async, [t = std::move(task)]() mutable {
      t->run();
      return std::move(t);
    });
  } else {
    task->run();
    apply_skeleton(std::move(task));
  }
}

void Engine::apply_skeleton(std::unique_ptr<SkeletonTask> task) {
  const Rect& region = task->region;
  for (int r = 0; r < region.height; ++r)
    for (int c = 0; c < region.width; ++c)
      if (task->dirty_region.at(c, r)) {
        PixelCoord p{region.origin.col + c, region.origin.row + r};
        skeleton_[p] = task->result.at(c, r);
      }
  skeleton_timing_.add(task->ms);
}

void Engine::join_skeleton() {
  if (!skeleton_future_.valid()) return;
  std::unique_ptr<SkeletonTask> task = skeleton_future_.get();
  skeleton_future_ = {};
  apply_skeleton(std::move(task));
}

void Engine::trigger_graph(int64_t frame) {
  join_graph();
  join_skeleton();
  if (count_set(sk_dirty_) == 0) return;

  auto task = std::make_unique<GraphTask>();
  task->graph = graph_;
  task->skeleton = skeleton_;
  task->mask = sk_dirty_;
  task->next_vid = next_vertex_id_;
  task->next_eid = next_edge_id_;
  task->connect_radius = cfg_.connect_radius;
  task->report_index = reports_.size();

  UpdateReport rep;
  rep.kind = UpdateReport::Kind::kGraph;
  rep.frame = frame;
  rep.region = bbox_of_set(sk_dirty_).value_or(Rect{});
  rep.mask = copy_rect(sk_dirty_, rep.region);
  rep.dirty_pixels = count_set(sk_dirty_);
  reports_.push_back(std::move(rep));

  sk_dirty_.fill(0);

  if (cfg_.pipelined) {
    graph_future_ = std::async(std::launch::async, [t = std::move(task)]() mutable {
      t->run();
      return std::move(t);
    });
  } else {
    task->run();
    apply_graph(std::move(task));
  }
}

void Engine::apply_graph(std::unique_ptr<GraphTask> task) {
  graph_ = std::move(task->result);
  next_vertex_id_ = task->next_vid;
  next_edge_id_ = task->next_eid;
  reports_[task->report_index].dangling = task->dangling;
  graph_timing_.add(task->ms);
}

void Engine::join_graph() {
  if (!graph_future_.valid()) return;
  std::unique_ptr<GraphTask> task = graph_future_.get();
  graph_future_ = {};
  apply_graph(std::move(task));
}

void Engine::finalize() {
  merge_pending();
  join_skeleton();
  join_graph();
  trigger_skeleton(frame_count_);
  join_skeleton();
  trigger_graph(frame_count_);
  join_graph();
}

void Engine::save_checkpoint(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  save_distance_map(dir + "/distance_map.dmap", dm_, cfg_.sigma, kernel_.radius);
  write_pbm(dir + "/skeleton.pbm", skeleton_);
  write_pbm(dir + "/dm_dirty.pbm", dm_dirty_);
  write_pbm(dir + "/sk_dirty.pbm", sk_dirty_);
  save_graph_json(dir + "/graph.json", graph_);
  std::ofstream manifest(dir + "/manifest.txt");
  if (!manifest) throw std::runtime_error(dir + "/manifest.txt: cannot open");
  manifest << "frame_count " << frame_count_ << "\n"
           << "schedule " << cfg_.schedule.distmap_every << " "
           << cfg_.schedule.skeleton_every << " " << cfg_.schedule.graph_every
           << "\n"
           << "sigma " << cfg_.sigma << "\n"
           << "kernel_radius " << kernel_.radius << "\n"
           << "resolution " << cfg_.resolution << "\n"
           << "origin " << cfg_.origin_x << " " << cfg_.origin_y << "\n"
           << "canvas " << dm_.origin.col << " " << dm_.origin.row << " "
           << dm_.width << " " << dm_.height << "\n";
}

}  // namespace incrtopo
