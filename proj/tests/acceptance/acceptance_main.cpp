// Acceptance suite: one pass/fail line per criterion, exit code = failures.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "incrtopo/engine.hpp"
#include "incrtopo/image_io.hpp"
#include "incrtopo/metrics.hpp"
#include "incrtopo/occupancy.hpp"
#include "incrtopo/simulator.hpp"
#include "../fixtures.hpp"
#include "../test_util.hpp"

using namespace incrtopo;
using namespace incrtopo::testutil;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
int g_checks = 0;

#define EXPECT(cond, ...)                       \
  do {                                          \
    ++g_checks;                                 \
    if (!(cond)) {                              \
      ++g_failures;                             \
      std::printf("    check failed: %s (", #cond); \
      std::printf(__VA_ARGS__);                 \
      std::printf(")\n");                       \
    }                                           \
  } while (0)

void verdict(int n, const char* what, int failures_before) {
  std::printf("%s — criterion %d: %s\n",
              g_failures == failures_before ? "PASS" : "FAIL", n, what);
}

std::vector<PixelCoord> project_all(const std::vector<ScanFrame>& frames,
                                    const RunConfig& cfg) {
  std::vector<PixelCoord> all;
  for (const ScanFrame& f : frames) {
    auto obs = scan_to_obstacles(f, cfg.resolution, cfg.origin_x, cfg.origin_y);
    all.insert(all.end(), obs.begin(), obs.end());
  }
  return all;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<missing:" + path + ">";
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct HouseRun {
  HouseFixture fx;
  std::vector<ScanFrame> frames;
  Engine engine;
  double replay_seconds = 0.0;
  bool stability_ok = true;
  std::string stability_detail;

  explicit HouseRun(const HouseFixture& fixture, RunConfig cfg,
                    bool check_stability)
      : fx(fixture), engine(cfg) {
    frames = generate_frames(fx.grid, fx.trajectory, fx.sensor, 42);
    auto t0 = std::chrono::steady_clock::now();
    SkeletonMap snap_skeleton;
    TopoGraph snap_graph;
    size_t seen = 0;
    for (const ScanFrame& f : frames) {
      if (check_stability) {
        snap_skeleton = engine.skeleton();
        snap_graph = engine.graph();
      }
      engine.ingest_frame(f);
      if (check_stability) check_updates(snap_skeleton, snap_graph, seen);
    }
    engine.finalize();
    if (check_stability) check_updates(snap_skeleton, snap_graph, seen);
    replay_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  }

  // Every skeleton pixel and graph element wholly outside the consumed mask
  // must be identical across the update.
  void check_updates(const SkeletonMap& snap_skeleton,
                     const TopoGraph& snap_graph, size_t& seen) {
    for (size_t i = seen; i < engine.reports().size(); ++i) {
      const UpdateReport& rep = engine.reports()[i];
      auto in_mask = [&](PixelCoord p) {
        return rep.mask.contains(p) && rep.mask[p];
      };
      if (rep.kind == UpdateReport::Kind::kSkeleton) {
        const SkeletonMap& now = engine.skeleton();
        for (int r = 0; r < snap_skeleton.height; ++r)
          for (int c = 0; c < snap_skeleton.width; ++c) {
            PixelCoord p{c + snap_skeleton.origin.col,
                         r + snap_skeleton.origin.row};
            if (!in_mask(p) && now.get(p) != snap_skeleton.at(c, r)) {
              stability_ok = false;
              if (stability_detail.empty())
                stability_detail = "skeleton pixel (" + std::to_string(p.col) +
                                   "," + std::to_string(p.row) +
                                   ") changed outside mask at frame " +
                                   std::to_string(rep.frame);
            }
          }
      } else {
        const TopoGraph& now = engine.graph();
        for (const Vertex& v : snap_graph.vertices) {
          if (in_mask(v.pos)) continue;
          const Vertex* kept = now.find_vertex(v.id);
          if (!kept || !(kept->pos == v.pos)) {
            stability_ok = false;
            if (stability_detail.empty())
              stability_detail =
                  "vertex " + std::to_string(v.id) + " vanished or moved";
          }
        }
        for (const Edge& e : snap_graph.edges) {
          bool touched = false;
          for (const PixelCoord& p : e.path)
            if (in_mask(p)) touched = true;
          if (touched) continue;
          bool identical = false;
          for (const Edge& ne : now.edges)
            if (ne.id == e.id && ne.v1 == e.v1 && ne.v2 == e.v2 &&
                ne.path == e.path && ne.length == e.length)
              identical = true;
          if (!identical) {
            stability_ok = false;
            if (stability_detail.empty())
              stability_detail = "edge " + std::to_string(e.id) +
                                 " changed outside mask at frame " +
                                 std::to_string(rep.frame);
          }
        }
      }
    }
    seen = engine.reports().size();
  }
};

// ---------------------------------------------------------------------------

void criterion_1_distance_map_exactness(const HouseRun& run) {
  int before = g_failures;
  EXPECT(run.frames.size() >= 1000, "frames=%zu", run.frames.size());

  DistanceMap batch = build_distance_map(
      project_all(run.frames, run.engine.config()),
      run.engine.distance_map().rect(),
      GaussianKernel::make(run.engine.config().sigma,
                           run.engine.config().kernel_radius));
  const DistanceMap& inc = run.engine.distance_map();
  EXPECT(inc.rect() == batch.rect(), "canvas mismatch");
  float worst = 0.0f;
  for (size_t i = 0; i < inc.data.size(); ++i)
    worst = std::max(worst, std::abs(inc.data[i] - batch.data[i]));
  EXPECT(worst <= 1e-6f, "worst deviation %g", double(worst));

  // schedule independence of the final distance map
  RunConfig other = run.engine.config();
  other.schedule = {1, 5, 10};
  Engine engine2(other);
  for (const ScanFrame& f : run.frames) engine2.ingest_frame(f);
  engine2.finalize();
  EXPECT(engine2.distance_map().rect() == inc.rect(), "canvas mismatch");
  EXPECT(engine2.distance_map().data == inc.data,
         "schedule changed the distance map");

  EXPECT(run.replay_seconds < 60.0, "replay took %.1f s", run.replay_seconds);
  verdict(1, "distance-map exactness and schedule independence", before);
}

void criterion_2_corridor_geometry() {
  int before = g_failures;
  RunConfig cfg;
  cfg.sigma = 4.0;
  for (int w = 5; w <= 15; w += 2) {
    const int length = 80;
    std::vector<PixelCoord> obstacles;
    for (int c = 0; c < length; ++c) {
      obstacles.push_back({c, 0});
      obstacles.push_back({c, w + 1});
    }
    BatchResult res =
        build_topo_batch(obstacles, {{0, 0}, length, w + 2}, cfg);
    int center = (w + 1) / 2;
    for (int c = 0; c < length; ++c) {
      bool end_zone = c < 2 || c >= length - 2;
      if (!end_zone)
        EXPECT(res.skeleton.at(c, center) == 1, "w=%d col=%d missing", w, c);
    }
    for (int r = 0; r < w + 2; ++r)
      for (int c = 0; c < length; ++c)
        if (res.skeleton.at(c, r))
          EXPECT(r == center, "w=%d stray pixel (%d,%d)", w, c, r);
    EXPECT(res.graph.vertices.size() == 2, "w=%d vertices=%zu", w,
           res.graph.vertices.size());
    EXPECT(res.graph.edges.size() == 1, "w=%d edges=%zu", w,
           res.graph.edges.size());
  }
  verdict(2, "corridor skeletons are exact centerlines (widths 5-15)", before);
}

void criterion_3_connectivity() {
  int before = g_failures;
  for (uint32_t seed = 0; seed < 100; ++seed) {
    BinaryMap bm = random_blobs(64, 64, 9000 + seed);
    SkeletonMap sk = thin(bm);
    EXPECT(count_components(sk) == count_components(bm), "seed=%u", seed);
    EXPECT(!has_full_2x2_block(sk), "seed=%u 2x2 block", seed);
  }
  verdict(3, "thinning preserves 8-connectivity on 100 blob fixtures", before);
}

void criterion_4_untouched_region(const HouseRun& run) {
  int before = g_failures;
  EXPECT(run.stability_ok, "%s", run.stability_detail.c_str());
  EXPECT(run.engine.reports().size() > 50, "only %zu updates checked",
         run.engine.reports().size());
  verdict(4, "untouched regions bitwise stable across every update", before);
}

void criterion_5_graph_quality(const HouseRun& run) {
  int before = g_failures;
  BatchResult batch = build_topo_batch(
      project_all(run.frames, run.engine.config()),
      run.engine.distance_map().rect(), run.engine.config());
  VertexErrorReport rep = vertex_error(run.engine.graph(), batch.graph, 20.0,
                                       run.fx.interior);
  std::printf("    interior vertices=%d outliers=%d avg=%.3f px within1=%.1f%%\n",
              rep.total, rep.outliers, rep.avg_dist, rep.pct_within_1);
  EXPECT(rep.total >= 100, "too few vertices: %d", rep.total);
  EXPECT(rep.avg_defined, "no counted vertices");
  EXPECT(rep.avg_dist <= 3.0, "avg=%.3f", rep.avg_dist);
  EXPECT(rep.pct_within_1 >= 60.0, "within1=%.1f", rep.pct_within_1);
  verdict(5, "incremental-vs-batch graph quality on the house fixture", before);
}

void criterion_6_timing(const HouseRun& run) {
  int before = g_failures;
  const TimingStats& t = run.engine.distmap_timing();
  std::printf("    per-loop ms (min/mean/max): distance %.2f/%.2f/%.2f, "
              "skeleton %.2f/%.2f/%.2f, graph %.2f/%.2f/%.2f\n",
              t.min_ms, t.mean_ms(), t.max_ms,
              run.engine.skeleton_timing().min_ms,
              run.engine.skeleton_timing().mean_ms(),
              run.engine.skeleton_timing().max_ms,
              run.engine.graph_timing().min_ms,
              run.engine.graph_timing().mean_ms(),
              run.engine.graph_timing().max_ms);
  const DistanceMap& dm = run.engine.distance_map();
  EXPECT(dm.width >= 700 && dm.height >= 700, "map %dx%d", dm.width, dm.height);
  EXPECT(t.mean_ms() <= 100.0, "mean ingest %.2f ms", t.mean_ms());
  EXPECT(t.max_ms <= 500.0, "max ingest %.2f ms", t.max_ms);
  verdict(6, "distance-map ingest within 0.1 s per frame on ~800x800", before);
}

void criterion_7_metric_self_checks() {
  int before = g_failures;
  TopoGraph g;
  for (int i = 0; i < 40; ++i)
    g.vertices.push_back({i, {7 * i, 13 * (i % 7)}, 0});
  VertexErrorReport self = vertex_error(g, g);
  EXPECT(self.avg_defined && self.avg_dist == 0.0, "avg=%.3f", self.avg_dist);
  EXPECT(self.outliers == 0, "outliers=%d", self.outliers);
  EXPECT(self.pct_within_1 == 100.0, "pct=%.1f", self.pct_within_1);

  TopoGraph shifted = g;
  for (Vertex& v : shifted.vertices) v.pos.col += 1;
  VertexErrorReport shift = vertex_error(shifted, g);
  EXPECT(shift.avg_dist == 1.0, "avg=%.6f", shift.avg_dist);
  EXPECT(shift.pct_within_1 == 100.0, "pct=%.1f", shift.pct_within_1);
  verdict(7, "vertex-error self and unit-shift checks", before);
}

void criterion_8_determinism(const std::string& workdir) {
  int before = g_failures;
  HouseFixture fx = make_house_fixture(false);
  std::string map = workdir + "/map.pgm";
  save_grid(map, fx.grid);
  {
    std::ofstream out(workdir + "/traj.txt");
    for (const Pose2D& p : fx.trajectory.waypoints)
      out << p.x << " " << p.y << "\n";
  }
  auto cli = [&](const std::string& args) {
    std::string cmd = std::string(INCRTOPO_CLI_PATH) + " " + args +
                      " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  std::string sim = "simulate " + map + " " + workdir +
                    "/traj.txt --step 0.5 --noise-std 0.05 --seed 17 -o ";
  EXPECT(cli(sim + workdir + "/a.log"), "simulate run 1");
  EXPECT(cli(sim + workdir + "/b.log"), "simulate run 2");
  EXPECT(slurp(workdir + "/a.log") == slurp(workdir + "/b.log"),
         "log bytes differ");

  std::string rep = " --sigma 4 --resolution 0.1 --schedule 1,10,20 -o ";
  EXPECT(cli("replay " + workdir + "/a.log" + rep + workdir + "/r1"), "replay 1");
  EXPECT(cli("replay " + workdir + "/b.log" + rep + workdir + "/r2"), "replay 2");
  EXPECT(slurp(workdir + "/r1/graph.json") == slurp(workdir + "/r2/graph.json"),
         "graph bytes differ");
  EXPECT(slurp(workdir + "/r1/updates.json") ==
             slurp(workdir + "/r2/updates.json"),
         "update reports differ");

  std::string cmp = "compare " + workdir + "/r1/graph.json " + workdir +
                    "/r2/graph.json -o ";
  EXPECT(cli(cmp + workdir + "/c1.json"), "compare 1");
  EXPECT(cli(cmp + workdir + "/c2.json"), "compare 2");
  EXPECT(slurp(workdir + "/c1.json") == slurp(workdir + "/c2.json"),
         "reports differ");
  verdict(8, "simulate+replay+compare are byte-deterministic", before);
}

void criterion_9_rule_enumeration() {
  int before = g_failures;
  // T rule over all 256 ring patterns against an independent restatement
  for (unsigned m = 0; m < 256; ++m) {
    auto bit = [&](int i) { return (m >> (i & 7)) & 1u; };
    int orth = bit(0) + bit(2) + bit(4) + bit(6);
    int rises = 0;
    for (int i = 0; i < 8; ++i)
      if (!bit(i) && bit(i + 1)) ++rises;
    bool expect = orth == 3 && rises == 1;
    EXPECT(t_cross_removable(m) == expect, "pattern %u", m);
  }
  // L rule over all 16 windows: diagonal edge iff no set orthogonal common
  for (unsigned m = 0; m < 16; ++m) {
    SkeletonMap sk({{0, 0}, 2, 2});
    sk.at(0, 0) = m & 1;
    sk.at(1, 0) = (m >> 1) & 1;
    sk.at(0, 1) = (m >> 2) & 1;
    sk.at(1, 1) = (m >> 3) & 1;
    TopoGraph g = pixels_to_graph(sk);
    auto has_edge = [&](PixelCoord a, PixelCoord b) {
      for (const Edge& e : g.edges)
        if ((e.path.front() == a && e.path.back() == b) ||
            (e.path.front() == b && e.path.back() == a))
          return true;
      return false;
    };
    if (sk.at(0, 0) && sk.at(1, 1))
      EXPECT(has_edge({0, 0}, {1, 1}) == (!sk.at(1, 0) && !sk.at(0, 1)),
             "pattern %u main diagonal", m);
    if (sk.at(1, 0) && sk.at(0, 1))
      EXPECT(has_edge({1, 0}, {0, 1}) == (!sk.at(0, 0) && !sk.at(1, 1)),
             "pattern %u anti diagonal", m);
  }
  verdict(9, "T-suppression (256) and L-diagonal (16) rules enumerated", before);
}

}  // namespace

int main(int argc, char** argv) {
  std::string workdir = argc > 1 ? argv[1]
                                 : (fs::temp_directory_path() /
                                    ("incrtopo_acceptance_" +
                                     std::to_string(::getpid())))
                                       .string();
  fs::create_directories(workdir);
  std::printf("acceptance workdir: %s\n", workdir.c_str());

  HouseFixture fx = make_house_fixture(true);
  std::printf("house fixture: %dx%d px, replaying...\n", fx.grid.width,
              fx.grid.height);
  HouseRun run(fx, fx.config, /*check_stability=*/true);
  std::printf("house replay: %zu frames in %.1f s, %zu updates\n",
              run.frames.size(), run.replay_seconds,
              run.engine.reports().size());

  criterion_1_distance_map_exactness(run);
  criterion_2_corridor_geometry();
  criterion_3_connectivity();
  criterion_4_untouched_region(run);
  criterion_5_graph_quality(run);
  criterion_6_timing(run);
  criterion_7_metric_self_checks();
  criterion_8_determinism(workdir);
  criterion_9_rule_enumeration();

  std::printf("%d checks, %d failures\n", g_checks, g_failures);
  fs::remove_all(workdir);
  return g_failures == 0 ? 0 : 1;
}
