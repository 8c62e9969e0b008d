#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "incrtopo/config.hpp"
#include "incrtopo/engine.hpp"
#include "incrtopo/image_io.hpp"
#include "incrtopo/metrics.hpp"
#include "incrtopo/occupancy.hpp"
#include "incrtopo/render.hpp"
#include "incrtopo/simulator.hpp"

namespace fs = std::filesystem;
using namespace incrtopo;

namespace {

// Precedence: defaults < config file < command line flags. CLI11 only tells
// us which flags were actually given, so flag values are staged and applied
// on top of the file-loaded config afterwards.
struct ConfigFlags {
  std::string config_path;
  std::optional<double> sigma, scale, threshold, outlier, resolution;
  std::optional<std::string> schedule;
  bool pipelined = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key-value config file");
    auto opt = [&](const char* name, auto& slot, const char* help) {
      cmd->add_option_function<double>(
          name, [&slot](double v) { slot = v; }, help);
    };
    opt("--sigma", sigma, "Gaussian kernel sigma in pixels");
    opt("--scale", scale, "distance map scale before the Laplacian");
    opt("--threshold", threshold, "ridge binarization threshold");
    opt("--outlier-threshold", outlier, "vertex error outlier cutoff (px)");
    opt("--resolution", resolution, "meters per pixel for scan projection");
    cmd->add_option_function<std::string>(
        "--schedule", [this](const std::string& s) { schedule = s; },
        "update periods d,s,g (distance map, skeleton, graph)");
    cmd->add_flag("--pipelined", pipelined,
                  "run skeleton/graph loops on worker threads");
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path, cfg);
    if (sigma) cfg.sigma = *sigma;
    if (scale) cfg.laplacian_scale = *scale;
    if (threshold) cfg.binarize_threshold = *threshold;
    if (outlier) cfg.outlier_threshold = *outlier;
    if (resolution) cfg.resolution = *resolution;
    if (schedule) {
      UpdateSchedule s;
      if (std::sscanf(schedule->c_str(), "%d,%d,%d", &s.distmap_every,
                      &s.skeleton_every, &s.graph_every) != 3)
        throw std::runtime_error("--schedule expects d,s,g");
      cfg.schedule = s;
    }
    if (pipelined) cfg.pipelined = true;
    cfg.validate();
    return cfg;
  }
};

std::optional<Rect> parse_region(const std::string& s) {
  if (s.empty()) return std::nullopt;
  int x0, y0, x1, y1;
  if (std::sscanf(s.c_str(), "%d,%d,%d,%d", &x0, &y0, &x1, &y1) != 4 ||
      x1 < x0 || y1 < y0)
    throw std::runtime_error("--region expects x0,y0,x1,y1 (inclusive)");
  return Rect{{x0, y0}, x1 - x0 + 1, y1 - y0 + 1};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
}

int cmd_build(const std::string& map_path, const ConfigFlags& flags,
              const std::string& out_dir) {
  RunConfig cfg = flags.resolve();
  OccupancyGrid grid = load_grid(map_path);
  fs::create_directories(out_dir);

  std::vector<PixelCoord> obstacles = grid.occupied_pixels();
  Rect bounds{{0, 0}, grid.width, grid.height};
  BatchResult res = build_topo_batch(obstacles, bounds, cfg);
  if (count_set(res.skeleton) == 0)
    std::cerr << "warning: skeleton is empty\n";

  save_distance_map(out_dir + "/distance_map.dmap", res.dm, cfg.sigma,
                    GaussianKernel::make(cfg.sigma, cfg.kernel_radius).radius);
  write_pbm(out_dir + "/skeleton.pbm", res.skeleton);
  save_graph_json(out_dir + "/graph.json", res.graph);
  write_text(out_dir + "/graph.dot", graph_to_dot(res.graph));

  write_png_gray(out_dir + "/render_distance.png", render_distance_map(res.dm));
  RgbImage sk_render = render_grid(grid);
  overlay_skeleton(sk_render, bounds, res.skeleton);
  write_png_rgb(out_dir + "/render_skeleton.png", sk_render);
  RgbImage graph_render = render_grid(grid);
  overlay_graph(graph_render, bounds, res.graph);
  write_png_rgb(out_dir + "/render_graph.png", graph_render);
  std::cout << "build: " << res.graph.vertices.size() << " vertices, "
            << res.graph.edges.size() << " edges -> " << out_dir << "\n";
  return 0;
}

int cmd_simulate(const std::string& map_path, const std::string& traj_path,
                 double step, int beams, double fov_deg, double range_max,
                 double noise_std, double noise_mean, uint64_t seed,
                 const std::string& out_log) {
  OccupancyGrid grid = load_grid(map_path);
  Trajectory traj = load_trajectory(traj_path, step);
  SensorSpec spec;
  spec.beam_count = beams;
  spec.fov = fov_deg * M_PI / 180.0;
  spec.range_max = range_max;
  spec.noise_std = noise_std;
  spec.noise_mean = noise_mean;
  generate_log(out_log, grid, traj, spec, seed);
  std::cout << "simulate: wrote " << out_log << "\n";
  return 0;
}

nlohmann::ordered_json timing_json(const TimingStats& t) {
  return {{"count", t.count},
          {"min_ms", t.min_ms},
          {"mean_ms", t.mean_ms()},
          {"max_ms", t.max_ms}};
}

int cmd_replay(const std::string& log_path, const ConfigFlags& flags,
               const std::string& out_dir, int snapshot_every) {
  RunConfig cfg = flags.resolve();
  std::vector<ScanFrame> frames = read_frame_log(log_path);
  fs::create_directories(out_dir);
  if (snapshot_every > 0) fs::create_directories(out_dir + "/snapshots");

  Engine engine(cfg);
  int snapshot_idx = 0;
  for (const ScanFrame& f : frames) {
    engine.ingest_frame(f);
    if (snapshot_every > 0 && engine.frame_count() % snapshot_every == 0) {
      RgbImage img = rgb_from_gray(render_distance_map(engine.distance_map()));
      overlay_mask(img, engine.distance_map().rect(), engine.dm_dirty());
      overlay_skeleton(img, engine.distance_map().rect(), engine.skeleton());
      overlay_graph(img, engine.distance_map().rect(), engine.graph());
      char name[64];
      std::snprintf(name, sizeof(name), "/snapshots/frame_%06lld.png",
                    static_cast<long long>(engine.frame_count()));
      write_png_rgb(out_dir + name, img);
      ++snapshot_idx;
    }
  }
  engine.finalize();

  engine.save_checkpoint(out_dir + "/checkpoint");
  save_graph_json(out_dir + "/graph.json", engine.graph());

  nlohmann::ordered_json updates = nlohmann::ordered_json::array();
  for (const UpdateReport& r : engine.reports())
    updates.push_back(
        {{"frame", r.frame},
         {"kind", r.kind == UpdateReport::Kind::kSkeleton ? "skeleton" : "graph"},
         {"dirty_pixels", r.dirty_pixels},
         {"dangling", r.dangling}});
  write_text(out_dir + "/updates.json",
             nlohmann::ordered_json{{"frames", engine.frame_count()},
                                    {"updates", updates}}
                 .dump(2) +
                 "\n");

  nlohmann::ordered_json timing{{"distance_map", timing_json(engine.distmap_timing())},
                                {"skeleton", timing_json(engine.skeleton_timing())},
                                {"graph", timing_json(engine.graph_timing())}};
  write_text(out_dir + "/timing.json", timing.dump(2) + "\n");

  std::printf("replay: %lld frames, %d snapshots\n",
              static_cast<long long>(engine.frame_count()), snapshot_idx);
  std::printf("  distance map: %d updates, %.3f/%.3f/%.3f ms (min/mean/max)\n",
              engine.distmap_timing().count, engine.distmap_timing().min_ms,
              engine.distmap_timing().mean_ms(), engine.distmap_timing().max_ms);
  std::printf("  skeleton:     %d updates, %.3f/%.3f/%.3f ms\n",
              engine.skeleton_timing().count, engine.skeleton_timing().min_ms,
              engine.skeleton_timing().mean_ms(), engine.skeleton_timing().max_ms);
  std::printf("  graph:        %d updates, %.3f/%.3f/%.3f ms\n",
              engine.graph_timing().count, engine.graph_timing().min_ms,
              engine.graph_timing().mean_ms(), engine.graph_timing().max_ms);
  return 0;
}

int cmd_compare(const std::string& path_a, const std::string& path_b,
                double outlier_threshold, const std::string& region_str,
                const std::string& out_path) {
  TopoGraph a = load_graph_json(path_a);
  TopoGraph b = load_graph_json(path_b);
  VertexErrorReport rep =
      vertex_error(a, b, outlier_threshold, parse_region(region_str));
  std::cout << report_to_table(rep);
  if (!out_path.empty()) write_text(out_path, report_to_json(rep));
  return 0;
}

int cmd_render(const std::string& map_path, const std::string& dmap_path,
               const std::string& skeleton_path, const std::string& graph_path,
               const std::string& mask_path, const std::string& out_path) {
  RgbImage img;
  Rect canvas;
  if (!dmap_path.empty()) {
    DistanceMap dm = load_distance_map(dmap_path);
    canvas = dm.rect();
    img = rgb_from_gray(render_distance_map(dm));
  } else if (!map_path.empty()) {
    OccupancyGrid grid = load_grid(map_path);
    canvas = {{0, 0}, grid.width, grid.height};
    img = render_grid(grid);
  } else {
    throw std::runtime_error("render needs --map or --dmap");
  }
  if (!mask_path.empty()) overlay_mask(img, canvas, read_pbm(mask_path));
  if (!skeleton_path.empty()) overlay_skeleton(img, canvas, read_pbm(skeleton_path));
  if (!graph_path.empty()) overlay_graph(img, canvas, load_graph_json(graph_path));
  write_png_rgb(out_path, img);
  std::cout << "render: wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topology graphs from occupancy grids via distance maps"};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "batch pipeline on a grid map");
  std::string build_map, build_out = "out";
  ConfigFlags build_flags;
  build->add_option("map", build_map, "PGM/PNG occupancy image")->required();
  build->add_option("-o,--out", build_out, "output directory");
  build_flags.attach(build);

  // simulate
  auto* sim = app.add_subcommand("simulate", "raycast a log along a trajectory");
  std::string sim_map, sim_traj, sim_out = "scan.log";
  double sim_step = 0.1, sim_fov = 360.0, sim_range = 8.0;
  double sim_noise_std = 0.0, sim_noise_mean = 0.0;
  int sim_beams = 360;
  uint64_t sim_seed = 1;
  sim->add_option("map", sim_map, "PGM/PNG occupancy image")->required();
  sim->add_option("trajectory", sim_traj, "waypoint file: x y [theta] lines")
      ->required();
  sim->add_option("-o,--out", sim_out, "output frame log");
  sim->add_option("--step", sim_step, "meters per frame");
  sim->add_option("--beams", sim_beams, "beam count");
  sim->add_option("--fov", sim_fov, "field of view, degrees");
  sim->add_option("--range-max", sim_range, "max range, meters");
  sim->add_option("--noise-std", sim_noise_std, "range noise stddev, meters");
  sim->add_option("--noise-mean", sim_noise_mean, "range noise mean, meters");
  sim->add_option("--seed", sim_seed, "RNG seed");

  // replay
  auto* replay = app.add_subcommand("replay", "run the incremental engine on a log");
  std::string replay_log, replay_out = "out";
  int replay_snapshot = 0;
  ConfigFlags replay_flags;
  replay->add_option("log", replay_log, "frame log")->required();
  replay->add_option("-o,--out", replay_out, "output directory");
  replay->add_option("--snapshot-every", replay_snapshot,
                     "write a render every N frames (0 = off)");
  replay_flags.attach(replay);

  // compare
  auto* compare = app.add_subcommand("compare", "vertex error between two graphs");
  std::string cmp_a, cmp_b, cmp_region, cmp_out;
  double cmp_outlier = 20.0;
  compare->add_option("candidate", cmp_a, "candidate graph JSON")->required();
  compare->add_option("reference", cmp_b, "reference graph JSON")->required();
  compare->add_option("--outlier-threshold", cmp_outlier, "outlier cutoff (px)");
  compare->add_option("--region", cmp_region, "x0,y0,x1,y1 candidate filter");
  compare->add_option("-o,--out", cmp_out, "write the JSON report here");

  // render
  auto* render = app.add_subcommand("render", "compose a PNG from artifacts");
  std::string r_map, r_dmap, r_skel, r_graph, r_mask, r_out = "render.png";
  render->add_option("--map", r_map, "occupancy image base layer");
  render->add_option("--dmap", r_dmap, "distance map base layer");
  render->add_option("--skeleton", r_skel, "skeleton PBM overlay");
  render->add_option("--graph", r_graph, "graph JSON overlay");
  render->add_option("--mask", r_mask, "mask PBM overlay");
  render->add_option("-o,--out", r_out, "output PNG");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return cmd_build(build_map, build_flags, build_out);
    if (sim->parsed())
      return cmd_simulate(sim_map, sim_traj, sim_step, sim_beams, sim_fov,
                          sim_range, sim_noise_std, sim_noise_mean, sim_seed,
                          sim_out);
    if (replay->parsed())
      return cmd_replay(replay_log, replay_flags, replay_out, replay_snapshot);
    if (compare->parsed())
      return cmd_compare(cmp_a, cmp_b, cmp_outlier, cmp_region, cmp_out);
    if (render->parsed())
      return cmd_render(r_map, r_dmap, r_skel, r_graph, r_mask, r_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
