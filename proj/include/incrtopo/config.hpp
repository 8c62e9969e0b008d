#pragma once

#include <string>

namespace incrtopo {

struct UpdateSchedule {
  int distmap_every = 1;
  int skeleton_every = 20;
  int graph_every = 80;

  // all >= 1, skeleton_every a multiple of distmap_every, graph_every a
  // multiple of skeleton_every
  void validate() const;
};

// Pipeline parameters shared by the batch path, the engine and the CLI.
struct RunConfig {
  double sigma = 3.0;              // pixels
  int kernel_radius = -1;          // -1: ceil(3.5 * sigma)
  double laplacian_scale = 255.0;
  double binarize_threshold = 10.0;
  UpdateSchedule schedule;
  int protected_layer_width = 3;   // px, seam layer appended before thinning
  int connect_radius = 3;          // px, seam-vertex linking radius
  double outlier_threshold = 20.0; // px, vertex-error cutoff
  double resolution = 1.0;         // meters per pixel for scan projection
  double origin_x = 0.0;
  double origin_y = 0.0;
  bool pipelined = false;          // run skeleton/graph loops on worker threads
  int tile = 64;                   // canvas growth increment

  void validate() const;
};

// "key value" lines, '#' comments. Unknown keys are rejected.
RunConfig load_config_file(const std::string& path, RunConfig base = {});

}  // namespace incrtopo
