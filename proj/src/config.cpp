#include "incrtopo/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace incrtopo {

void UpdateSchedule::validate() const {
  if (distmap_every < 1 || skeleton_every < 1 || graph_every < 1)
    throw std::runtime_error("schedule periods must be >= 1");
  if (skeleton_every % distmap_every != 0)
    throw std::runtime_error("skeleton period must be a multiple of the distance map period");
  if (graph_every % skeleton_every != 0)
    throw std::runtime_error("graph period must be a multiple of the skeleton period");
}

void RunConfig::validate() const {
  if (sigma <= 0 || laplacian_scale <= 0 || binarize_threshold < 0 ||
      protected_layer_width < 1 || connect_radius < 1 || outlier_threshold <= 0 ||
      resolution <= 0 || tile < 1)
    throw std::runtime_error("config values must be positive");
  schedule.validate();
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    auto num = [&]() {
      double v;
      if (!(ss >> v))
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": expected a number after '" + key + "'");
      return v;
    };
    if (key == "sigma") base.sigma = num();
    else if (key == "kernel_radius") base.kernel_radius = int(num());
    else if (key == "laplacian_scale") base.laplacian_scale = num();
    else if (key == "binarize_threshold") base.binarize_threshold = num();
    else if (key == "distmap_every") base.schedule.distmap_every = int(num());
    else if (key == "skeleton_every") base.schedule.skeleton_every = int(num());
    else if (key == "graph_every") base.schedule.graph_every = int(num());
    else if (key == "protected_layer_width") base.protected_layer_width = int(num());
    else if (key == "connect_radius") base.connect_radius = int(num());
    else if (key == "outlier_threshold") base.outlier_threshold = num();
    else if (key == "resolution") base.resolution = num();
    else if (key == "origin_x") base.origin_x = num();
    else if (key == "origin_y") base.origin_y = num();
    else if (key == "pipelined") base.pipelined = num() != 0;
    else
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
  }
  return base;
}

}  // namespace incrtopo
