#pragma once

#include <filesystem>
#include <string>

#include "simseg/trainer.hpp"

namespace simseg {

// Top-level experiment description: everything a train/ablation invocation
// needs, serialized as one JSON file.
struct ExperimentConfig {
  std::string name = "experiment";
  std::filesystem::path dataset;  // dataset root containing manifest.json
  std::filesystem::path out;      // output directory
  TrainConfig train;
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);
void save_experiment_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

// Relative paths resolve against $SIMSEG_OUT_ROOT when it is set, else
// against the current directory. Absolute paths pass through.
std::filesystem::path resolve_out_path(const std::filesystem::path& p);

}  // namespace simseg
