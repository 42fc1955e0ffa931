#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "simseg/dataset.hpp"
#include "simseg/losses.hpp"
#include "simseg/model.hpp"
#include "simseg/perturb.hpp"

namespace simseg {

enum class TrainMode { SUPERVISED_BASELINE, PI_MODEL, SCL };
std::string to_string(TrainMode m);
TrainMode train_mode_from_string(const std::string& s);

struct TrainConfig {
  int batch_size = 8;
  int epochs = 50;
  double weight_decay = 1e-6;  // loss term weight_decay * ||theta||^2
  double learning_rate = 1e-3;
  Scheme scheme = Scheme::STRONG;  // consistency perturbation and SIM augmentation
  TrainMode mode = TrainMode::SCL;
  LossConfig loss;
  AlphaSchedule alpha;  // TEMPORAL_LINEAR total_steps is filled in by train()
  std::vector<uint64_t> seeds = {1, 2, 3};
  ModelConfig model;
  PerturbRanges perturb;
  int eval_train_subset = 128;  // SIM items used for the per-epoch train Dice

  void validate() const;
};

struct EpochMetrics {
  int epoch = 0;
  double l_sl_mean = 0.0;
  double l_cl_mean = 0.0;
  double alpha_end = 0.0;  // alpha at the last step of the epoch
  double train_dice = 0.0;
  double test_dice = 0.0;
};

struct RunMetrics {
  uint64_t seed = 0;
  int steps_per_epoch = 0;
  int total_steps = 0;
  std::vector<EpochMetrics> epochs;
  double final_test_dice = 0.0;
};

struct TrainResult {
  RunMetrics metrics;
  std::filesystem::path checkpoint_path;
  std::filesystem::path metrics_path;
};

// One training run. Writes checkpoint.bin and metrics.jsonl (one JSON record
// per line: per-step losses and per-epoch summaries, no wall-clock fields)
// under run_dir. Deterministic: (cfg, manifest, seed) fixes every byte.
TrainResult train(const TrainConfig& cfg, const DatasetManifest& manifest,
                  DatasetReader& reader, uint64_t seed,
                  const std::filesystem::path& run_dir);

struct AggregateReport {
  std::string name;
  TrainMode mode = TrainMode::SCL;
  Scheme scheme = Scheme::STRONG;
  ConsistencyKind loss_kind = ConsistencyKind::SCL;
  AlphaSchedule::Kind alpha_kind = AlphaSchedule::Kind::TEMPORAL_LINEAR;
  std::vector<RunMetrics> runs;  // ordered by seed
  double mean_final_dice = 0.0;
  double std_final_dice = 0.0;  // population std across runs
};

// Trains once per cfg.seeds entry (runs sorted by seed so the report does
// not depend on the listed order), aggregates final test Dice.
AggregateReport run_experiment(const TrainConfig& cfg, const DatasetManifest& manifest,
                               DatasetReader& reader,
                               const std::filesystem::path& out_dir,
                               const std::string& name = "experiment");

void save_report(const AggregateReport& rep, const std::filesystem::path& path);

struct WarmupSample {
  int64_t step = 0;
  double alpha = 0.0;
  double cl_weight_share = 0.0;  // alpha*L_cl / (L_sl + alpha*L_cl)
};

struct WarmupProbe {
  std::vector<WarmupSample> series;
  bool alpha_nondecreasing = false;
  double alpha_at_midpoint = 0.0;
};

// Runs one short training with cfg (TEMPORAL_LINEAR required) and extracts
// the per-step (step, alpha, weight-share) series from the metrics log.
WarmupProbe warmup_property_probe(const TrainConfig& cfg, const DatasetManifest& manifest,
                                  DatasetReader& reader,
                                  const std::filesystem::path& scratch_dir);

}  // namespace simseg
