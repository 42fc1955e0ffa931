#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "simseg/trainer.hpp"

namespace simseg {

// One ablation table row: a label plus the config mutation that produced it.
struct AblationRow {
  std::string label;
  TrainConfig config;
};

// Presets: "baseline-vs-joint", "loss-ablation", "perturbation-ablation",
// "alpha-ablation". Rows mirror the corresponding comparison tables.
std::vector<AblationRow> ablation_preset_rows(const std::string& preset,
                                              const TrainConfig& base);

struct AblationResult {
  std::string preset;
  std::vector<std::string> labels;
  std::vector<AggregateReport> reports;
  std::filesystem::path table_csv;
  std::filesystem::path table_txt;
};

// Runs every row (cfg.seeds runs each) and emits the comparison table as
// CSV and aligned text under out_dir.
AblationResult run_ablation_preset(const std::string& preset, const TrainConfig& base,
                                   const DatasetManifest& manifest, DatasetReader& reader,
                                   const std::filesystem::path& out_dir);

// Writes table files from already-computed reports (also used on reload).
void write_ablation_tables(const std::string& preset,
                           const std::vector<std::string>& labels,
                           const std::vector<AggregateReport>& reports,
                           const std::filesystem::path& csv_path,
                           const std::filesystem::path& txt_path);

// Renders loss / Dice / alpha curves from a run's metrics.jsonl into PNGs.
std::vector<std::filesystem::path> plot_run_metrics(const std::filesystem::path& metrics_jsonl,
                                                    const std::filesystem::path& out_dir);

// Grid of n seeded perturbation draws with op labels.
void perturb_preview(const std::filesystem::path& image_path, Scheme scheme, int n,
                     uint64_t seed, const std::filesystem::path& out_path,
                     const PerturbRanges& ranges = {});

}  // namespace simseg
