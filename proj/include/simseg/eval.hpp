#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "simseg/dataset.hpp"
#include "simseg/model.hpp"

namespace simseg {

// 2|A n B| / (|A| + |B|); both masks empty -> 1.0.
double dice(const Mask& pred, const Mask& truth);

struct EvalReport {
  std::vector<std::string> ids;
  std::vector<double> per_image_dice;
  double mean_dice = 0.0;
  double std_dice = 0.0;  // population formula
  std::map<std::string, std::string> metadata;
};

// Per-image forward -> argmax -> Dice over a labeled split.
EvalReport evaluate(const SegModel& model, const DatasetManifest& manifest,
                    DatasetReader& reader, Split split);

void save_eval_report(const EvalReport& rep, const std::filesystem::path& path);

double mean_of(const std::vector<double>& v);
double population_std(const std::vector<double>& v);

}  // namespace simseg
