#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "simseg/image.hpp"
#include "simseg/rng.hpp"

namespace simseg {

enum class Domain { SIM, REAL };
enum class Split { SIM, REAL_UL, REAL_L };

std::string to_string(Domain d);
std::string to_string(Split s);
Domain domain_from_string(const std::string& s);
Split split_from_string(const std::string& s);

// An elongated two-segment capsule: spine runs from (x0, y0) along
// `orientation_rad` for `joint_frac * length`, then bends by
// `articulation_rad` for the remainder. Footprint = points within
// `half_width` of the spine.
struct ToolShape {
  double x0 = 0.0, y0 = 0.0;
  double orientation_rad = 0.0;
  double length = 0.0;
  double half_width = 0.0;
  double joint_frac = 0.5;
  double articulation_rad = 0.0;
  double shade = 1.0;  // per-tool brightness jitter
};

struct SceneSpec {
  int n_tools = 1;  // 0 allowed as an explicit degenerate scene, max 3
  std::vector<ToolShape> tools;
  int background_texture_id = 0;
  double palette_base[3] = {0.55, 0.26, 0.26};
  double palette_accent[3] = {0.72, 0.42, 0.38};
  double light_dir_rad = 0.0;
  double light_strength = 0.1;
  double radius_frac = 1.0;  // circular-mask radius fraction
  uint64_t seed = 0;         // drives per-pixel stochastic fields
};

// Family-level appearance description. SIM and REAL share the tool-shape
// generator and differ only in texture/color/noise statistics.
struct DomainStyle {
  Domain tag = Domain::SIM;
  int texture_family = 0;  // 0 = smooth blotches, 1 = striated mottle
  double color_gain[3] = {1.0, 1.0, 1.0};
  double color_offset[3] = {0.0, 0.0, 0.0};
  double noise_floor = 0.0;      // sigma of the additive pixel noise
  double specular_prob = 0.0;    // per-scene probability of highlight blobs
  double extra_light = 1.0;      // scales the scene lighting gradient
  double tool_tint[3] = {1.0, 1.0, 1.0};
};

DomainStyle default_style(Domain d);

struct SceneGenConfig {
  int height = 128;
  int width = 128;
  double fg_band_lo = 0.02;  // accepted mask foreground fraction band
  double fg_band_hi = 0.40;
  double radius_frac_lo = 0.85;
  double radius_frac_hi = 1.0;
  int max_tools = 3;
};

// Draws scene geometry/palette from `rng` without any validity filtering.
SceneSpec draw_scene_spec(Rng& rng, const SceneGenConfig& cfg);

// Draws specs from Rng(scene_seed) until the rendered mask foreground
// fraction falls inside the configured band. Throws DataError after too
// many rejections.
SceneSpec sample_scene_spec(uint64_t scene_seed, const SceneGenConfig& cfg);

// Rasterizes the tool footprints clipped to the circular scene mask.
// Style-independent: this is the single source of ground truth.
Mask render_mask(const SceneSpec& spec, int height, int width);

// Deterministic render of one (Image, Mask) pair.
std::pair<Image, Mask> generate_scene(const SceneSpec& spec, const DomainStyle& style,
                                      const SceneGenConfig& cfg = {});

// Zeroes image pixels / clears mask labels outside the centered circle of
// radius radius_frac * min(H, W) / 2. A pixel (x, y) is inside iff its
// distance from ((W-1)/2, (H-1)/2) is strictly less than the radius.
std::pair<Image, Mask> apply_circular_mask(const Image& img, const Mask& mask,
                                           double radius_frac);

struct ManifestItem {
  std::string id;
  Split split = Split::SIM;
  Domain domain = Domain::SIM;
  uint64_t scene_seed = 0;
  std::string image_path;  // relative to the dataset root
  std::string mask_path;
  uint32_t image_crc32 = 0;
  uint32_t mask_crc32 = 0;
  bool audit_only_mask = false;  // REAL_UL: stored for audit, off-limits in training
};

struct DatasetManifest {
  int version = 1;
  uint64_t seed = 0;
  int height = 128;
  int width = 128;
  std::filesystem::path root;  // not serialized; set on save/load
  std::vector<ManifestItem> items;

  std::vector<const ManifestItem*> split_items(Split s) const;
  size_t split_size(Split s) const;
};

void save_manifest(const DatasetManifest& m, const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

struct BuildConfig {
  int n_sim = 0;
  int n_real = 0;
  uint64_t seed = 0;
  std::filesystem::path out_dir;
  SceneGenConfig scene;
  double real_test_frac = 0.3;  // REAL_L share, assigned by scene-seed hash
};

// Generates the SIM / REAL_UL / REAL_L splits on disk and writes
// manifest.json in the dataset root.
DatasetManifest build_dataset(const BuildConfig& cfg);
DatasetManifest build_dataset(int n_sim, int n_real, uint64_t seed,
                              const std::filesystem::path& out_dir);

}  // namespace simseg
