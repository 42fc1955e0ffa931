#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "simseg/image.hpp"

namespace simseg {

enum class Scheme { NONE, WEAK, STRONG };
std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

enum class PerturbOp {
  // pixel-intensity family
  BRIGHTNESS_CONTRAST,
  POSTERISE,
  SOLARISE,
  GAMMA,
  HSV_SHIFT,
  HIST_EQ,
  CLAHE,
  // pixel-corruption family
  GAUSS_NOISE,
  MOTION_BLUR,
  JPEG,
  DROPOUT,
  FOG,
  EMBOSS,
  ISO_NOISE,
};

std::string to_string(PerturbOp op);
PerturbOp perturb_op_from_string(const std::string& s);
bool is_intensity_op(PerturbOp op);
bool is_corruption_op(PerturbOp op);
const std::vector<PerturbOp>& intensity_ops();   // 7 ops
const std::vector<PerturbOp>& corruption_ops();  // 7 ops

// Parameter ranges for every op. The defaults here are the pinned table;
// acceptance tests run against it. Serializable as JSON for overrides.
struct PerturbRanges {
  double brightness_lo = -0.2, brightness_hi = 0.2;
  double contrast_lo = 0.7, contrast_hi = 1.3;
  int posterise_levels_lo = 4, posterise_levels_hi = 8;
  double solarise_lo = 0.3, solarise_hi = 0.7;
  double gamma_lo = 0.5, gamma_hi = 2.0;
  double hue_shift = 0.1;        // +- in hue turns
  double sat_shift = 0.3;        // +- relative
  double val_shift = 0.3;        // +- relative
  double clahe_clip_lo = 1.5, clahe_clip_hi = 4.0;
  int clahe_tiles = 8;
  double gauss_sigma_lo = 0.01, gauss_sigma_hi = 0.08;
  int blur_len_lo = 3, blur_len_hi = 7;  // odd lengths
  int jpeg_quality_lo = 30, jpeg_quality_hi = 90;
  double dropout_lo = 0.02, dropout_hi = 0.10;
  double fog_lo = 0.1, fog_hi = 0.4;
  double fog_scale = 32.0;  // value-noise cell size of the fog field
  double emboss_lo = 0.2, emboss_hi = 0.7;
  double iso_luma_lo = 0.02, iso_luma_hi = 0.08;
  double iso_chroma_lo = 0.01, iso_chroma_hi = 0.03;
  // geometric augmentation
  double rot_deg = 15.0;
  double translate_px = 12.0;
  double scale_lo = 0.9, scale_hi = 1.1;
  double shear_deg = 5.0;
  double flip_prob = 0.5;
};

void save_perturb_ranges(const PerturbRanges& r, const std::filesystem::path& path);
PerturbRanges load_perturb_ranges(const std::filesystem::path& path);

struct DrawnOp {
  PerturbOp op;
  std::map<std::string, double> params;
};

// Replayable description of one perturbation draw. WEAK = one intensity op;
// STRONG = one intensity op followed by one corruption op.
struct PerturbationSpec {
  Scheme scheme = Scheme::NONE;
  std::vector<DrawnOp> ops;
  uint64_t seed = 0;
};

PerturbationSpec draw_perturbation(Scheme scheme, uint64_t seed,
                                   const PerturbRanges& ranges = {});

Image pixel_intensity_op(const Image& img, PerturbOp op,
                         const std::map<std::string, double>& params);
Image pixel_corruption_op(const Image& img, PerturbOp op,
                          const std::map<std::string, double>& params);

// Applies spec.ops in order. Pure function of (spec, img).
Image apply(const PerturbationSpec& spec, const Image& img);

// Affine + flip augmentation, applied identically to image and mask.
struct GeomAugSpec {
  double rotation_deg = 0.0;
  double translate_x = 0.0;
  double translate_y = 0.0;
  double scale = 1.0;
  double shear_deg = 0.0;
  bool hflip = false;
  bool vflip = false;
  uint64_t seed = 0;
};

GeomAugSpec draw_geom_aug(uint64_t seed, const PerturbRanges& ranges = {});

// Image sampled bilinearly, mask by nearest neighbour; out-of-canvas reads
// are background. Both get the identical transform about the image center.
std::pair<Image, Mask> apply_geom(const GeomAugSpec& spec, const Image& img,
                                  const Mask& mask);
Image apply_geom_image(const GeomAugSpec& spec, const Image& img);

}  // namespace simseg
