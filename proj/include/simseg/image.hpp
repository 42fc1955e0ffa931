#pragma once

#include <cstdint>
#include <vector>

#include "simseg/errors.hpp"

namespace simseg {

// H x W x 3 interleaved RGB, values in [0, 1].
struct Image {
  int height = 0;
  int width = 0;
  std::vector<double> pixels;  // size height * width * 3, RGB order

  Image() = default;
  Image(int h, int w, double fill = 0.0)
      : height(h), width(w), pixels(size_t(h) * w * 3, fill) {
    if (h <= 0 || w <= 0) throw ParamError("Image: non-positive dimensions");
  }

  double& at(int y, int x, int c) { return pixels[(size_t(y) * width + x) * 3 + c]; }
  double at(int y, int x, int c) const { return pixels[(size_t(y) * width + x) * 3 + c]; }
  size_t pixel_count() const { return size_t(height) * width; }
};

// H x W binary labels, 0 = background, 1 = instrument.
struct Mask {
  int height = 0;
  int width = 0;
  std::vector<uint8_t> labels;

  Mask() = default;
  Mask(int h, int w, uint8_t fill = 0)
      : height(h), width(w), labels(size_t(h) * w, fill) {
    if (h <= 0 || w <= 0) throw ParamError("Mask: non-positive dimensions");
  }

  uint8_t& at(int y, int x) { return labels[size_t(y) * width + x]; }
  uint8_t at(int y, int x) const { return labels[size_t(y) * width + x]; }

  size_t foreground_count() const {
    size_t n = 0;
    for (uint8_t v : labels) n += (v != 0);
    return n;
  }
};

// Per-pixel class probabilities, planar layout: channel c at
// probs[c * H * W + y * W + x]. Each pixel sums to 1.
struct ProbMap {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> probs;

  ProbMap() = default;
  ProbMap(int c, int h, int w, double fill = 0.0)
      : channels(c), height(h), width(w), probs(size_t(c) * h * w, fill) {
    if (c <= 0 || h <= 0 || w <= 0) throw ParamError("ProbMap: non-positive dimensions");
  }

  double& at(int c, int y, int x) { return probs[(size_t(c) * height + y) * width + x]; }
  double at(int c, int y, int x) const { return probs[(size_t(c) * height + y) * width + x]; }
  const double* plane(int c) const { return probs.data() + size_t(c) * height * width; }
  double* plane(int c) { return probs.data() + size_t(c) * height * width; }
  size_t pixel_count() const { return size_t(height) * width; }
};

// Whether probabilities lie in [0,1] and each pixel sums to 1 within tol.
bool probmap_is_valid(const ProbMap& pm, double tol = 1e-5);

// One-hot encoding of a binary mask as a 2-channel ProbMap
// (channel 0 = background, channel 1 = instrument).
ProbMap one_hot(const Mask& mask);

inline void require_same_shape(const ProbMap& a, const ProbMap& b, const char* who) {
  if (a.channels != b.channels || a.height != b.height || a.width != b.width)
    throw ParamError(std::string(who) + ": shape mismatch");
}

}  // namespace simseg
