#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "simseg/image.hpp"

namespace simseg {

enum class Nonlinearity { RELU, LEAKY_RELU };
std::string to_string(Nonlinearity n);
Nonlinearity nonlinearity_from_string(const std::string& s);

// U-shaped encoder-decoder: one 3x3 conv + activation per level, 2x2 max
// pooling down, nearest upsampling + level-for-level skip concatenation up,
// 1x1 head, per-pixel softmax over the classes.
struct ModelConfig {
  int in_channels = 3;
  int num_classes = 2;
  std::vector<int> encoder_widths = {16, 32, 64, 128};
  Nonlinearity nonlinearity = Nonlinearity::RELU;
  uint64_t init_seed = 0;

  int depth() const { return int(encoder_widths.size()); }
  void validate() const;
};

bool operator==(const ModelConfig& a, const ModelConfig& b);

// Closed-form parameter count for a config: every conv contributes
// oc*ic*k*k weights + oc biases.
size_t model_param_count(const ModelConfig& cfg);

// Opaque forward state kept for the backward pass of one input.
struct ForwardCache;

class SegModel {
 public:
  explicit SegModel(const ModelConfig& cfg);
  ~SegModel();
  SegModel(const SegModel&) = delete;
  SegModel& operator=(const SegModel&) = delete;
  SegModel(SegModel&&) noexcept;
  SegModel& operator=(SegModel&&) noexcept;

  const ModelConfig& config() const { return cfg_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  // Fan-in scaled uniform weights, zero biases, reproducible from the seed.
  void init_params(uint64_t seed);

  // Spatial dims must be divisible by 2^depth.
  ProbMap forward(const Image& img) const;
  ProbMap forward_cached(const Image& img, ForwardCache& cache) const;

  // Accumulates parameter gradients for one image into grad (same layout as
  // params()), given dL/dprobs for the softmax output stored in the cache.
  void backward(const ForwardCache& cache, const ProbMap& grad_probs,
                std::vector<double>& grad) const;

 private:
  ModelConfig cfg_;
  std::vector<double> params_;
  struct Layers;
  Layers* layers_;
};

// Fresh cache object; reusable across forward_cached calls.
ForwardCache* new_forward_cache();
void free_forward_cache(ForwardCache*);

struct ForwardCacheHandle {
  ForwardCache* ptr;
  ForwardCacheHandle() : ptr(new_forward_cache()) {}
  ~ForwardCacheHandle() { free_forward_cache(ptr); }
  ForwardCacheHandle(const ForwardCacheHandle&) = delete;
  ForwardCacheHandle& operator=(const ForwardCacheHandle&) = delete;
  ForwardCache& operator*() { return *ptr; }
};

// Per-pixel argmax; ties break toward background (class 0). Requires a
// 2-class map; class 1 is the instrument.
Mask predict_mask(const ProbMap& pm);

}  // namespace simseg
