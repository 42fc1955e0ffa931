#include "simseg/image.hpp"

#include <cmath>

namespace simseg {

bool probmap_is_valid(const ProbMap& pm, double tol) {
  const size_t px = pm.pixel_count();
  for (size_t i = 0; i < px; ++i) {
    double sum = 0.0;
    for (int c = 0; c < pm.channels; ++c) {
      double v = pm.probs[size_t(c) * px + i];
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) return false;
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

ProbMap one_hot(const Mask& mask) {
  ProbMap pm(2, mask.height, mask.width, 0.0);
  const size_t px = pm.pixel_count();
  for (size_t i = 0; i < px; ++i) {
    if (mask.labels[i])
      pm.probs[px + i] = 1.0;
    else
      pm.probs[i] = 1.0;
  }
  return pm;
}

}  // namespace simseg
