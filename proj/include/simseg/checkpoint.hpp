#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "simseg/model.hpp"

namespace simseg {

// Binary container, little-endian, documented byte-level in the README:
//   bytes 0..7   magic "SIMSEGCK"
//   bytes 8..11  u32 format version (1)
//   bytes 12..15 u32 config JSON length L
//   bytes 16..   L bytes of ModelConfig JSON
//   next 8       u64 training step
//   next 8       u64 parameter count N
//   next 8*N     parameters as f64
struct Checkpoint {
  ModelConfig config;
  std::vector<double> params;
  uint64_t step = 0;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace simseg
