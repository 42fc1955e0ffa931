#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "simseg/image.hpp"
#include "simseg/synthdata.hpp"

namespace simseg {

// Access point for dataset pixels. Virtual so tests can interpose counting
// doubles; the trainer only ever talks to this interface.
class DatasetReader {
 public:
  virtual ~DatasetReader() = default;
  virtual Image load_image(const ManifestItem& item) = 0;
  virtual Mask load_mask(const ManifestItem& item) = 0;
};

// Reads PNGs under the manifest root and keeps decoded 8-bit buffers in
// memory after first use.
class CachingReader : public DatasetReader {
 public:
  explicit CachingReader(const DatasetManifest& manifest);
  Image load_image(const ManifestItem& item) override;
  Mask load_mask(const ManifestItem& item) override;

 private:
  std::filesystem::path root_;
  std::unordered_map<std::string, std::vector<uint8_t>> image_cache_;  // id -> 8-bit RGB
  std::unordered_map<std::string, Mask> mask_cache_;
  int height_ = 0, width_ = 0;
};

// Wrapper counting load calls per split; used to audit label hygiene.
class CountingReader : public DatasetReader {
 public:
  explicit CountingReader(DatasetReader& inner) : inner_(inner) {}
  Image load_image(const ManifestItem& item) override;
  Mask load_mask(const ManifestItem& item) override;

  size_t image_loads(Split s) const { return image_counts_[size_t(s)]; }
  size_t mask_loads(Split s) const { return mask_counts_[size_t(s)]; }

 private:
  DatasetReader& inner_;
  size_t image_counts_[3] = {0, 0, 0};
  size_t mask_counts_[3] = {0, 0, 0};
};

}  // namespace simseg
