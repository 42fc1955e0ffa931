#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "simseg/image.hpp"

namespace simseg {

// 8-bit PNG round trip. Images are stored as RGB with v -> round(v * 255);
// masks as grayscale 0 / 255 (255 = foreground).
void write_image_png(const std::filesystem::path& path, const Image& img);
void write_mask_png(const std::filesystem::path& path, const Mask& mask);
Image read_image_png(const std::filesystem::path& path);
Mask read_mask_png(const std::filesystem::path& path);

// JPEG encode-decode round trip in memory, quality in [1, 100].
Image jpeg_roundtrip(const Image& img, int quality);

uint32_t crc32_of_file(const std::filesystem::path& path);
uint32_t crc32_of_bytes(const uint8_t* data, size_t n);

}  // namespace simseg
