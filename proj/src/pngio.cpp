#include "simseg/pngio.hpp"

#include <zlib.h>

#include <cmath>
#include <fstream>
#include <opencv2/imgcodecs.hpp>

#include "simseg/errors.hpp"

namespace simseg {

namespace {

uint8_t to_u8(double v) {
  double s = std::lround(std::min(1.0, std::max(0.0, v)) * 255.0);
  return uint8_t(s);
}

}  // namespace

void write_image_png(const std::filesystem::path& path, const Image& img) {
  cv::Mat bgr(img.height, img.width, CV_8UC3);
  for (int y = 0; y < img.height; ++y) {
    uint8_t* row = bgr.ptr<uint8_t>(y);
    for (int x = 0; x < img.width; ++x) {
      row[x * 3 + 0] = to_u8(img.at(y, x, 2));
      row[x * 3 + 1] = to_u8(img.at(y, x, 1));
      row[x * 3 + 2] = to_u8(img.at(y, x, 0));
    }
  }
  if (!cv::imwrite(path.string(), bgr))
    throw IoError("failed to write PNG: " + path.string());
}

void write_mask_png(const std::filesystem::path& path, const Mask& mask) {
  cv::Mat gray(mask.height, mask.width, CV_8UC1);
  for (int y = 0; y < mask.height; ++y) {
    uint8_t* row = gray.ptr<uint8_t>(y);
    for (int x = 0; x < mask.width; ++x) row[x] = mask.at(y, x) ? 255 : 0;
  }
  if (!cv::imwrite(path.string(), gray))
    throw IoError("failed to write PNG: " + path.string());
}

Image read_image_png(const std::filesystem::path& path) {
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw IoError("failed to read PNG: " + path.string());
  Image img(bgr.rows, bgr.cols);
  for (int y = 0; y < img.height; ++y) {
    const uint8_t* row = bgr.ptr<uint8_t>(y);
    for (int x = 0; x < img.width; ++x) {
      img.at(y, x, 0) = row[x * 3 + 2] / 255.0;
      img.at(y, x, 1) = row[x * 3 + 1] / 255.0;
      img.at(y, x, 2) = row[x * 3 + 0] / 255.0;
    }
  }
  return img;
}

Mask read_mask_png(const std::filesystem::path& path) {
  cv::Mat gray = cv::imread(path.string(), cv::IMREAD_GRAYSCALE);
  if (gray.empty()) throw IoError("failed to read PNG: " + path.string());
  Mask mask(gray.rows, gray.cols);
  for (int y = 0; y < mask.height; ++y) {
    const uint8_t* row = gray.ptr<uint8_t>(y);
    for (int x = 0; x < mask.width; ++x) mask.at(y, x) = row[x] >= 128 ? 1 : 0;
  }
  return mask;
}

Image jpeg_roundtrip(const Image& img, int quality) {
  if (quality < 1 || quality > 100) throw ParamError("jpeg_roundtrip: quality out of range");
  cv::Mat bgr(img.height, img.width, CV_8UC3);
  for (int y = 0; y < img.height; ++y) {
    uint8_t* row = bgr.ptr<uint8_t>(y);
    for (int x = 0; x < img.width; ++x) {
      row[x * 3 + 0] = to_u8(img.at(y, x, 2));
      row[x * 3 + 1] = to_u8(img.at(y, x, 1));
      row[x * 3 + 2] = to_u8(img.at(y, x, 0));
    }
  }
  std::vector<uint8_t> buf;
  std::vector<int> params = {cv::IMWRITE_JPEG_QUALITY, quality};
  if (!cv::imencode(".jpg", bgr, buf, params)) throw IoError("JPEG encode failed");
  cv::Mat dec = cv::imdecode(buf, cv::IMREAD_COLOR);
  if (dec.empty()) throw IoError("JPEG decode failed");
  Image out(dec.rows, dec.cols);
  for (int y = 0; y < out.height; ++y) {
    const uint8_t* row = dec.ptr<uint8_t>(y);
    for (int x = 0; x < out.width; ++x) {
      out.at(y, x, 0) = row[x * 3 + 2] / 255.0;
      out.at(y, x, 1) = row[x * 3 + 1] / 255.0;
      out.at(y, x, 2) = row[x * 3 + 0] / 255.0;
    }
  }
  return out;
}

uint32_t crc32_of_bytes(const uint8_t* data, size_t n) {
  return uint32_t(::crc32(0L, data, uInt(n)));
}

uint32_t crc32_of_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for checksum: " + path.string());
  uint32_t crc = uint32_t(::crc32(0L, Z_NULL, 0));
  char buf[1 << 16];
  while (f) {
    f.read(buf, sizeof(buf));
    std::streamsize got = f.gcount();
    if (got > 0)
      crc = uint32_t(::crc32(crc, reinterpret_cast<const Bytef*>(buf), uInt(got)));
  }
  return crc;
}

}  // namespace simseg
