#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "lmk/geometry.hpp"

namespace lmk {

/// 8-bit single-channel raster, row-major. The only pixel source the
/// estimator reads. Treat as immutable once filled; all read paths are
/// then safe to share across threads.
class GrayImage {
 public:
  GrayImage() = default;

  GrayImage(int width, int height, std::uint8_t fill = 0);
  GrayImage(int width, int height, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  std::uint8_t at(int x, int y) const noexcept {
    return data_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                 static_cast<std::size_t>(x)];
  }
  std::uint8_t& at(int x, int y) noexcept {
    return data_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                 static_cast<std::size_t>(x)];
  }

  const std::vector<std::uint8_t>& pixels() const noexcept { return data_; }

  /// Test instrumentation: counts pixel reads made through sample_pixel.
  /// An attached counter makes concurrent sampling of this image unsafe.
  void attach_read_counter(std::uint64_t* counter) noexcept { read_counter_ = counter; }
  std::uint64_t* read_counter() const noexcept { return read_counter_; }

  friend bool operator==(const GrayImage& a, const GrayImage& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
  std::uint64_t* read_counter_ = nullptr;
};

/// Intensity at the pixel addressed by `loc` in the region's frame.
/// Pixel coordinates are rounded half away from zero, then clamped to the
/// image bounds, so any finite input is valid.
inline std::uint8_t sample_pixel(const GrayImage& img, const Region& region, NormLocation loc) {
  if (img.read_counter() != nullptr) {
    ++*img.read_counter();
  }
  const Vec2 p = to_pixel(region, Vec2{loc.u, loc.v});
  const double xr = std::round(p.x);
  const double yr = std::round(p.y);
  const int x = static_cast<int>(std::clamp(xr, 0.0, static_cast<double>(img.width() - 1)));
  const int y = static_cast<int>(std::clamp(yr, 0.0, static_cast<double>(img.height() - 1)));
  return img.at(x, y);
}

/// Pixel intensity comparison: 0 if I(l1) <= I(l2), 1 otherwise.
inline int binary_test(const GrayImage& img, const Region& region, NormLocation l1,
                       NormLocation l2) {
  return sample_pixel(img, region, l1) <= sample_pixel(img, region, l2) ? 0 : 1;
}

/// Reads a binary PGM (P5, maxval 255). Any other format is rejected.
GrayImage load_pgm(const std::filesystem::path& path);

void save_pgm(const std::filesystem::path& path, const GrayImage& img);

}  // namespace lmk
