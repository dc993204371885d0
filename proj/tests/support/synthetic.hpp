#pragma once

// Synthetic localization task shared by tests: one bright disc on a dark
// textured background, ground truth at the disc center.

#include <cstdint>
#include <vector>

#include "lmk/image.hpp"
#include "lmk/rng.hpp"
#include "lmk/tree.hpp"

namespace lmk::testsupport {

inline GrayImage make_noise_image(int width, int height, std::uint64_t seed, int low = 0,
                                  int high = 255) {
  Rng rng(seed);
  GrayImage img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      img.at(x, y) = static_cast<std::uint8_t>(
          low + static_cast<int>(rng.uniform(0.0, static_cast<double>(high - low + 1))));
    }
  }
  return img;
}

/// Dark texture shared by every image of the task, so pixel comparisons
/// carry signal across images instead of per-image noise. Smooth (a coarse
/// random grid, bilinearly upsampled) so that comparisons survive the small
/// region shifts introduced by box jitter and runtime perturbations.
inline const GrayImage& background_texture(int size) {
  static const GrayImage texture = [size] {
    constexpr int kCell = 8;
    const int grid = size / kCell + 2;
    Rng rng(0x7e577e57u);
    std::vector<double> coarse(static_cast<std::size_t>(grid) * grid);
    for (double& v : coarse) {
      v = rng.uniform(10.0, 56.0);
    }
    GrayImage img(size, size);
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const double gx = static_cast<double>(x) / kCell;
        const double gy = static_cast<double>(y) / kCell;
        const int x0 = static_cast<int>(gx);
        const int y0 = static_cast<int>(gy);
        const double fx = gx - x0;
        const double fy = gy - y0;
        const auto at = [&](int cx, int cy) { return coarse[static_cast<std::size_t>(cy) * grid + cx]; };
        const double top = at(x0, y0) * (1.0 - fx) + at(x0 + 1, y0) * fx;
        const double bottom = at(x0, y0 + 1) * (1.0 - fx) + at(x0 + 1, y0 + 1) * fx;
        img.at(x, y) = static_cast<std::uint8_t>(top * (1.0 - fy) + bottom * fy);
      }
    }
    return img;
  }();
  return texture;
}

inline GrayImage make_disc_image(int size, Vec2 center, double radius, Rng& rng) {
  const GrayImage& texture = background_texture(size);
  GrayImage img(size, size);
  const double r_sq = radius * radius;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dx = x - center.x;
      const double dy = y - center.y;
      if (dx * dx + dy * dy <= r_sq) {
        img.at(x, y) = static_cast<std::uint8_t>(200 + static_cast<int>(rng.uniform(0.0, 50.0)));
      } else {
        img.at(x, y) = static_cast<std::uint8_t>(texture.at(x, y) +
                                                 static_cast<int>(rng.uniform(0.0, 6.0)));
      }
    }
  }
  return img;
}

struct DiscDataset {
  std::vector<GrayImage> images;
  std::vector<TrainSample> samples;  // region = face box, target = disc center
  std::vector<Vec2> centers;         // ground truth, pixels
  Region box;                        // shared face box
};

/// 64x64 images, a radius-5 disc uniform inside the centered 48-px box.
inline DiscDataset make_disc_dataset(int count, std::uint64_t seed) {
  DiscDataset data;
  data.box = Region{32.0, 32.0, 48.0};
  data.images.reserve(static_cast<std::size_t>(count));
  data.centers.reserve(static_cast<std::size_t>(count));
  Rng rng(seed);
  const double radius = 5.0;
  const double margin = radius + 1.0;
  const double lo = data.box.center_x - data.box.size / 2.0 + margin;
  const double hi = data.box.center_x + data.box.size / 2.0 - margin;
  for (int i = 0; i < count; ++i) {
    const Vec2 center{rng.uniform(lo, hi), rng.uniform(lo, hi)};
    data.centers.push_back(center);
    data.images.push_back(make_disc_image(64, center, radius, rng));
  }
  data.samples.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    data.samples.push_back(TrainSample{&data.images[static_cast<std::size_t>(i)], data.box,
                                       to_normalized(data.box, data.centers[static_cast<std::size_t>(i)])});
  }
  return data;
}

}  // namespace lmk::testsupport
