#pragma once

#include <cmath>
#include <stdexcept>

namespace lmk {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }

constexpr Vec2& operator+=(Vec2& a, Vec2 b) {
  a.x += b.x;
  a.y += b.y;
  return a;
}
constexpr Vec2& operator-=(Vec2& a, Vec2 b) {
  a.x -= b.x;
  a.y -= b.y;
  return a;
}

constexpr double norm_sq(Vec2 v) { return v.x * v.x + v.y * v.y; }

inline double distance(Vec2 a, Vec2 b) { return std::sqrt(norm_sq(a - b)); }

/// Single-precision pair as stored in trees and model files.
struct Vec2f {
  float x = 0.0f;
  float y = 0.0f;

  constexpr Vec2 to_vec2() const { return {static_cast<double>(x), static_cast<double>(y)}; }
  friend constexpr bool operator==(const Vec2f&, const Vec2f&) = default;
};

/// Test location in the [-1,+1]^2 frame of a region.
struct NormLocation {
  double u = 0.0;
  double v = 0.0;
};

/// Axis-aligned square in pixel space: the coordinate frame of every binary
/// test. `size` is the full side length and must be positive.
struct Region {
  double center_x = 0.0;
  double center_y = 0.0;
  double size = 0.0;

  friend constexpr bool operator==(const Region&, const Region&) = default;
};

/// Maps a point from a region's normalized frame to pixel coordinates,
/// center + n * size/2 per axis. Sampling uses the same mapping.
constexpr Vec2 to_pixel(const Region& region, Vec2 normalized) {
  const double half = region.size * 0.5;
  return {region.center_x + normalized.x * half, region.center_y + normalized.y * half};
}

/// Inverse of to_pixel.
constexpr Vec2 to_normalized(const Region& region, Vec2 pixel) {
  const double half = region.size * 0.5;
  return {(pixel.x - region.center_x) / half, (pixel.y - region.center_y) / half};
}

/// New region of side size*factor centered at `new_center`.
/// factor must be in (0, 1].
inline Region shrink_recenter(const Region& region, Vec2 new_center, double factor) {
  if (!(factor > 0.0) || factor > 1.0) {
    throw std::invalid_argument("shrink_recenter: factor must be in (0, 1]");
  }
  return Region{new_center.x, new_center.y, region.size * factor};
}

}  // namespace lmk
