#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lmk/tree.hpp"

namespace lmk {

struct LandmarkPoint {
  std::string label;
  Vec2 position;  // pixels
};

/// One manifest line: an image, its face box, and labeled landmark
/// coordinates in pixels. image_path is already resolved against the
/// manifest's directory.
struct ManifestRecord {
  std::filesystem::path image_path;
  Region face_box;
  std::vector<LandmarkPoint> landmarks;

  std::optional<Vec2> find_landmark(const std::string& label) const;
};

/// Reads a line-delimited JSON manifest. Each non-blank line is an object
/// {"image": path, "box": [cx, cy, size], "landmarks": {label: [x, y]}}.
/// Parse and validation failures name the offending line.
std::vector<ManifestRecord> load_manifest(const std::filesystem::path& path);

/// Loads every record's PGM, in record order.
std::vector<GrayImage> load_images(std::span<const ManifestRecord> records);

/// Horizontal flip: column x maps to width-1-x. Applying it twice gives back
/// the original image.
GrayImage mirror_horizontal(const GrayImage& img);

struct AugmentationConfig {
  int copies_per_image = 20;
  double center_jitter = 0.07;  // fraction of box size, per axis
  double scale_low = 0.9;
  double scale_high = 1.1;
  bool mirror = false;
  std::uint64_t seed = 0;
};

/// Label pairs that swap under horizontal mirroring (left eye <-> right eye).
/// Labels without an entry are treated as self-symmetric.
class SymmetryTable {
 public:
  SymmetryTable() = default;
  SymmetryTable(std::initializer_list<std::pair<std::string, std::string>> pairs);

  void add(const std::string& a, const std::string& b);
  const std::string& mirrored(const std::string& label) const;

 private:
  std::unordered_map<std::string, std::string> map_;
};

/// Training samples plus the mirrored pixel data they reference. Samples
/// point into the caller's `images` span and into `mirrored_images`; both
/// must stay alive (and unmoved) while the samples are in use.
struct AugmentedSamples {
  std::vector<GrayImage> mirrored_images;
  std::vector<TrainSample> samples;
};

/// Emits copies_per_image jittered samples per record (center and scale
/// jitter drawn like runtime perturbations: dx, dy, scale per copy), each
/// followed by its horizontally mirrored twin when cfg.mirror is set.
/// Record sub-seeds derive from (cfg.seed, record index), so output is
/// deterministic. Targets are the landmark re-expressed in the jittered
/// region's normalized frame.
AugmentedSamples augment(std::span<const ManifestRecord> records,
                         std::span<const GrayImage> images, const std::string& landmark_label,
                         const AugmentationConfig& cfg, const SymmetryTable& symmetry = {});

}  // namespace lmk
