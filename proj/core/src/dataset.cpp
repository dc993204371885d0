#include "lmk/dataset.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace lmk {

std::optional<Vec2> ManifestRecord::find_landmark(const std::string& label) const {
  for (const LandmarkPoint& lm : landmarks) {
    if (lm.label == label) {
      return lm.position;
    }
  }
  return std::nullopt;
}

namespace {

[[noreturn]] void manifest_error(const std::filesystem::path& path, std::size_t line_no,
                                 const std::string& reason) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + reason);
}

ManifestRecord parse_record(const nlohmann::json& j, const std::filesystem::path& path,
                            std::size_t line_no) {
  if (!j.is_object()) {
    manifest_error(path, line_no, "expected a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "image" && key != "box" && key != "landmarks") {
      manifest_error(path, line_no, "unknown field \"" + key + "\"");
    }
  }
  if (!j.contains("image") || !j["image"].is_string()) {
    manifest_error(path, line_no, "missing or non-string \"image\" field");
  }
  if (!j.contains("box") || !j["box"].is_array() || j["box"].size() != 3) {
    manifest_error(path, line_no, "\"box\" must be [center_x, center_y, size]");
  }
  if (!j.contains("landmarks") || !j["landmarks"].is_object()) {
    manifest_error(path, line_no, "missing or non-object \"landmarks\" field");
  }

  ManifestRecord rec;
  const std::filesystem::path image(j["image"].get<std::string>());
  rec.image_path = image.is_absolute() ? image : path.parent_path() / image;
  try {
    rec.face_box = Region{j["box"][0].get<double>(), j["box"][1].get<double>(),
                          j["box"][2].get<double>()};
  } catch (const nlohmann::json::exception&) {
    manifest_error(path, line_no, "\"box\" entries must be numbers");
  }
  if (!(rec.face_box.size > 0.0)) {
    manifest_error(path, line_no, "box size must be positive");
  }
  for (const auto& [label, coords] : j["landmarks"].items()) {
    if (!coords.is_array() || coords.size() != 2) {
      manifest_error(path, line_no, "landmark \"" + label + "\" must be [x, y]");
    }
    try {
      rec.landmarks.push_back({label, Vec2{coords[0].get<double>(), coords[1].get<double>()}});
    } catch (const nlohmann::json::exception&) {
      manifest_error(path, line_no, "landmark \"" + label + "\" coordinates must be numbers");
    }
  }
  return rec;
}

}  // namespace

std::vector<ManifestRecord> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("manifest: cannot open " + path.string());
  }
  std::vector<ManifestRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      manifest_error(path, line_no, std::string("malformed JSON (") + e.what() + ")");
    }
    records.push_back(parse_record(j, path, line_no));
  }
  return records;
}

std::vector<GrayImage> load_images(std::span<const ManifestRecord> records) {
  std::vector<GrayImage> images;
  images.reserve(records.size());
  for (const ManifestRecord& rec : records) {
    images.push_back(load_pgm(rec.image_path));
  }
  return images;
}

GrayImage mirror_horizontal(const GrayImage& img) {
  GrayImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      out.at(img.width() - 1 - x, y) = img.at(x, y);
    }
  }
  return out;
}

SymmetryTable::SymmetryTable(std::initializer_list<std::pair<std::string, std::string>> pairs) {
  for (const auto& [a, b] : pairs) {
    add(a, b);
  }
}

void SymmetryTable::add(const std::string& a, const std::string& b) {
  map_[a] = b;
  map_[b] = a;
}

const std::string& SymmetryTable::mirrored(const std::string& label) const {
  const auto it = map_.find(label);
  return it == map_.end() ? label : it->second;
}

AugmentedSamples augment(std::span<const ManifestRecord> records,
                         std::span<const GrayImage> images, const std::string& landmark_label,
                         const AugmentationConfig& cfg, const SymmetryTable& symmetry) {
  if (records.size() != images.size()) {
    throw std::invalid_argument("augment: records and images differ in length");
  }
  if (cfg.copies_per_image < 1) {
    throw std::invalid_argument("augment: copies_per_image must be at least 1");
  }
  if (cfg.center_jitter < 0.0) {
    throw std::invalid_argument("augment: center_jitter must be non-negative");
  }
  if (!(cfg.scale_low > 0.0) || cfg.scale_low > cfg.scale_high) {
    throw std::invalid_argument("augment: need 0 < scale_low <= scale_high");
  }

  const std::string& mirror_label = symmetry.mirrored(landmark_label);

  AugmentedSamples out;
  // Built in full before any sample takes a pointer into it.
  if (cfg.mirror) {
    out.mirrored_images.reserve(records.size());
    for (const GrayImage& img : images) {
      out.mirrored_images.push_back(mirror_horizontal(img));
    }
  }
  out.samples.reserve(records.size() * static_cast<std::size_t>(cfg.copies_per_image) *
                      (cfg.mirror ? 2 : 1));

  const Rng base_rng(cfg.seed);
  for (std::size_t r = 0; r < records.size(); ++r) {
    const ManifestRecord& rec = records[r];
    const auto landmark = rec.find_landmark(landmark_label);
    if (!landmark) {
      throw std::runtime_error("augment: record " + std::to_string(r) + " (" +
                               rec.image_path.string() + ") has no landmark \"" +
                               landmark_label + "\"");
    }
    std::optional<Vec2> mirror_source;
    if (cfg.mirror) {
      mirror_source = rec.find_landmark(mirror_label);
      if (!mirror_source) {
        throw std::runtime_error("augment: record " + std::to_string(r) + " (" +
                                 rec.image_path.string() + ") has no landmark \"" +
                                 mirror_label + "\" needed for mirroring");
      }
    }

    const double width = static_cast<double>(images[r].width());
    Rng rng = base_rng.derive(r);
    for (int copy = 0; copy < cfg.copies_per_image; ++copy) {
      const double dx = rng.uniform(-cfg.center_jitter, cfg.center_jitter) * rec.face_box.size;
      const double dy = rng.uniform(-cfg.center_jitter, cfg.center_jitter) * rec.face_box.size;
      const double scale = rng.uniform(cfg.scale_low, cfg.scale_high);
      const Region region{rec.face_box.center_x + dx, rec.face_box.center_y + dy,
                          rec.face_box.size * scale};
      out.samples.push_back(
          TrainSample{&images[r], region, to_normalized(region, *landmark)});

      if (cfg.mirror) {
        const Region mirrored_region{width - 1.0 - region.center_x, region.center_y,
                                     region.size};
        const Vec2 mirrored_px{width - 1.0 - mirror_source->x, mirror_source->y};
        out.samples.push_back(TrainSample{&out.mirrored_images[r], mirrored_region,
                                          to_normalized(mirrored_region, mirrored_px)});
      }
    }
  }
  return out;
}

}  // namespace lmk
