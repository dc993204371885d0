#include "lmk/image.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

namespace lmk {

GrayImage::GrayImage(int width, int height, std::uint8_t fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("GrayImage: dimensions must be at least 1x1");
  }
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("GrayImage: dimensions must be at least 1x1");
  }
  if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("GrayImage: data length must equal width * height");
  }
}

namespace {

// Skips PGM whitespace and '#' comment lines, then reads one unsigned value.
int read_header_value(std::istream& in, const std::string& what) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      in.get();
    } else {
      break;
    }
  }
  int value = -1;
  in >> value;
  if (!in || value < 0) {
    throw std::runtime_error("PGM: missing or invalid " + what);
  }
  return value;
}

}  // namespace

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("PGM: cannot open " + path.string());
  }
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5') {
    throw std::runtime_error("PGM: " + path.string() +
                             " is not binary PGM (expected magic 'P5')");
  }
  const int width = read_header_value(in, "width");
  const int height = read_header_value(in, "height");
  const int maxval = read_header_value(in, "maxval");
  if (width < 1 || height < 1) {
    throw std::runtime_error("PGM: " + path.string() + " has non-positive dimensions");
  }
  if (maxval != 255) {
    throw std::runtime_error("PGM: " + path.string() +
                             " has maxval " + std::to_string(maxval) + ", only 255 is supported");
  }
  in.get();  // single whitespace byte before the raster
  std::vector<std::uint8_t> data(static_cast<std::size_t>(width) *
                                 static_cast<std::size_t>(height));
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (static_cast<std::size_t>(in.gcount()) != data.size()) {
    throw std::runtime_error("PGM: " + path.string() + " is truncated");
  }
  return GrayImage(width, height, std::move(data));
}

void save_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("PGM: cannot write " + path.string());
  }
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels().data()),
            static_cast<std::streamsize>(img.pixels().size()));
  if (!out) {
    throw std::runtime_error("PGM: write failed for " + path.string());
  }
}

}  // namespace lmk
