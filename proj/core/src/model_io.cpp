#include "lmk/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

namespace lmk {

namespace {

constexpr char kMagic[4] = {'L', 'M', 'K', '1'};
constexpr int kMaxDepth = 32;  // reader resource guard; format allows u8

std::size_t tree_bytes(int depth) {
  const std::size_t leaves = std::size_t{1} << depth;
  return (leaves - 1) * 4 + leaves * 8;
}

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.push_back(v); }
  void i8(std::int8_t v) { out_.push_back(static_cast<std::uint8_t>(v)); }
  void u16(std::uint16_t v) {
    out_.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
  }
  void f32(float v) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    out_.push_back(static_cast<std::uint8_t>(bits & 0xFF));
    out_.push_back(static_cast<std::uint8_t>((bits >> 8) & 0xFF));
    out_.push_back(static_cast<std::uint8_t>((bits >> 16) & 0xFF));
    out_.push_back(static_cast<std::uint8_t>((bits >> 24) & 0xFF));
  }
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    out_.insert(out_.end(), p, p + n);
  }

 private:
  std::vector<std::uint8_t>& out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() {
    require(1);
    return bytes_[pos_++];
  }
  std::int8_t i8() { return static_cast<std::int8_t>(u8()); }
  std::uint16_t u16() {
    require(2);
    const std::uint16_t v =
        static_cast<std::uint16_t>(bytes_[pos_]) |
        static_cast<std::uint16_t>(static_cast<std::uint16_t>(bytes_[pos_ + 1]) << 8);
    pos_ += 2;
    return v;
  }
  float f32() {
    require(4);
    std::uint32_t bits = 0;
    bits |= static_cast<std::uint32_t>(bytes_[pos_]);
    bits |= static_cast<std::uint32_t>(bytes_[pos_ + 1]) << 8;
    bits |= static_cast<std::uint32_t>(bytes_[pos_ + 2]) << 16;
    bits |= static_cast<std::uint32_t>(bytes_[pos_ + 3]) << 24;
    pos_ += 4;
    return std::bit_cast<float>(bits);
  }
  std::string string(std::size_t n) {
    require(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

  void require(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw ModelIoError(ModelIoErrorKind::Truncated, "model file is truncated");
    }
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

int stage_depth(const BoostedEnsemble& stage) {
  if (stage.trees.empty()) {
    return 0;
  }
  const int depth = stage.trees.front().depth;
  for (const RegressionTree& tree : stage.trees) {
    if (tree.depth != depth) {
      throw ModelIoError(ModelIoErrorKind::Malformed,
                         "all trees in a stage must share one depth");
    }
  }
  if (depth < 1 || depth > kMaxDepth) {
    throw ModelIoError(ModelIoErrorKind::Malformed,
                       "tree depth out of range: " + std::to_string(depth));
  }
  return depth;
}

void check_tree_shape(const RegressionTree& tree) {
  const std::size_t leaves = std::size_t{1} << tree.depth;
  if (tree.tests.size() != leaves - 1 || tree.leaves.size() != leaves) {
    throw ModelIoError(ModelIoErrorKind::Malformed,
                       "tree arrays do not match its depth");
  }
}

}  // namespace

std::size_t encoded_size(const CascadeModel& model) {
  std::size_t total = 4 + 2 + 2 + model.landmark.size() + 4 + 2;
  for (const BoostedEnsemble& stage : model.stages) {
    total += 4 + 8 + 2 + 1;
    const int depth = stage_depth(stage);
    if (depth > 0) {
      total += stage.trees.size() * tree_bytes(depth);
    }
  }
  return total;
}

std::vector<std::uint8_t> encode_model(const CascadeModel& model) {
  if (model.landmark.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw ModelIoError(ModelIoErrorKind::FieldOverflow, "landmark label longer than 65535 bytes");
  }
  if (model.stages.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw ModelIoError(ModelIoErrorKind::FieldOverflow, "more than 65535 stages");
  }

  std::vector<std::uint8_t> out;
  out.reserve(encoded_size(model));
  Writer w(out);

  w.bytes(kMagic, 4);
  w.u16(kModelFormatVersion);
  w.u16(static_cast<std::uint16_t>(model.landmark.size()));
  w.bytes(model.landmark.data(), model.landmark.size());
  w.f32(model.scale_decay);
  w.u16(static_cast<std::uint16_t>(model.stages.size()));

  for (const BoostedEnsemble& stage : model.stages) {
    if (stage.trees.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw ModelIoError(ModelIoErrorKind::FieldOverflow, "more than 65535 trees in a stage");
    }
    const int depth = stage_depth(stage);
    w.f32(stage.shrinkage);
    w.f32(stage.base.x);
    w.f32(stage.base.y);
    w.u16(static_cast<std::uint16_t>(stage.trees.size()));
    w.u8(static_cast<std::uint8_t>(depth));
    for (const RegressionTree& tree : stage.trees) {
      check_tree_shape(tree);
      for (const BinaryTestParams& t : tree.tests) {
        w.i8(t.u1);
        w.i8(t.v1);
        w.i8(t.u2);
        w.i8(t.v2);
      }
      for (const Vec2f& leaf : tree.leaves) {
        w.f32(leaf.x);
        w.f32(leaf.y);
      }
    }
  }
  return out;
}

CascadeModel decode_model(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);

  r.require(4);
  const std::string magic = r.string(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    throw ModelIoError(ModelIoErrorKind::BadMagic, "bad magic, not an LMK1 model file");
  }
  const std::uint16_t version = r.u16();
  if (version != kModelFormatVersion) {
    throw ModelIoError(ModelIoErrorKind::UnsupportedVersion,
                       "unsupported model format version " + std::to_string(version));
  }

  CascadeModel model;
  const std::uint16_t label_len = r.u16();
  model.landmark = r.string(label_len);
  model.scale_decay = r.f32();
  const std::uint16_t n_stages = r.u16();
  model.stages.reserve(n_stages);

  for (std::uint16_t s = 0; s < n_stages; ++s) {
    BoostedEnsemble stage;
    stage.shrinkage = r.f32();
    stage.base.x = r.f32();
    stage.base.y = r.f32();
    const std::uint16_t n_trees = r.u16();
    const int depth = r.u8();
    if (n_trees > 0 && (depth < 1 || depth > kMaxDepth)) {
      throw ModelIoError(ModelIoErrorKind::Malformed,
                         "tree depth out of range: " + std::to_string(depth));
    }
    stage.trees.reserve(n_trees);
    for (std::uint16_t t = 0; t < n_trees; ++t) {
      RegressionTree tree;
      tree.depth = depth;
      const std::size_t leaves = std::size_t{1} << depth;
      tree.tests.resize(leaves - 1);
      tree.leaves.resize(leaves);
      for (BinaryTestParams& test : tree.tests) {
        test.u1 = r.i8();
        test.v1 = r.i8();
        test.u2 = r.i8();
        test.v2 = r.i8();
      }
      for (Vec2f& leaf : tree.leaves) {
        leaf.x = r.f32();
        leaf.y = r.f32();
      }
      stage.trees.push_back(std::move(tree));
    }
    model.stages.push_back(std::move(stage));
  }

  if (r.remaining() != 0) {
    throw ModelIoError(ModelIoErrorKind::SizeMismatch,
                       std::to_string(r.remaining()) + " trailing bytes after model data");
  }
  return model;
}

void write_model_file(const std::filesystem::path& path, const CascadeModel& model) {
  const std::vector<std::uint8_t> bytes = encode_model(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("model: cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw std::runtime_error("model: write failed for " + path.string());
  }
}

CascadeModel read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("model: cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_model(bytes);
}

}  // namespace lmk
