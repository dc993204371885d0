#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "lmk/cascade.hpp"

namespace lmk {

enum class ModelIoErrorKind {
  BadMagic,
  UnsupportedVersion,
  Truncated,
  SizeMismatch,
  FieldOverflow,
  Malformed,
};

class ModelIoError : public std::runtime_error {
 public:
  ModelIoError(ModelIoErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ModelIoErrorKind kind() const noexcept { return kind_; }

 private:
  ModelIoErrorKind kind_;
};

/// "LMK1" model container, version 1. Little-endian throughout, no padding:
///   magic "LMK1" | u16 version | u16 label length + label bytes |
///   f32 scale_decay | u16 stage count | per stage:
///     f32 shrinkage | 2xf32 base | u16 tree count | u8 depth |
///     per tree: (2^depth - 1) tests x 4 signed bytes (l1.u, l1.v, l2.u,
///     l2.v, fixed point /127), then 2^depth leaves x 2xf32.
/// A stage with zero trees stores depth 0. See docs/model-format.md.
inline constexpr std::uint16_t kModelFormatVersion = 1;

/// Exact encoded byte count, from counts alone.
std::size_t encoded_size(const CascadeModel& model);

/// Deterministic, byte-for-byte reproducible encoding. Counts that do not
/// fit their field width (stages, trees, label length, depth) are rejected.
std::vector<std::uint8_t> encode_model(const CascadeModel& model);

/// Exact inverse of encode_model. Validates magic, version, and that the
/// declared counts consume the byte sequence exactly.
CascadeModel decode_model(std::span<const std::uint8_t> bytes);

void write_model_file(const std::filesystem::path& path, const CascadeModel& model);
CascadeModel read_model_file(const std::filesystem::path& path);

}  // namespace lmk
