#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ftdetect/network.hpp"
#include "ftdetect/vocabulary.hpp"

namespace ftdetect {

/// Everything needed to classify a file: parameters (with architecture and
/// label map), the training configuration that produced them, and the
/// vocabulary that defines the input layout.
struct ModelArtifact {
  ModelParameters params;
  TrainConfig train_config;
  Vocabulary vocabulary;

  bool operator==(const ModelArtifact&) const = default;
};

inline constexpr std::uint32_t kModelFormatVersion = 1;

/// Binary container, all integers and reals little-endian:
///
///   "FTDMODEL" u32 version
///   architecture   u64 input, u64 #hidden, u64 widths..., u64 output,
///                  f64 dropout, u8 activation
///   train config   f64 lr, u64 epochs, u64 batch, u64 seed, f64 b1, b2, eps
///   labels         u64 n, n x (u64 length, bytes)
///   vocab digest   u64 length, bytes
///   vocabulary     u64 length, serialized vocabulary text
///   layers         per layer: u64 fan_in, u64 fan_out,
///                  f64 weights (row-major), f64 bias
///   trailer        SHA-256 of all preceding bytes
std::string serialize_model(const ModelArtifact& model);

/// Verifies magic, version, checksum, vocabulary digest and shapes. Throws
/// ModelError on any mismatch.
ModelArtifact parse_model(std::string_view bytes);

void save_model(const std::filesystem::path& path, const ModelArtifact& model);
ModelArtifact load_model(const std::filesystem::path& path);

}  // namespace ftdetect
