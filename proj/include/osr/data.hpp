#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "osr/activation_set.hpp"

namespace osr {

// --- OSAV v1 ------------------------------------------------------------------
//
// Little-endian, no padding:
//   "OSAV"  u8 version=1  u8 reserved=0  u32 N  u32 K
//   N*K float32 activations (row-major)
//   N   int32 labels (-1 = unknown)

inline constexpr std::uint8_t kOsavVersion = 1;
inline constexpr std::size_t kOsavHeaderSize = 14;

[[nodiscard]] std::vector<std::uint8_t> encode_osav(const ActivationSet& set);

/// Throws kBadMagic, kUnsupportedVersion, kTruncatedFile, kNonFiniteValue or
/// kLabelOutOfRange (labels below -1).
[[nodiscard]] ActivationSet decode_osav(std::span<const std::uint8_t> bytes);

[[nodiscard]] ActivationSet read_activations(const std::filesystem::path& path);
void write_activations(const ActivationSet& set, const std::filesystem::path& path);

// --- open-set split ---------------------------------------------------------

struct OpenSplit {
  std::size_t num_total_classes = 0;
  /// Ascending original ids; position is the relabelled class index.
  std::vector<std::int32_t> known_classes;
  std::vector<std::int32_t> unknown_classes;
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t num_known() const noexcept { return known_classes.size(); }
  [[nodiscard]] std::map<std::int32_t, std::int32_t> relabel_map() const;
  /// Known id -> [0, K), unknown id -> -1. Throws kUnknownLabel otherwise.
  [[nodiscard]] std::int32_t relabel(std::int32_t original) const;
};

/// Samples num_known of num_total_classes ids without replacement (partial
/// Fisher-Yates driven by SplitMix64(seed)). Throws kInvalidSplit unless
/// 2 <= num_known < num_total_classes.
[[nodiscard]] OpenSplit make_open_split(std::size_t num_total_classes, std::size_t num_known,
                                        std::uint64_t seed);

/// Relabels rows (known -> [0, K), unknown -> -1). Activations are untouched.
[[nodiscard]] ActivationSet apply_split(const ActivationSet& set, const OpenSplit& split);

// --- synthetic activations ---------------------------------------------------

struct SyntheticSpec {
  std::size_t num_known = 6;
  /// Must equal num_known.
  std::size_t dim = 6;
  std::size_t samples_per_class = 500;
  double class_separation = 10.0;
  double noise_sigma = 1.0;
  /// Number of unknown clusters in the test set.
  std::size_t unknown_count = 4;
  double unknown_offset = 15.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticData {
  ActivationSet train;
  ActivationSet test;
  OpenSplit split;
};

/// Gaussian clusters in activation space. Known class j (column j) is centred
/// at class_separation * e_j; each unknown cluster is centred at the centroid
/// of the class centres plus unknown_offset along a random unit direction.
/// Labels are original ids drawn from make_open_split(K + U, K, seed).
///
/// Draw order from SplitMix64(seed + 1): unknown directions (dim gaussians
/// each), train rows class by class, test rows class by class, then unknown
/// test rows cluster by cluster.
[[nodiscard]] SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace osr
