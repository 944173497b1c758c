// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace mpd::corruption {

/// The 30 corruption scenarios, in table order (index 0 is row 01).
enum class CorruptionKind : std::uint8_t {
  kGaussianFilter,
  kLensBlur,
  kMotionBlur,
  kColorDiffusion,
  kColorShift,
  kColorQuantization,
  kHsvSaturation,
  kLabSaturation,
  kJp2kCompression,
  kJpegCompression,
  kWebpCompression,
  kWhiteNoise,
  kColorNoise,
  kImpulseNoise,
  kMultiplicativeNoise,
  kGaussianDenoise,
  kCnnDenoise,
  kMaxBrighten,
  kMinDarken,
  kMeanBrighten,
  kMeanDarken,
  kClockJittering,
  kBlockExchange,
  kBlockLost,
  kBlockInterpolation,
  kBlockRepeat,
  kResolutionLimit,
  kGrayscaleQuantization,
  kSharpnessChange,
  kContrastChange,
};

inline constexpr int kNumKinds = 30;
inline constexpr int kNumLevels = 5;

enum class Category : std::uint8_t {
  kBlur,
  kLuminance,
  kChrominance,
  kContrast,
  kNoise,
  kCompression,
  kSpatial,
};

const std::array<CorruptionKind, kNumKinds>& all_kinds();

/// Stable name used in config files and manifests, e.g. "GaussianFilter".
std::string_view kind_name(CorruptionKind kind);
std::optional<CorruptionKind> parse_kind(std::string_view name);
/// 1-based table row number.
inline int kind_row(CorruptionKind kind) { return static_cast<int>(kind) + 1; }

Category category_of(CorruptionKind kind);
std::string_view category_name(Category c);

/// Kinds whose output depends on CorruptionSpec::seed beyond block placement.
bool is_stochastic(CorruptionKind kind);

}  // namespace mpd::corruption
