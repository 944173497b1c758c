// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/corruption/kind.hpp"

namespace mpd::corruption {
namespace {

struct KindInfo {
  std::string_view name;
  Category category;
  bool stochastic;
};

constexpr std::array<KindInfo, kNumKinds> kInfo{{
    {"GaussianFilter", Category::kBlur, false},
    {"LensBlur", Category::kBlur, false},
    {"MotionBlur", Category::kBlur, false},
    {"ColorDiffusion", Category::kChrominance, false},
    {"ColorShift", Category::kChrominance, true},
    {"ColorQuantization", Category::kChrominance, false},
    {"HsvSaturation", Category::kContrast, false},
    {"LabSaturation", Category::kContrast, false},
    {"Jp2kCompression", Category::kCompression, false},
    {"JpegCompression", Category::kCompression, false},
    {"WebpCompression", Category::kCompression, false},
    {"WhiteNoise", Category::kNoise, true},
    {"ColorNoise", Category::kNoise, true},
    {"ImpulseNoise", Category::kNoise, true},
    {"MultiplicativeNoise", Category::kNoise, true},
    {"GaussianDenoise", Category::kNoise, true},
    {"CnnDenoise", Category::kNoise, true},
    {"MaxBrighten", Category::kLuminance, false},
    {"MinDarken", Category::kLuminance, false},
    {"MeanBrighten", Category::kLuminance, false},
    {"MeanDarken", Category::kLuminance, false},
    {"ClockJittering", Category::kSpatial, true},
    {"BlockExchange", Category::kSpatial, true},
    {"BlockLost", Category::kSpatial, true},
    {"BlockInterpolation", Category::kSpatial, false},
    {"BlockRepeat", Category::kSpatial, false},
    {"ResolutionLimit", Category::kBlur, false},
    {"GrayscaleQuantization", Category::kContrast, false},
    {"SharpnessChange", Category::kContrast, false},
    {"ContrastChange", Category::kContrast, false},
}};

constexpr std::array<CorruptionKind, kNumKinds> make_all() {
  std::array<CorruptionKind, kNumKinds> a{};
  for (int i = 0; i < kNumKinds; ++i) a[i] = static_cast<CorruptionKind>(i);
  return a;
}

constexpr auto kAll = make_all();

}  // namespace

const std::array<CorruptionKind, kNumKinds>& all_kinds() { return kAll; }

std::string_view kind_name(CorruptionKind kind) { return kInfo[static_cast<int>(kind)].name; }

std::optional<CorruptionKind> parse_kind(std::string_view name) {
  for (int i = 0; i < kNumKinds; ++i) {
    if (kInfo[i].name == name) return static_cast<CorruptionKind>(i);
  }
  return std::nullopt;
}

Category category_of(CorruptionKind kind) { return kInfo[static_cast<int>(kind)].category; }

std::string_view category_name(Category c) {
  switch (c) {
    case Category::kBlur: return "Blur";
    case Category::kLuminance: return "Luminance";
    case Category::kChrominance: return "Chrominance";
    case Category::kContrast: return "Contrast";
    case Category::kNoise: return "Noise";
    case Category::kCompression: return "Compression";
    case Category::kSpatial: return "Spatial";
  }
  return "?";
}

bool is_stochastic(CorruptionKind kind) { return kInfo[static_cast<int>(kind)].stochastic; }

}  // namespace mpd::corruption
