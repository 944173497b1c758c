// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mpd/imgcore/image.hpp"

namespace mpd::imgcore {

enum class ResizeMethod { kBilinear, kNearest };

/// Pixel-center aligned resampling. Throws InvalidInput for zero/negative
/// target dimensions. Nearest at identity scale is bit-identical.
ImageBuf resize(const ImageBuf& img, int new_w, int new_h, ResizeMethod method);
FloatPlane resize(const FloatPlane& img, int new_w, int new_h, ResizeMethod method);

/// Bilinear sample with replicate edges at fractional coordinates.
double sample_bilinear(const FloatPlane& img, double x, double y, int c);

}  // namespace mpd::imgcore
