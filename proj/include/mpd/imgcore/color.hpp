// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mpd/imgcore/image.hpp"

namespace mpd::imgcore {

/// Converts an 8-bit image into a floating plane in `target` space.
/// Chromatic targets (Lab, HSV, YCbCr) need a 3-channel source and throw
/// InvalidInput otherwise. Gray from 3 channels uses BT.601 luma weights.
FloatPlane convert(const ImageBuf& img, ColorSpace target);

/// Converts between any two spaces (through sRGB when neither side is sRGB).
FloatPlane convert(const FloatPlane& plane, ColorSpace target);

/// Converts back to sRGB (or keeps Gray) and quantizes to 8 bits.
ImageBuf render(const FloatPlane& plane);

}  // namespace mpd::imgcore
