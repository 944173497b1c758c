// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "mpd/imgcore/image.hpp"

namespace mpd::imgcore {

/// Procedural sRGB test image: gradients, sinusoidal texture, hard-edged
/// shapes and fine noise, all driven by `index`. Same index and size give
/// the same pixels.
ImageBuf synthetic_image(std::uint64_t index, int width, int height);

}  // namespace mpd::imgcore
