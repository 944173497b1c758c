// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

// Serial implementations of the OpenMP kernels. They perform the same
// arithmetic in the same order, so results are bit-identical; tests and the
// benchmark compare against them.

#pragma once

#include "mpd/imgcore/image.hpp"

namespace mpd::imgcore::reference {

FloatPlane convert(const FloatPlane& plane, ColorSpace target);
FloatPlane convolve(const FloatPlane& img, const Kernel2D& k);
FloatPlane bilateral(const FloatPlane& img, double sigma_spatial, double sigma_range);
FloatPlane resize_bilinear(const FloatPlane& img, int new_w, int new_h);

}  // namespace mpd::imgcore::reference
