// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mpd/imgcore/image.hpp"

namespace mpd::imgcore {

/// Correlates every channel with `k` using replicate edges. Separable
/// kernels run as a horizontal then a vertical pass.
FloatPlane convolve(const FloatPlane& img, const Kernel2D& k);

/// Edge-preserving smoothing; range weights use the per-pixel Euclidean
/// distance across channels.
FloatPlane bilateral(const FloatPlane& img, double sigma_spatial, double sigma_range);

/// 4-neighbour Laplacian of a single-channel plane.
FloatPlane laplacian(const FloatPlane& gray);

/// Sobel gradient magnitude of a single-channel plane.
FloatPlane sobel_magnitude(const FloatPlane& gray);

}  // namespace mpd::imgcore
