// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mpd/imgcore/image.hpp"

namespace mpd::stats {

/// Low-level descriptors of one image. Gray is BT.601 luma on the 0..255
/// scale.
struct FeatureProfile {
  double luminance = 0.0;    // mean gray
  double contrast = 0.0;     // std-dev of gray
  double chrominance = 0.0;  // mean Lab chroma sqrt(a*^2 + b*^2)
  /// Variance of the 4-neighbour Laplacian of gray. Larger means sharper,
  /// so blur moves it down.
  double blur = 0.0;
  double spatial_information = 0.0;  // std-dev of Sobel gradient magnitude
};

FeatureProfile features(const imgcore::ImageBuf& img);

}  // namespace mpd::stats
