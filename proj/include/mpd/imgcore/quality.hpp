// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "mpd/imgcore/image.hpp"

namespace mpd::imgcore {

/// Mean squared error over all samples. Throws InvalidInput on shape mismatch.
double mse(const ImageBuf& a, const ImageBuf& b);

/// 10*log10(255^2 / MSE); +infinity when the images are identical.
double psnr(const ImageBuf& a, const ImageBuf& b);

}  // namespace mpd::imgcore
