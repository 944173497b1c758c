// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/imgcore/quality.hpp"

#include <cmath>
#include <limits>

#include "mpd/common/error.hpp"

namespace mpd::imgcore {

double mse(const ImageBuf& a, const ImageBuf& b) {
  if (!a.same_shape(b)) throw InvalidInput("psnr: image shapes differ");
  auto da = a.data();
  auto db = b.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = static_cast<double>(da[i]) - static_cast<double>(db[i]);
    acc += d * d;
  }
  return acc / static_cast<double>(da.size());
}

double psnr(const ImageBuf& a, const ImageBuf& b) {
  const double e = mse(a, b);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / e);
}

}  // namespace mpd::imgcore
