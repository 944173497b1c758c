// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/imgcore/resize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpd/common/error.hpp"
#include "mpd/imgcore/reference.hpp"

namespace mpd::imgcore {
namespace {

void check_target(int new_w, int new_h) {
  if (new_w <= 0 || new_h <= 0) {
    throw InvalidInput("resize target must be positive, got " + std::to_string(new_w) + "x" +
                       std::to_string(new_h));
  }
}

template <bool Parallel>
FloatPlane bilinear_impl(const FloatPlane& src, int new_w, int new_h) {
  check_target(new_w, new_h);
  const double sx = static_cast<double>(src.width()) / new_w;
  const double sy = static_cast<double>(src.height()) / new_h;
  FloatPlane out(new_w, new_h, src.channels(), src.space());
#pragma omp parallel for schedule(static) if (Parallel)
  for (int y = 0; y < new_h; ++y) {
    const double fy = (y + 0.5) * sy - 0.5;
    for (int x = 0; x < new_w; ++x) {
      const double fx = (x + 0.5) * sx - 0.5;
      for (int c = 0; c < src.channels(); ++c) out.at(x, y, c) = sample_bilinear(src, fx, fy, c);
    }
  }
  return out;
}

int nearest_index(int dst, int src_len, int dst_len) {
  const long long v = (2LL * dst + 1) * src_len / (2LL * dst_len);
  return static_cast<int>(std::min<long long>(v, src_len - 1));
}

}  // namespace

double sample_bilinear(const FloatPlane& img, double x, double y, int c) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double ax = x - x0;
  const double ay = y - y0;
  const double top = (1.0 - ax) * img.clamped(x0, y0, c) + ax * img.clamped(x0 + 1, y0, c);
  const double bot =
      (1.0 - ax) * img.clamped(x0, y0 + 1, c) + ax * img.clamped(x0 + 1, y0 + 1, c);
  return (1.0 - ay) * top + ay * bot;
}

FloatPlane resize(const FloatPlane& img, int new_w, int new_h, ResizeMethod method) {
  check_target(new_w, new_h);
  if (method == ResizeMethod::kBilinear) return bilinear_impl<true>(img, new_w, new_h);
  FloatPlane out(new_w, new_h, img.channels(), img.space());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < new_h; ++y) {
    const int sy = nearest_index(y, img.height(), new_h);
    for (int x = 0; x < new_w; ++x) {
      const int sx = nearest_index(x, img.width(), new_w);
      for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = img.at(sx, sy, c);
    }
  }
  return out;
}

ImageBuf resize(const ImageBuf& img, int new_w, int new_h, ResizeMethod method) {
  check_target(new_w, new_h);
  if (method == ResizeMethod::kNearest) {
    ImageBuf out(new_w, new_h, img.channels());
    for (int y = 0; y < new_h; ++y) {
      const int sy = nearest_index(y, img.height(), new_h);
      for (int x = 0; x < new_w; ++x) {
        const int sx = nearest_index(x, img.width(), new_w);
        for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = img.at(sx, sy, c);
      }
    }
    return out;
  }
  return to_image(resize(to_float(img), new_w, new_h, method));
}

namespace reference {

FloatPlane resize_bilinear(const FloatPlane& img, int new_w, int new_h) {
  return bilinear_impl<false>(img, new_w, new_h);
}

}  // namespace reference
}  // namespace mpd::imgcore
