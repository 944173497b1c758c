// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/stats/features.hpp"

#include <cmath>

#include "mpd/imgcore/color.hpp"
#include "mpd/imgcore/filter.hpp"

namespace mpd::stats {

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

Moments moments(std::span<const double> v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  for (double x : v) m.var += (x - m.mean) * (x - m.mean);
  m.var /= static_cast<double>(v.size());
  return m;
}

}  // namespace

FeatureProfile features(const imgcore::ImageBuf& img) {
  const imgcore::FloatPlane gray = imgcore::convert(img, imgcore::ColorSpace::kGray);
  FeatureProfile f;
  const Moments g = moments(gray.data());
  f.luminance = g.mean;
  f.contrast = std::sqrt(g.var);
  f.blur = moments(imgcore::laplacian(gray).data()).var;
  f.spatial_information = std::sqrt(moments(imgcore::sobel_magnitude(gray).data()).var);
  if (img.channels() == 3) {
    const imgcore::FloatPlane lab = imgcore::convert(img, imgcore::ColorSpace::kLab);
    double chroma = 0;
    for (int y = 0; y < lab.height(); ++y)
      for (int x = 0; x < lab.width(); ++x) chroma += std::hypot(lab.at(x, y, 1), lab.at(x, y, 2));
    f.chrominance = chroma / (static_cast<double>(lab.width()) * lab.height());
  }
  return f;
}

}  // namespace mpd::stats
