// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/imgcore/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "mpd/common/rng.hpp"

namespace mpd::imgcore {

ImageBuf synthetic_image(std::uint64_t index, int width, int height) {
  Rng rng(splitmix64(index + 0x5eedULL));
  ImageBuf img(width, height, 3);

  double base[3], grad_x[3], grad_y[3];
  for (int c = 0; c < 3; ++c) {
    base[c] = rng.uniform(40, 200);
    grad_x[c] = rng.uniform(-80, 80);
    grad_y[c] = rng.uniform(-80, 80);
  }
  const double freq = rng.uniform(2, 10) * 2 * std::numbers::pi;
  const double angle = rng.uniform(0, std::numbers::pi);
  const double amp = rng.uniform(10, 35);

  struct Disk {
    double cx, cy, r;
    double color[3];
  };
  Disk disks[4];
  for (auto& d : disks) {
    d.cx = rng.uniform(0, 1);
    d.cy = rng.uniform(0, 1);
    d.r = rng.uniform(0.06, 0.25);
    for (double& c : d.color) c = rng.uniform(0, 255);
  }
  const double rect[4] = {rng.uniform(0, 0.5), rng.uniform(0, 0.5), rng.uniform(0.5, 1),
                          rng.uniform(0.5, 1)};
  double rect_color[3];
  for (double& c : rect_color) c = rng.uniform(0, 255);

  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double u = (x + 0.5) / width;
      const double v = (y + 0.5) / height;
      const double wave = amp * std::sin(freq * (u * std::cos(angle) + v * std::sin(angle)));
      double px[3];
      for (int c = 0; c < 3; ++c) px[c] = base[c] + grad_x[c] * (u - 0.5) + grad_y[c] * (v - 0.5) + wave;
      if (u > rect[0] && u < rect[2] && v > rect[1] && v < rect[3] && (x / 8 + y / 8) % 2 == 0) {
        for (int c = 0; c < 3; ++c) px[c] = 0.5 * px[c] + 0.5 * rect_color[c];
      }
      for (const auto& d : disks) {
        if ((u - d.cx) * (u - d.cx) + (v - d.cy) * (v - d.cy) < d.r * d.r) {
          for (int c = 0; c < 3; ++c) px[c] = d.color[c];
        }
      }
      const double grain = rng.normal(0.0, 4.0);
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = quantize(px[c] + grain);
    }
  }
  return img;
}

}  // namespace mpd::imgcore
