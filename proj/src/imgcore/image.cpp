// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/imgcore/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mpd/common/error.hpp"

namespace mpd::imgcore {

std::string_view to_string(ColorSpace space) {
  switch (space) {
    case ColorSpace::kSRGB: return "sRGB";
    case ColorSpace::kGray: return "Gray";
    case ColorSpace::kLab: return "Lab";
    case ColorSpace::kHSV: return "HSV";
    case ColorSpace::kYCbCr: return "YCbCr";
  }
  return "?";
}

namespace {

void check_dims(int width, int height, int channels) {
  if (width <= 0 || height <= 0) {
    throw InvalidInput("image dimensions must be positive, got " + std::to_string(width) + "x" +
                       std::to_string(height));
  }
  if (channels != 1 && channels != 3) {
    throw InvalidInput("image must have 1 or 3 channels, got " + std::to_string(channels));
  }
}

}  // namespace

ImageBuf::ImageBuf(int width, int height, int channels)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height, channels);
  data_.assign(static_cast<std::size_t>(width) * height * channels, 0);
}

ImageBuf::ImageBuf(int width, int height, int channels, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_dims(width, height, channels);
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw InvalidInput("image data length does not match dimensions");
  }
}

FloatPlane::FloatPlane(int width, int height, int channels, ColorSpace space)
    : width_(width), height_(height), channels_(channels), space_(space) {
  if (width <= 0 || height <= 0 || channels <= 0) {
    throw InvalidInput("plane dimensions must be positive");
  }
  data_.assign(static_cast<std::size_t>(width) * height * channels, 0.0);
}

double FloatPlane::clamped(int x, int y, int c) const noexcept {
  x = std::clamp(x, 0, width_ - 1);
  y = std::clamp(y, 0, height_ - 1);
  return at(x, y, c);
}

Kernel2D Kernel2D::square(int side, std::vector<double> taps) {
  if (side <= 0 || side % 2 == 0) throw InvalidInput("kernel side must be odd and positive");
  if (taps.size() != static_cast<std::size_t>(side) * side) {
    throw InvalidInput("kernel tap count must be side*side");
  }
  return Kernel2D(side, false, std::move(taps));
}

Kernel2D Kernel2D::separable(std::vector<double> taps) {
  if (taps.empty() || taps.size() % 2 == 0) {
    throw InvalidInput("separable kernel length must be odd");
  }
  const int side = static_cast<int>(taps.size());
  return Kernel2D(side, true, std::move(taps));
}

double Kernel2D::sum() const noexcept {
  const double s = std::accumulate(taps_.begin(), taps_.end(), 0.0);
  return separable_ ? s * s : s;
}

void Kernel2D::normalize() {
  const double s = std::accumulate(taps_.begin(), taps_.end(), 0.0);
  for (double& t : taps_) t /= s;
}

Kernel2D Kernel2D::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("gaussian sigma must be positive");
  const int r = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> taps(2 * r + 1);
  for (int i = -r; i <= r; ++i) taps[i + r] = std::exp(-0.5 * i * i / (sigma * sigma));
  Kernel2D k(2 * r + 1, true, std::move(taps));
  k.normalize();
  return k;
}

Kernel2D Kernel2D::disk(double radius) {
  if (!(radius > 0.0)) throw InvalidInput("disk radius must be positive");
  const int r = static_cast<int>(std::ceil(radius));
  const int side = 2 * r + 1;
  std::vector<double> taps(static_cast<std::size_t>(side) * side);
  // 4x4 supersampling gives partial coverage at the rim.
  constexpr int kSub = 4;
  for (int y = -r; y <= r; ++y) {
    for (int x = -r; x <= r; ++x) {
      int inside = 0;
      for (int sy = 0; sy < kSub; ++sy) {
        for (int sx = 0; sx < kSub; ++sx) {
          const double px = x - 0.5 + (sx + 0.5) / kSub;
          const double py = y - 0.5 + (sy + 0.5) / kSub;
          if (px * px + py * py <= radius * radius) ++inside;
        }
      }
      taps[static_cast<std::size_t>(y + r) * side + (x + r)] =
          static_cast<double>(inside) / (kSub * kSub);
    }
  }
  Kernel2D k(side, false, std::move(taps));
  k.normalize();
  return k;
}

Kernel2D Kernel2D::line(double length, double angle_degrees) {
  if (!(length >= 1.0)) throw InvalidInput("line length must be >= 1");
  const int r = static_cast<int>(std::ceil(length / 2.0));
  const int side = 2 * r + 1;
  std::vector<double> taps(static_cast<std::size_t>(side) * side, 0.0);
  const double theta = angle_degrees * 3.14159265358979323846 / 180.0;
  const double dx = std::cos(theta);
  const double dy = -std::sin(theta);
  // Bilinear splat of densely spaced samples along the segment.
  const int samples = static_cast<int>(std::ceil(length * 8.0)) + 1;
  for (int i = 0; i < samples; ++i) {
    const double t = -length / 2.0 + length * i / (samples - 1);
    const double px = t * dx + r;
    const double py = t * dy + r;
    const int x0 = static_cast<int>(std::floor(px));
    const int y0 = static_cast<int>(std::floor(py));
    const double fx = px - x0;
    const double fy = py - y0;
    auto add = [&](int x, int y, double w) {
      if (x >= 0 && y >= 0 && x < side && y < side) {
        taps[static_cast<std::size_t>(y) * side + x] += w;
      }
    };
    add(x0, y0, (1 - fx) * (1 - fy));
    add(x0 + 1, y0, fx * (1 - fy));
    add(x0, y0 + 1, (1 - fx) * fy);
    add(x0 + 1, y0 + 1, fx * fy);
  }
  Kernel2D k(side, false, std::move(taps));
  k.normalize();
  return k;
}

Kernel2D Kernel2D::box(int side) {
  if (side <= 0 || side % 2 == 0) throw InvalidInput("box side must be odd and positive");
  return Kernel2D(side, true, std::vector<double>(side, 1.0 / side));
}

FloatPlane to_float(const ImageBuf& img) {
  FloatPlane out(img.width(), img.height(), img.channels(),
                 img.channels() == 3 ? ColorSpace::kSRGB : ColorSpace::kGray);
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
  return out;
}

ImageBuf to_image(const FloatPlane& plane) {
  if (plane.space() != ColorSpace::kSRGB && plane.space() != ColorSpace::kGray) {
    throw InvalidInput("to_image expects an sRGB or Gray plane, got " +
                       std::string(to_string(plane.space())));
  }
  ImageBuf out(plane.width(), plane.height(), plane.channels());
  auto src = plane.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = quantize(src[i]);
  return out;
}

}  // namespace mpd::imgcore
