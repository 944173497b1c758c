// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace mpd::imgcore {

enum class ColorSpace { kSRGB, kGray, kLab, kHSV, kYCbCr };

std::string_view to_string(ColorSpace space);

/// 8-bit interleaved raster, 1 (gray) or 3 (sRGB) channels, row-major.
class ImageBuf {
 public:
  ImageBuf() = default;
  /// Zero-filled image. Throws InvalidInput on non-positive dims or
  /// channels other than 1 or 3.
  ImageBuf(int width, int height, int channels);
  ImageBuf(int width, int height, int channels, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t size() const noexcept { return data_.size(); }

  std::uint8_t& at(int x, int y, int c) noexcept {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  std::uint8_t at(int x, int y, int c) const noexcept {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  std::span<std::uint8_t> data() noexcept { return data_; }
  std::span<const std::uint8_t> data() const noexcept { return data_; }

  bool same_shape(const ImageBuf& o) const noexcept {
    return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
  }

  friend bool operator==(const ImageBuf&, const ImageBuf&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Floating working buffer tagged with the color space its samples live in.
///
/// Sample ranges by space: sRGB/Gray/YCbCr in [0,255]; Lab L* in [0,100]
/// with a*, b* unbounded; HSV with H in degrees [0,360), S and V in [0,1].
class FloatPlane {
 public:
  FloatPlane() = default;
  FloatPlane(int width, int height, int channels, ColorSpace space = ColorSpace::kSRGB);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  ColorSpace space() const noexcept { return space_; }
  void set_space(ColorSpace s) noexcept { space_ = s; }
  std::size_t size() const noexcept { return data_.size(); }

  double& at(int x, int y, int c) noexcept {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  double at(int x, int y, int c) const noexcept {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  /// Replicate-edge access.
  double clamped(int x, int y, int c) const noexcept;

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool same_shape(const FloatPlane& o) const noexcept {
    return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
  }

  friend bool operator==(const FloatPlane&, const FloatPlane&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  ColorSpace space_ = ColorSpace::kSRGB;
  std::vector<double> data_;
};

/// Convolution taps. Either a full odd-sided square grid or a 1-D odd-length
/// vector applied separably along both axes.
class Kernel2D {
 public:
  /// Square kernel; side*side taps. Throws InvalidInput for even side.
  static Kernel2D square(int side, std::vector<double> taps);
  /// Separable kernel built from one odd-length 1-D profile.
  static Kernel2D separable(std::vector<double> taps);

  static Kernel2D gaussian(double sigma);
  /// Uniform disk of the given radius (lens blur).
  static Kernel2D disk(double radius);
  /// Anti-aliased line segment of the given length and angle (motion blur).
  static Kernel2D line(double length, double angle_degrees);
  static Kernel2D box(int side);

  bool is_separable() const noexcept { return separable_; }
  int side() const noexcept { return side_; }
  int radius() const noexcept { return side_ / 2; }
  std::span<const double> taps() const noexcept { return taps_; }
  /// Sum of taps; for separable kernels the sum of the implied 2-D grid.
  double sum() const noexcept;

 private:
  Kernel2D(int side, bool separable, std::vector<double> taps)
      : side_(side), separable_(separable), taps_(std::move(taps)) {}
  void normalize();

  int side_ = 1;
  bool separable_ = false;
  std::vector<double> taps_;
};

/// Round half away from zero and clamp to [0,255].
inline std::uint8_t quantize(double v) noexcept {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(v + 0.5);
}

/// Widens an 8-bit image into a FloatPlane tagged sRGB (3 ch) or Gray (1 ch).
FloatPlane to_float(const ImageBuf& img);
/// Quantizes a FloatPlane whose space is sRGB or Gray.
ImageBuf to_image(const FloatPlane& plane);

}  // namespace mpd::imgcore
