// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/imgcore/color.hpp"

#include <string>

#include "mpd/common/error.hpp"
#include "mpd/imgcore/pixel_ops.hpp"
#include "mpd/imgcore/reference.hpp"

namespace mpd::imgcore {
namespace detail {

pixel::Rgb from_srgb(const pixel::Rgb& rgb, ColorSpace target) {
  switch (target) {
    case ColorSpace::kLab: return pixel::rgb_to_lab(rgb);
    case ColorSpace::kHSV: return pixel::rgb_to_hsv(rgb);
    case ColorSpace::kYCbCr: return pixel::rgb_to_ycbcr(rgb);
    default: return rgb;
  }
}

pixel::Rgb to_srgb(const pixel::Rgb& v, ColorSpace source) {
  switch (source) {
    case ColorSpace::kLab: return pixel::lab_to_rgb(v);
    case ColorSpace::kHSV: return pixel::hsv_to_rgb(v);
    case ColorSpace::kYCbCr: return pixel::ycbcr_to_rgb(v);
    default: return v;
  }
}

bool chromatic(ColorSpace s) {
  return s == ColorSpace::kLab || s == ColorSpace::kHSV || s == ColorSpace::kYCbCr;
}

void check_conversion(int channels, ColorSpace source, ColorSpace target) {
  if (channels == 1 && chromatic(target)) {
    throw InvalidInput("cannot convert single-channel input to " +
                       std::string(to_string(target)));
  }
  if (channels == 3 && source == ColorSpace::kGray) {
    throw InvalidInput("3-channel plane tagged Gray");
  }
}

template <bool Parallel>
FloatPlane convert_impl(const FloatPlane& src, ColorSpace target) {
  const ColorSpace source = src.space();
  check_conversion(src.channels(), source, target);
  if (source == target) return src;

  const int w = src.width();
  const int h = src.height();

  if (src.channels() == 1) {
    // Gray -> sRGB replicates; nothing else is legal here.
    FloatPlane out(w, h, 3, ColorSpace::kSRGB);
#pragma omp parallel for schedule(static) if (Parallel)
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double v = src.at(x, y, 0);
        out.at(x, y, 0) = v;
        out.at(x, y, 1) = v;
        out.at(x, y, 2) = v;
      }
    }
    return out;
  }

  FloatPlane out(w, h, target == ColorSpace::kGray ? 1 : 3, target);
#pragma omp parallel for schedule(static) if (Parallel)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const pixel::Rgb in{src.at(x, y, 0), src.at(x, y, 1), src.at(x, y, 2)};
      const pixel::Rgb rgb = to_srgb(in, source);
      if (target == ColorSpace::kGray) {
        out.at(x, y, 0) = pixel::rgb_to_gray(rgb);
      } else {
        const pixel::Rgb v = from_srgb(rgb, target);
        out.at(x, y, 0) = v[0];
        out.at(x, y, 1) = v[1];
        out.at(x, y, 2) = v[2];
      }
    }
  }
  return out;
}

}  // namespace detail

FloatPlane convert(const FloatPlane& plane, ColorSpace target) {
  return detail::convert_impl<true>(plane, target);
}

FloatPlane convert(const ImageBuf& img, ColorSpace target) {
  return convert(to_float(img), target);
}

ImageBuf render(const FloatPlane& plane) {
  if (plane.channels() == 1) {
    FloatPlane gray = plane;
    gray.set_space(ColorSpace::kGray);
    return to_image(gray);
  }
  return to_image(convert(plane, ColorSpace::kSRGB));
}

namespace reference {

FloatPlane convert(const FloatPlane& plane, ColorSpace target) {
  return detail::convert_impl<false>(plane, target);
}

}  // namespace reference
}  // namespace mpd::imgcore
