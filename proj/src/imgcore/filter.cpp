// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/imgcore/filter.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mpd/common/error.hpp"
#include "mpd/imgcore/reference.hpp"

namespace mpd::imgcore {
namespace {

template <bool Parallel>
FloatPlane separable_pass(const FloatPlane& src, std::span<const double> taps, bool horizontal) {
  const int w = src.width();
  const int h = src.height();
  const int ch = src.channels();
  const int r = static_cast<int>(taps.size()) / 2;
  FloatPlane out(w, h, ch, src.space());
#pragma omp parallel for schedule(static) if (Parallel)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int i = -r; i <= r; ++i) {
          const double v = horizontal ? src.clamped(x + i, y, c) : src.clamped(x, y + i, c);
          acc += taps[i + r] * v;
        }
        out.at(x, y, c) = acc;
      }
    }
  }
  return out;
}

template <bool Parallel>
FloatPlane square_pass(const FloatPlane& src, const Kernel2D& k) {
  const int w = src.width();
  const int h = src.height();
  const int ch = src.channels();
  const int r = k.radius();
  const int side = k.side();
  const auto taps = k.taps();
  FloatPlane out(w, h, ch, src.space());
#pragma omp parallel for schedule(static) if (Parallel)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int j = -r; j <= r; ++j) {
          for (int i = -r; i <= r; ++i) {
            const double t = taps[static_cast<std::size_t>(j + r) * side + (i + r)];
            if (t != 0.0) acc += t * src.clamped(x + i, y + j, c);
          }
        }
        out.at(x, y, c) = acc;
      }
    }
  }
  return out;
}

template <bool Parallel>
FloatPlane convolve_impl(const FloatPlane& img, const Kernel2D& k) {
  if (k.is_separable()) {
    return separable_pass<Parallel>(separable_pass<Parallel>(img, k.taps(), true), k.taps(),
                                    false);
  }
  return square_pass<Parallel>(img, k);
}

template <bool Parallel>
FloatPlane bilateral_impl(const FloatPlane& src, double sigma_s, double sigma_r) {
  if (!(sigma_s > 0.0) || !(sigma_r > 0.0)) {
    throw InvalidInput("bilateral sigmas must be positive");
  }
  const int w = src.width();
  const int h = src.height();
  const int ch = src.channels();
  const int r = std::max(1, static_cast<int>(std::ceil(2.0 * sigma_s)));
  std::vector<double> spatial(static_cast<std::size_t>(2 * r + 1) * (2 * r + 1));
  for (int j = -r; j <= r; ++j) {
    for (int i = -r; i <= r; ++i) {
      spatial[static_cast<std::size_t>(j + r) * (2 * r + 1) + (i + r)] =
          std::exp(-(i * i + j * j) / (2.0 * sigma_s * sigma_s));
    }
  }
  const double inv2r = 1.0 / (2.0 * sigma_r * sigma_r);
  FloatPlane out(w, h, ch, src.space());
#pragma omp parallel for schedule(static) if (Parallel)
  for (int y = 0; y < h; ++y) {
    std::vector<double> acc(ch);
    for (int x = 0; x < w; ++x) {
      std::fill(acc.begin(), acc.end(), 0.0);
      double norm = 0.0;
      for (int j = -r; j <= r; ++j) {
        for (int i = -r; i <= r; ++i) {
          double d2 = 0.0;
          for (int c = 0; c < ch; ++c) {
            const double d = src.clamped(x + i, y + j, c) - src.at(x, y, c);
            d2 += d * d;
          }
          const double wgt =
              spatial[static_cast<std::size_t>(j + r) * (2 * r + 1) + (i + r)] *
              std::exp(-d2 * inv2r);
          norm += wgt;
          for (int c = 0; c < ch; ++c) acc[c] += wgt * src.clamped(x + i, y + j, c);
        }
      }
      for (int c = 0; c < ch; ++c) out.at(x, y, c) = acc[c] / norm;
    }
  }
  return out;
}

void require_single_channel(const FloatPlane& p, const char* op) {
  if (p.channels() != 1) throw InvalidInput(std::string(op) + " expects a single-channel plane");
}

}  // namespace

FloatPlane convolve(const FloatPlane& img, const Kernel2D& k) {
  return convolve_impl<true>(img, k);
}

FloatPlane bilateral(const FloatPlane& img, double sigma_spatial, double sigma_range) {
  return bilateral_impl<true>(img, sigma_spatial, sigma_range);
}

FloatPlane laplacian(const FloatPlane& gray) {
  require_single_channel(gray, "laplacian");
  const int w = gray.width();
  const int h = gray.height();
  FloatPlane out(w, h, 1, gray.space());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out.at(x, y, 0) = gray.clamped(x - 1, y, 0) + gray.clamped(x + 1, y, 0) +
                        gray.clamped(x, y - 1, 0) + gray.clamped(x, y + 1, 0) -
                        4.0 * gray.at(x, y, 0);
    }
  }
  return out;
}

FloatPlane sobel_magnitude(const FloatPlane& gray) {
  require_single_channel(gray, "sobel_magnitude");
  const int w = gray.width();
  const int h = gray.height();
  FloatPlane out(w, h, 1, gray.space());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto p = [&](int dx, int dy) { return gray.clamped(x + dx, y + dy, 0); };
      const double gx = (p(1, -1) + 2 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2 * p(-1, 0) + p(-1, 1));
      const double gy = (p(-1, 1) + 2 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2 * p(0, -1) + p(1, -1));
      out.at(x, y, 0) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return out;
}

namespace reference {

FloatPlane convolve(const FloatPlane& img, const Kernel2D& k) {
  return convolve_impl<false>(img, k);
}

FloatPlane bilateral(const FloatPlane& img, double sigma_spatial, double sigma_range) {
  return bilateral_impl<false>(img, sigma_spatial, sigma_range);
}

}  // namespace reference
}  // namespace mpd::imgcore
