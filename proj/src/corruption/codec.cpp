// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/corruption/codec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "mpd/common/error.hpp"
#include "mpd/imgcore/pixel_ops.hpp"

namespace mpd::corruption {

using imgcore::ImageBuf;

std::string_view codec_name(Codec c) {
  switch (c) {
    case Codec::kJpeg: return "jpeg";
    case Codec::kJp2k: return "jp2k";
    case Codec::kWebp: return "webp";
  }
  return "?";
}

void CodecRegistry::set(Codec c, std::shared_ptr<const CodecBackend> backend) {
  backends_[c] = std::move(backend);
}

void CodecRegistry::erase(Codec c) { backends_.erase(c); }

bool CodecRegistry::has(Codec c) const { return backends_.count(c) != 0; }

const CodecBackend& CodecRegistry::get(Codec c) const {
  auto it = backends_.find(c);
  if (it == backends_.end() || !it->second) {
    throw CodecUnavailable("no codec backend registered for " + std::string(codec_name(c)));
  }
  return *it->second;
}

const CodecRegistry& CodecRegistry::defaults() {
  static const CodecRegistry reg = [] {
    CodecRegistry r;
    r.set(Codec::kJpeg, std::make_shared<InCoreJpeg>());
    register_opencv_codecs(r);
    return r;
  }();
  return reg;
}

namespace {

// ITU T.81 Annex K tables, natural (row-major) order.
constexpr std::array<int, 64> kLumaQ{
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};
constexpr std::array<int, 64> kChromaQ{
    17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99, 24, 26, 56, 99, 99, 99,
    99, 99, 47, 66, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};

struct DctTable {
  std::array<double, 64> c{};  // c[u*8+x] = alpha(u) cos((2x+1)u pi / 16)
  DctTable() {
    for (int u = 0; u < 8; ++u) {
      const double a = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int x = 0; x < 8; ++x) {
        c[u * 8 + x] = a * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
      }
    }
  }
};

const DctTable& dct_table() {
  static const DctTable t;
  return t;
}

// Orthonormal 8x8 DCT-II and its inverse, separable.
void fdct(std::array<double, 64>& blk) {
  const auto& c = dct_table().c;
  std::array<double, 64> tmp{};
  for (int y = 0; y < 8; ++y)
    for (int u = 0; u < 8; ++u) {
      double s = 0;
      for (int x = 0; x < 8; ++x) s += c[u * 8 + x] * blk[y * 8 + x];
      tmp[y * 8 + u] = s;
    }
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) {
      double s = 0;
      for (int y = 0; y < 8; ++y) s += c[v * 8 + y] * tmp[y * 8 + u];
      blk[v * 8 + u] = s;
    }
}

void idct(std::array<double, 64>& blk) {
  const auto& c = dct_table().c;
  std::array<double, 64> tmp{};
  for (int v = 0; v < 8; ++v)
    for (int x = 0; x < 8; ++x) {
      double s = 0;
      for (int u = 0; u < 8; ++u) s += c[u * 8 + x] * blk[v * 8 + u];
      tmp[v * 8 + x] = s;
    }
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      double s = 0;
      for (int v = 0; v < 8; ++v) s += c[v * 8 + y] * tmp[v * 8 + x];
      blk[y * 8 + x] = s;
    }
}

double round_half_away(double v) { return v < 0 ? -std::floor(-v + 0.5) : std::floor(v + 0.5); }

// Lossy coding of one component plane in place (values 0..255, dims are
// multiples of 8). Output samples are rounded/clamped as a decoder would.
void code_plane(std::vector<double>& plane, int w, int h, const std::array<int, 64>& q) {
#pragma omp parallel for schedule(static)
  for (int by = 0; by < h / 8; ++by) {
    std::array<double, 64> blk{};
    for (int bx = 0; bx < w / 8; ++bx) {
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
          blk[y * 8 + x] = plane[static_cast<std::size_t>(by * 8 + y) * w + bx * 8 + x] - 128.0;
      fdct(blk);
      for (int i = 0; i < 64; ++i) blk[i] = round_half_away(blk[i] / q[i]) * q[i];
      idct(blk);
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
          plane[static_cast<std::size_t>(by * 8 + y) * w + bx * 8 + x] =
              std::clamp(round_half_away(blk[y * 8 + x] + 128.0), 0.0, 255.0);
    }
  }
}

int round_up(int v, int m) { return (v + m - 1) / m * m; }

}  // namespace

int scaled_quant(int base, int quality) {
  quality = std::clamp(quality, 1, 100);
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  return std::clamp((base * scale + 50) / 100, 1, 255);
}

ImageBuf InCoreJpeg::roundtrip(const ImageBuf& img, double quality_in) const {
  const int quality = static_cast<int>(std::lround(quality_in));
  if (quality < 1 || quality > 100) throw InvalidInput("jpeg quality must be in [1,100]");
  std::array<int, 64> ql{}, qc{};
  for (int i = 0; i < 64; ++i) {
    ql[i] = scaled_quant(kLumaQ[i], quality);
    qc[i] = scaled_quant(kChromaQ[i], quality);
  }

  const int w = img.width();
  const int h = img.height();
  // Luma is padded to 16 so the subsampled chroma is a multiple of 8.
  const int pw = round_up(w, 16);
  const int ph = round_up(h, 16);
  auto src = [&](int x, int y, int c) {
    return static_cast<double>(img.at(std::min(x, w - 1), std::min(y, h - 1), c));
  };

  if (img.channels() == 1) {
    std::vector<double> yp(static_cast<std::size_t>(pw) * ph);
    for (int y = 0; y < ph; ++y)
      for (int x = 0; x < pw; ++x) yp[static_cast<std::size_t>(y) * pw + x] = src(x, y, 0);
    code_plane(yp, pw, ph, ql);
    ImageBuf out(w, h, 1);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        out.at(x, y, 0) = static_cast<std::uint8_t>(yp[static_cast<std::size_t>(y) * pw + x]);
    return out;
  }

  std::vector<double> yp(static_cast<std::size_t>(pw) * ph);
  std::vector<double> cbf(static_cast<std::size_t>(pw) * ph);
  std::vector<double> crf(static_cast<std::size_t>(pw) * ph);
  for (int y = 0; y < ph; ++y) {
    for (int x = 0; x < pw; ++x) {
      const auto ycc = imgcore::pixel::rgb_to_ycbcr({src(x, y, 0), src(x, y, 1), src(x, y, 2)});
      const std::size_t i = static_cast<std::size_t>(y) * pw + x;
      // Encoders quantize the color transform output to 8 bits.
      yp[i] = std::clamp(round_half_away(ycc[0]), 0.0, 255.0);
      cbf[i] = ycc[1];
      crf[i] = ycc[2];
    }
  }
  const int cw = pw / 2;
  const int chh = ph / 2;
  std::vector<double> cb(static_cast<std::size_t>(cw) * chh);
  std::vector<double> cr(static_cast<std::size_t>(cw) * chh);
  for (int y = 0; y < chh; ++y) {
    for (int x = 0; x < cw; ++x) {
      double sb = 0, sr = 0;
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
          const std::size_t i = static_cast<std::size_t>(2 * y + dy) * pw + 2 * x + dx;
          sb += cbf[i];
          sr += crf[i];
        }
      cb[static_cast<std::size_t>(y) * cw + x] = std::clamp(round_half_away(sb / 4), 0.0, 255.0);
      cr[static_cast<std::size_t>(y) * cw + x] = std::clamp(round_half_away(sr / 4), 0.0, 255.0);
    }
  }
  code_plane(yp, pw, ph, ql);
  code_plane(cb, cw, chh, qc);
  code_plane(cr, cw, chh, qc);

  ImageBuf out(w, h, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Chroma upsampling by replication.
      const std::size_t ci = static_cast<std::size_t>(y / 2) * cw + x / 2;
      const auto rgb =
          imgcore::pixel::ycbcr_to_rgb({yp[static_cast<std::size_t>(y) * pw + x], cb[ci], cr[ci]});
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = imgcore::quantize(rgb[c]);
    }
  }
  return out;
}

}  // namespace mpd::corruption
