// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/corruption/apply.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "mpd/common/error.hpp"
#include "mpd/common/rng.hpp"
#include "mpd/imgcore/color.hpp"
#include "mpd/imgcore/filter.hpp"
#include "mpd/imgcore/otsu.hpp"
#include "mpd/imgcore/resize.hpp"

namespace mpd::corruption {

using imgcore::ColorSpace;
using imgcore::FloatPlane;
using imgcore::ImageBuf;
using imgcore::Kernel2D;

FloatPlane BilateralDenoiser::denoise(const FloatPlane& noisy, double noise_sigma,
                                      double spatial_sigma) const {
  return imgcore::bilateral(noisy, spatial_sigma, std::max(1.0, 2.0 * noise_sigma));
}

namespace {

const BilateralDenoiser& default_denoiser() {
  static const BilateralDenoiser d;
  return d;
}

const Denoiser& pick_denoiser(const Backends& b) {
  return b.denoiser ? *b.denoiser : default_denoiser();
}

FloatPlane promote(const ImageBuf& img) {
  FloatPlane f = imgcore::to_float(img);
  if (f.channels() == 1) f = imgcore::convert(f, ColorSpace::kSRGB);
  return f;
}

template <typename Fn>
void for_each_sample(FloatPlane& p, Fn&& fn) {
  for (double& v : p.data()) v = fn(v);
}

FloatPlane channel(const FloatPlane& p, int c) {
  FloatPlane out(p.width(), p.height(), 1, ColorSpace::kGray);
  for (int y = 0; y < p.height(); ++y)
    for (int x = 0; x < p.width(); ++x) out.at(x, y, 0) = p.at(x, y, c);
  return out;
}

void add_gaussian_noise(FloatPlane& p, double sigma, Rng& rng) {
  for (double& v : p.data()) v += rng.normal(0.0, sigma);
}

// --- color quantization: greedy minimum-variance box splitting ----------

constexpr int kBins = 32;  // 5 bits per channel

struct CellStats {
  double count = 0;
  std::array<double, 3> sum{};
  double sumsq = 0;
  void add(const CellStats& o) {
    count += o.count;
    for (int c = 0; c < 3; ++c) sum[c] += o.sum[c];
    sumsq += o.sumsq;
  }
  double sse() const {
    if (count == 0) return 0;
    return sumsq - (sum[0] * sum[0] + sum[1] * sum[1] + sum[2] * sum[2]) / count;
  }
};

struct Box {
  std::array<int, 3> lo{0, 0, 0};
  std::array<int, 3> hi{kBins, kBins, kBins};  // exclusive
  CellStats stats;
};

inline int cell_index(int r, int g, int b) { return (r * kBins + g) * kBins + b; }

CellStats box_stats(const std::vector<CellStats>& cells, const Box& box) {
  CellStats s;
  for (int r = box.lo[0]; r < box.hi[0]; ++r)
    for (int g = box.lo[1]; g < box.hi[1]; ++g)
      for (int b = box.lo[2]; b < box.hi[2]; ++b) s.add(cells[cell_index(r, g, b)]);
  return s;
}

// Best split of `box` across all axes; returns false when no split leaves
// both halves occupied.
bool best_split(const std::vector<CellStats>& cells, const Box& box, Box& left, Box& right) {
  double best = INFINITY;
  for (int axis = 0; axis < 3; ++axis) {
    const int n = box.hi[axis] - box.lo[axis];
    if (n < 2) continue;
    std::vector<CellStats> slices(n);
    for (int r = box.lo[0]; r < box.hi[0]; ++r)
      for (int g = box.lo[1]; g < box.hi[1]; ++g)
        for (int b = box.lo[2]; b < box.hi[2]; ++b) {
          const int coord[3] = {r, g, b};
          slices[coord[axis] - box.lo[axis]].add(cells[cell_index(r, g, b)]);
        }
    CellStats below;
    for (int cut = 1; cut < n; ++cut) {
      below.add(slices[cut - 1]);
      CellStats above = box.stats;
      above.count -= below.count;
      for (int c = 0; c < 3; ++c) above.sum[c] -= below.sum[c];
      above.sumsq -= below.sumsq;
      if (below.count == 0 || above.count <= 0) continue;
      const double cost = below.sse() + above.sse();
      if (cost < best) {
        best = cost;
        left = box;
        right = box;
        left.hi[axis] = box.lo[axis] + cut;
        right.lo[axis] = box.lo[axis] + cut;
        left.stats = below;
        right.stats = above;
      }
    }
  }
  return std::isfinite(best);
}

FloatPlane color_quantize(const FloatPlane& img, int colors) {
  if (colors < 1) throw ConfigError("ColorQuantization colors must be >= 1");
  std::vector<CellStats> cells(kBins * kBins * kBins);
  auto bin = [](double v) { return std::clamp(static_cast<int>(v) >> 3, 0, kBins - 1); };
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      auto& cs = cells[cell_index(bin(img.at(x, y, 0)), bin(img.at(x, y, 1)), bin(img.at(x, y, 2)))];
      cs.count += 1;
      for (int c = 0; c < 3; ++c) {
        cs.sum[c] += img.at(x, y, c);
        cs.sumsq += img.at(x, y, c) * img.at(x, y, c);
      }
    }
  std::vector<Box> boxes(1);
  boxes[0].stats = box_stats(cells, boxes[0]);
  std::vector<bool> splittable{true};
  while (static_cast<int>(boxes.size()) < colors) {
    int pick = -1;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      if (!splittable[i] || boxes[i].stats.sse() <= 0) continue;
      if (pick < 0 || boxes[i].stats.sse() > boxes[pick].stats.sse()) pick = static_cast<int>(i);
    }
    if (pick < 0) break;
    Box l, r;
    if (!best_split(cells, boxes[pick], l, r)) {
      splittable[pick] = false;
      continue;
    }
    boxes[pick] = l;
    boxes.push_back(r);
    splittable.push_back(true);
  }
  std::vector<int> owner(cells.size(), 0);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const Box& b = boxes[i];
    for (int r = b.lo[0]; r < b.hi[0]; ++r)
      for (int g = b.lo[1]; g < b.hi[1]; ++g)
        for (int bb = b.lo[2]; bb < b.hi[2]; ++bb) owner[cell_index(r, g, bb)] = static_cast<int>(i);
  }
  FloatPlane out = img;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const Box& b = boxes[owner[cell_index(bin(img.at(x, y, 0)), bin(img.at(x, y, 1)),
                                            bin(img.at(x, y, 2)))]];
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = b.stats.sum[c] / b.stats.count;
    }
  return out;
}

// --- block operations ---------------------------------------------------

struct BlockGrid {
  int size = 0;
  int nx = 0;
  int ny = 0;
};

BlockGrid block_grid(const FloatPlane& img, int block_size) {
  BlockGrid g;
  g.size = std::max(1, std::min({block_size, img.width(), img.height()}));
  g.nx = img.width() / g.size;
  g.ny = img.height() / g.size;
  return g;
}

// `count` distinct block indices drawn without replacement.
std::vector<int> pick_blocks(const BlockGrid& g, int count, Rng& rng) {
  std::vector<int> all(static_cast<std::size_t>(g.nx) * g.ny);
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  for (std::size_t i = all.size(); i > 1; --i) std::swap(all[i - 1], all[rng.below(i)]);
  all.resize(std::min<std::size_t>(all.size(), static_cast<std::size_t>(std::max(0, count))));
  return all;
}

void swap_blocks(FloatPlane& img, const BlockGrid& g, int a, int b) {
  const int ax = (a % g.nx) * g.size, ay = (a / g.nx) * g.size;
  const int bx = (b % g.nx) * g.size, by = (b / g.nx) * g.size;
  for (int y = 0; y < g.size; ++y)
    for (int x = 0; x < g.size; ++x)
      for (int c = 0; c < img.channels(); ++c)
        std::swap(img.at(ax + x, ay + y, c), img.at(bx + x, by + y, c));
}

void coons_fill(FloatPlane& img, int x0, int y0, int n) {
  if (n < 3) return;
  const int x1 = x0 + n - 1, y1 = y0 + n - 1;
  FloatPlane src = img;
  for (int y = y0 + 1; y < y1; ++y) {
    const double v = static_cast<double>(y - y0) / (n - 1);
    for (int x = x0 + 1; x < x1; ++x) {
      const double u = static_cast<double>(x - x0) / (n - 1);
      for (int c = 0; c < img.channels(); ++c) {
        const double edges = (1 - v) * src.at(x, y0, c) + v * src.at(x, y1, c) +
                             (1 - u) * src.at(x0, y, c) + u * src.at(x1, y, c);
        const double corners = (1 - u) * (1 - v) * src.at(x0, y0, c) +
                               u * (1 - v) * src.at(x1, y0, c) + (1 - u) * v * src.at(x0, y1, c) +
                               u * v * src.at(x1, y1, c);
        img.at(x, y, c) = edges - corners;
      }
    }
  }
}

FloatPlane crop(const FloatPlane& img, int x0, int y0, int w, int h) {
  FloatPlane out(w, h, img.channels(), img.space());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = img.at(x0 + x, y0 + y, c);
  return out;
}

void paste(FloatPlane& img, const FloatPlane& patch, int x0, int y0) {
  for (int y = 0; y < patch.height(); ++y)
    for (int x = 0; x < patch.width(); ++x)
      for (int c = 0; c < img.channels(); ++c) img.at(x0 + x, y0 + y, c) = patch.at(x, y, c);
}

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

FloatPlane run(const FloatPlane& in, const CorruptionSpec& spec, const LevelParams& p,
               const Backends& backends, Rng& rng) {
  using K = CorruptionKind;
  FloatPlane img = in;
  switch (spec.kind) {
    case K::kGaussianFilter:
      return imgcore::convolve(img, Kernel2D::gaussian(p.get("sigma")));
    case K::kLensBlur:
      return imgcore::convolve(img, Kernel2D::disk(p.get("radius")));
    case K::kMotionBlur:
      return imgcore::convolve(img, Kernel2D::line(p.get("length"), p.get("angle")));

    case K::kColorDiffusion: {
      FloatPlane lab = imgcore::convert(img, ColorSpace::kLab);
      FloatPlane blurred = imgcore::convolve(lab, Kernel2D::gaussian(p.get("sigma")));
      for (int y = 0; y < lab.height(); ++y)
        for (int x = 0; x < lab.width(); ++x) blurred.at(x, y, 0) = lab.at(x, y, 0);
      return imgcore::convert(blurred, ColorSpace::kSRGB);
    }
    case K::kColorShift: {
      static constexpr int kDirs[8][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1},
                                          {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
      const int d = static_cast<int>(rng.below(8));
      const int off = static_cast<int>(std::lround(p.get("offset")));
      for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
          img.at(x, y, 1) = in.clamped(x - kDirs[d][0] * off, y - kDirs[d][1] * off, 1);
      return img;
    }
    case K::kColorQuantization:
      return color_quantize(img, static_cast<int>(std::lround(p.get("colors"))));
    case K::kHsvSaturation: {
      FloatPlane hsv = imgcore::convert(img, ColorSpace::kHSV);
      const double f = p.get("factor");
      for (int y = 0; y < hsv.height(); ++y)
        for (int x = 0; x < hsv.width(); ++x) hsv.at(x, y, 1) *= f;
      return imgcore::convert(hsv, ColorSpace::kSRGB);
    }
    case K::kLabSaturation: {
      FloatPlane lab = imgcore::convert(img, ColorSpace::kLab);
      const double f = p.get("factor");
      for (int y = 0; y < lab.height(); ++y)
        for (int x = 0; x < lab.width(); ++x) {
          lab.at(x, y, 1) *= f;
          lab.at(x, y, 2) *= f;
        }
      return imgcore::convert(lab, ColorSpace::kSRGB);
    }

    case K::kJp2kCompression:
    case K::kJpegCompression:
    case K::kWebpCompression: {
      const Codec codec = spec.kind == K::kJpegCompression   ? Codec::kJpeg
                          : spec.kind == K::kJp2kCompression ? Codec::kJp2k
                                                             : Codec::kWebp;
      const double strength =
          codec == Codec::kJp2k ? p.get("rate_x1000") : p.get("quality");
      const ImageBuf coded = backends.codecs->get(codec).roundtrip(imgcore::to_image(img), strength);
      return imgcore::to_float(coded);
    }

    case K::kWhiteNoise:
      add_gaussian_noise(img, p.get("sigma"), rng);
      return img;
    case K::kColorNoise: {
      FloatPlane ycc = imgcore::convert(img, ColorSpace::kYCbCr);
      const double sigma = p.get("sigma");
      for (int y = 0; y < ycc.height(); ++y)
        for (int x = 0; x < ycc.width(); ++x) {
          ycc.at(x, y, 1) += rng.normal(0.0, sigma);
          ycc.at(x, y, 2) += rng.normal(0.0, sigma);
        }
      return imgcore::convert(ycc, ColorSpace::kSRGB);
    }
    case K::kImpulseNoise: {
      const double density = p.get("density");
      for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
          if (!rng.bernoulli(density)) continue;
          const double v = rng.bernoulli(0.5) ? 255.0 : 0.0;
          for (int c = 0; c < 3; ++c) img.at(x, y, c) = v;
        }
      return img;
    }
    case K::kMultiplicativeNoise: {
      const double sigma = p.get("sigma");
      for_each_sample(img, [&](double v) { return v + v * rng.normal(0.0, sigma); });
      return img;
    }
    case K::kGaussianDenoise: {
      add_gaussian_noise(img, p.get("noise_sigma"), rng);
      for_each_sample(img, [](double v) { return std::clamp(v, 0.0, 255.0); });
      return imgcore::convolve(img, Kernel2D::gaussian(p.get("filter_sigma")));
    }
    case K::kCnnDenoise: {
      const double noise = p.get("noise_sigma");
      add_gaussian_noise(img, noise, rng);
      for_each_sample(img, [](double v) { return std::clamp(v, 0.0, 255.0); });
      return pick_denoiser(backends).denoise(img, noise, p.get("spatial_sigma"));
    }

    case K::kMaxBrighten: {
      const double a = p.get("alpha");
      const double m = *std::max_element(img.data().begin(), img.data().end());
      for_each_sample(img, [a, m](double v) { return m - (m - v) * (1.0 - a); });
      return img;
    }
    case K::kMinDarken: {
      const double a = p.get("alpha");
      const double m = *std::min_element(img.data().begin(), img.data().end());
      for_each_sample(img, [a, m](double v) { return m + (v - m) * (1.0 - a); });
      return img;
    }
    case K::kMeanBrighten: {
      const double o = p.get("offset");
      for_each_sample(img, [o](double v) { return v + o; });
      return img;
    }
    case K::kMeanDarken: {
      const double o = p.get("offset");
      for_each_sample(img, [o](double v) { return v - o; });
      return img;
    }

    case K::kClockJittering: {
      const double r = p.get("radius");
      for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
          const double sx = x + rng.uniform(-r, r);
          const double sy = y + rng.uniform(-r, r);
          for (int c = 0; c < 3; ++c) img.at(x, y, c) = imgcore::sample_bilinear(in, sx, sy, c);
        }
      return img;
    }
    case K::kBlockExchange:
    case K::kBlockLost:
    case K::kBlockInterpolation:
    case K::kBlockRepeat: {
      const BlockGrid g = block_grid(img, static_cast<int>(std::lround(p.get("block_size"))));
      const auto picked = pick_blocks(g, static_cast<int>(std::lround(p.get("blocks"))), rng);
      if (spec.kind == K::kBlockExchange) {
        for (std::size_t i = 0; i + 1 < picked.size(); i += 2) swap_blocks(img, g, picked[i], picked[i + 1]);
        return img;
      }
      const Kernel2D box = spec.kind == K::kBlockRepeat
                               ? Kernel2D::box(static_cast<int>(std::lround(p.get("kernel"))))
                               : Kernel2D::box(1);
      for (int b : picked) {
        const int x0 = (b % g.nx) * g.size;
        const int y0 = (b / g.nx) * g.size;
        if (spec.kind == K::kBlockLost) {
          for (int y = 0; y < g.size; ++y)
            for (int x = 0; x < g.size; ++x)
              for (int c = 0; c < 3; ++c) img.at(x0 + x, y0 + y, c) = rng.uniform(0.0, 256.0);
        } else if (spec.kind == K::kBlockInterpolation) {
          coons_fill(img, x0, y0, g.size);
        } else {
          FloatPlane patch = crop(img, x0, y0, g.size, g.size);
          patch = imgcore::convolve(imgcore::convolve(patch, box), box);
          paste(img, patch, x0, y0);
        }
      }
      return img;
    }

    case K::kResolutionLimit: {
      const double f = p.get("factor");
      if (f < 1.0) throw ConfigError("ResolutionLimit factor must be >= 1");
      const int sw = std::max(1, static_cast<int>(std::lround(img.width() / f)));
      const int sh = std::max(1, static_cast<int>(std::lround(img.height() / f)));
      FloatPlane pre = imgcore::convolve(img, Kernel2D::gaussian(f / 2.0));
      FloatPlane small = imgcore::resize(pre, sw, sh, imgcore::ResizeMethod::kBilinear);
      return imgcore::resize(small, img.width(), img.height(), imgcore::ResizeMethod::kBilinear);
    }
    case K::kGrayscaleQuantization: {
      const int classes = static_cast<int>(std::lround(p.get("classes")));
      for (int c = 0; c < 3; ++c) {
        const auto res = imgcore::otsu(imgcore::histogram(channel(img, c)), classes);
        for (int y = 0; y < img.height(); ++y)
          for (int x = 0; x < img.width(); ++x) {
            const double v = in.at(x, y, c);
            const auto k = std::lower_bound(res.thresholds.begin(), res.thresholds.end(),
                                            std::round(v)) -
                           res.thresholds.begin();
            img.at(x, y, c) = res.class_means[static_cast<std::size_t>(k)];
          }
      }
      return img;
    }
    case K::kSharpnessChange: {
      const double amount = p.get("amount");
      const FloatPlane blur = imgcore::convolve(img, Kernel2D::gaussian(p.get("sigma")));
      for (std::size_t i = 0; i < img.size(); ++i)
        img.data()[i] += amount * (img.data()[i] - blur.data()[i]);
      return img;
    }
    case K::kContrastChange: {
      const double k = p.get("steepness");
      const double lo = sigmoid(-k / 2.0), hi = sigmoid(k / 2.0);
      for_each_sample(img, [&](double v) {
        return 255.0 * (sigmoid(k * (v / 255.0 - 0.5)) - lo) / (hi - lo);
      });
      return img;
    }
  }
  throw InvalidInput("unknown corruption kind");
}

}  // namespace

ImageBuf apply(const ImageBuf& img, const CorruptionSpec& spec, const ParamSchedule& sched,
               const Backends& backends) {
  if (img.empty()) throw InvalidInput("cannot corrupt an empty image");
  if (spec.level < 1 || spec.level > kNumLevels) throw InvalidInput("corruption level must be in [1,5]");
  if (!backends.codecs) throw ConfigError("no codec registry supplied");
  const LevelParams& params = sched.at(spec.kind, spec.level);
  Rng rng(spec.seed);
  FloatPlane out = run(promote(img), spec, params, backends, rng);
  out.set_space(ColorSpace::kSRGB);
  return imgcore::to_image(out);
}

std::string substitution_flags(const CorruptionSpec& spec, const Backends& backends) {
  if (spec.kind == CorruptionKind::kCnnDenoise && pick_denoiser(backends).is_stand_in()) {
    return "denoiser=stand-in";
  }
  return "";
}

}  // namespace mpd::corruption
