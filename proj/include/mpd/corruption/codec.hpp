// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "mpd/imgcore/image.hpp"

namespace mpd::corruption {

enum class Codec { kJpeg, kJp2k, kWebp };

std::string_view codec_name(Codec c);

/// Lossy encode/decode round trip. `strength` is the codec's native knob
/// (JPEG/WebP quality, JPEG 2000 rate x1000).
class CodecBackend {
 public:
  virtual ~CodecBackend() = default;
  virtual std::string name() const = 0;
  virtual imgcore::ImageBuf roundtrip(const imgcore::ImageBuf& img, double strength) const = 0;
};

/// Baseline JPEG implemented in-core: BT.601 YCbCr, 4:2:0 chroma, 8x8 DCT
/// with IJG-scaled standard quantization tables. Entropy coding is lossless
/// and therefore skipped.
class InCoreJpeg final : public CodecBackend {
 public:
  std::string name() const override { return "incore-jpeg"; }
  imgcore::ImageBuf roundtrip(const imgcore::ImageBuf& img, double quality) const override;
};

/// Codec id -> backend. Lookups of unregistered codecs throw
/// CodecUnavailable; there is never a silent fallback.
class CodecRegistry {
 public:
  void set(Codec c, std::shared_ptr<const CodecBackend> backend);
  void erase(Codec c);
  bool has(Codec c) const;
  const CodecBackend& get(Codec c) const;

  /// In-core JPEG plus any compiled-in backends (OpenCV JP2K/WebP).
  static const CodecRegistry& defaults();

 private:
  std::map<Codec, std::shared_ptr<const CodecBackend>> backends_;
};

/// Registers the OpenCV JP2K/WebP backends when compiled in; returns
/// whether anything was registered.
bool register_opencv_codecs(CodecRegistry& reg);

/// IJG quality scaling of a base quantization table entry.
int scaled_quant(int base, int quality);

}  // namespace mpd::corruption
