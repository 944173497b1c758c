// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/imgcore/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>

#include "mpd/common/error.hpp"
#include "mpd/common/table.hpp"

#ifdef MPD_HAVE_OPENCV
#include <opencv2/imgcodecs.hpp>

#include "imgcore/opencv_bridge.hpp"
#endif

namespace mpd::imgcore {
namespace {

std::string lower_ext(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

bool is_pnm(const std::string& ext) { return ext == ".ppm" || ext == ".pgm" || ext == ".pnm"; }


// Skips whitespace and '#' comments in a PNM header.
std::size_t skip_ws(const std::vector<std::uint8_t>& b, std::size_t i) {
  while (i < b.size()) {
    if (b[i] == '#') {
      while (i < b.size() && b[i] != '\n') ++i;
    } else if (std::isspace(b[i])) {
      ++i;
    } else {
      break;
    }
  }
  return i;
}

int read_uint(const std::vector<std::uint8_t>& b, std::size_t& i, const std::string& ctx) {
  i = skip_ws(b, i);
  if (i >= b.size() || !std::isdigit(b[i])) throw SchemaError(ctx + ": malformed PNM header");
  long v = 0;
  while (i < b.size() && std::isdigit(b[i])) {
    v = v * 10 + (b[i] - '0');
    if (v > 1 << 20) throw SchemaError(ctx + ": PNM dimension too large");
    ++i;
  }
  return static_cast<int>(v);
}

}  // namespace

bool have_opencv_backend() noexcept {
#ifdef MPD_HAVE_OPENCV
  return true;
#else
  return false;
#endif
}

std::vector<std::uint8_t> encode_pnm(const ImageBuf& img) {
  const std::string header = std::string(img.channels() == 1 ? "P5" : "P6") + "\n" +
                             std::to_string(img.width()) + " " + std::to_string(img.height()) +
                             "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.data().begin(), img.data().end());
  return out;
}

ImageBuf decode_pnm(const std::vector<std::uint8_t>& b, const std::string& ctx) {
  if (b.size() < 2 || b[0] != 'P' || (b[1] != '5' && b[1] != '6')) {
    throw SchemaError(ctx + ": not a binary PGM/PPM");
  }
  const int ch = b[1] == '5' ? 1 : 3;
  std::size_t i = 2;
  const int w = read_uint(b, i, ctx);
  const int h = read_uint(b, i, ctx);
  const int maxval = read_uint(b, i, ctx);
  if (maxval != 255) throw SchemaError(ctx + ": only 8-bit PNM supported");
  ++i;  // single whitespace after maxval
  const std::size_t n = static_cast<std::size_t>(w) * h * ch;
  if (b.size() < i + n) throw SchemaError(ctx + ": truncated PNM data");
  return ImageBuf(w, h, ch, std::vector<std::uint8_t>(b.begin() + i, b.begin() + i + n));
}

ImageBuf read_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw MissingInput("cannot read image " + path.string());
  if (is_pnm(lower_ext(path))) {
    const std::string raw = read_file(path);
    return decode_pnm(std::vector<std::uint8_t>(raw.begin(), raw.end()), path.string());
  }
#ifdef MPD_HAVE_OPENCV
  cv::Mat m = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (m.empty()) throw MissingInput("cannot decode image " + path.string());
  return cvbridge::from_mat(m);
#else
  throw CodecUnavailable("no raster backend for " + path.string() +
                         " (built without OpenCV; use .ppm/.pgm)");
#endif
}

void write_image(const std::filesystem::path& path, const ImageBuf& img) {
  const std::string ext = lower_ext(path);
  if (is_pnm(ext)) {
    const auto bytes = encode_pnm(img);
    write_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    return;
  }
#ifdef MPD_HAVE_OPENCV
  if (ext != ".png") throw InvalidInput("lossless output must be .png/.ppm/.pgm: " + path.string());
  std::vector<std::uint8_t> buf;
  if (!cv::imencode(".png", cvbridge::to_mat(img), buf, {cv::IMWRITE_PNG_COMPRESSION, 6})) {
    throw Error("png encode failed for " + path.string());
  }
  write_file(path, std::string_view(reinterpret_cast<const char*>(buf.data()), buf.size()));
#else
  throw CodecUnavailable("no PNG backend (built without OpenCV): " + path.string());
#endif
}

}  // namespace mpd::imgcore
