// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "mpd/corruption/codec.hpp"

#ifdef MPD_HAVE_OPENCV
#include <opencv2/imgcodecs.hpp>

#include <cmath>
#include <vector>

#include "imgcore/opencv_bridge.hpp"
#include "mpd/common/error.hpp"
#endif

namespace mpd::corruption {

#ifdef MPD_HAVE_OPENCV
namespace {

class OpenCvCodec final : public CodecBackend {
 public:
  OpenCvCodec(std::string ext, int param) : ext_(std::move(ext)), param_(param) {}

  std::string name() const override { return "opencv" + ext_; }

  imgcore::ImageBuf roundtrip(const imgcore::ImageBuf& img, double strength) const override {
    std::vector<std::uint8_t> buf;
    const std::vector<int> params{param_, static_cast<int>(std::lround(strength))};
    if (!cv::imencode(ext_, imgcore::cvbridge::to_mat(img), buf, params)) {
      throw CodecUnavailable("OpenCV failed to encode " + ext_);
    }
    cv::Mat decoded = cv::imdecode(buf, img.channels() == 1 ? cv::IMREAD_GRAYSCALE
                                                            : cv::IMREAD_COLOR);
    if (decoded.empty()) throw CodecUnavailable("OpenCV failed to decode " + ext_);
    return imgcore::cvbridge::from_mat(decoded);
  }

 private:
  std::string ext_;
  int param_;
};

}  // namespace

bool register_opencv_codecs(CodecRegistry& reg) {
  reg.set(Codec::kJp2k, std::make_shared<OpenCvCodec>(".jp2", cv::IMWRITE_JPEG2000_COMPRESSION_X1000));
  reg.set(Codec::kWebp, std::make_shared<OpenCvCodec>(".webp", cv::IMWRITE_WEBP_QUALITY));
  return true;
}
#else
bool register_opencv_codecs(CodecRegistry&) { return false; }
#endif

}  // namespace mpd::corruption
