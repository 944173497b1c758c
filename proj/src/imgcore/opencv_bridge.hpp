// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

// ImageBuf <-> cv::Mat conversion. Only compiled with MPD_HAVE_OPENCV.

#pragma once

#include <opencv2/core.hpp>

#include "mpd/imgcore/image.hpp"

namespace mpd::imgcore::cvbridge {

inline ImageBuf from_mat(const cv::Mat& m) {
  const int ch = m.channels() == 1 ? 1 : 3;
  ImageBuf out(m.cols, m.rows, ch);
  for (int y = 0; y < m.rows; ++y) {
    const auto* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < m.cols; ++x) {
      if (ch == 1) {
        out.at(x, y, 0) = row[x];
      } else {
        const int stride = m.channels();
        // OpenCV stores BGR(A).
        out.at(x, y, 0) = row[x * stride + 2];
        out.at(x, y, 1) = row[x * stride + 1];
        out.at(x, y, 2) = row[x * stride + 0];
      }
    }
  }
  return out;
}

inline cv::Mat to_mat(const ImageBuf& img) {
  cv::Mat m(img.height(), img.width(), img.channels() == 1 ? CV_8UC1 : CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    auto* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.width(); ++x) {
      if (img.channels() == 1) {
        row[x] = img.at(x, y, 0);
      } else {
        row[x * 3 + 0] = img.at(x, y, 2);
        row[x * 3 + 1] = img.at(x, y, 1);
        row[x * 3 + 2] = img.at(x, y, 0);
      }
    }
  }
  return m;
}

}  // namespace mpd::imgcore::cvbridge
