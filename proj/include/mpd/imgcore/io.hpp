// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mpd/imgcore/image.hpp"

namespace mpd::imgcore {

/// Reads a raster. Binary PPM/PGM are handled in-core; other formats (PNG,
/// JPEG, BMP, TIFF, ...) need the OpenCV backend. Lossy inputs are accepted
/// and decoded to 8-bit. Throws MissingInput when unreadable and
/// CodecUnavailable for formats without a backend.
ImageBuf read_image(const std::filesystem::path& path);

/// Writes a lossless raster chosen by extension (.ppm/.pgm in-core, .png via
/// OpenCV). Encoding is deterministic: identical images give identical bytes.
void write_image(const std::filesystem::path& path, const ImageBuf& img);

/// Binary PNM encoding (P5 for gray, P6 for RGB).
std::vector<std::uint8_t> encode_pnm(const ImageBuf& img);
ImageBuf decode_pnm(const std::vector<std::uint8_t>& bytes, const std::string& context);

/// True when the OpenCV raster/codec backend is compiled in.
bool have_opencv_backend() noexcept;

}  // namespace mpd::imgcore
