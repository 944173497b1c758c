// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "mpd/corruption/codec.hpp"
#include "mpd/corruption/schedule.hpp"
#include "mpd/imgcore/image.hpp"

namespace mpd::corruption {

/// Learned-denoiser hook for CnnDenoise.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual std::string name() const = 0;
  /// `noise_sigma` is the std-dev of the noise that was added (0..255 scale).
  virtual imgcore::FloatPlane denoise(const imgcore::FloatPlane& noisy, double noise_sigma,
                                      double spatial_sigma) const = 0;
  /// True when this is not a trained network; recorded in manifests.
  virtual bool is_stand_in() const { return false; }
};

/// Edge-preserving bilateral filter used in place of a trained network.
/// Range sigma is twice the noise sigma.
class BilateralDenoiser final : public Denoiser {
 public:
  std::string name() const override { return "bilateral"; }
  imgcore::FloatPlane denoise(const imgcore::FloatPlane& noisy, double noise_sigma,
                              double spatial_sigma) const override;
  bool is_stand_in() const override { return true; }
};

struct Backends {
  const CodecRegistry* codecs = &CodecRegistry::defaults();
  const Denoiser* denoiser = nullptr;  // null selects BilateralDenoiser
};

/// Applies one corruption. Gray input is promoted to sRGB first; the output
/// is always 3-channel sRGB with the input's width and height. Identical
/// (image, spec, schedule) triples give byte-identical output.
///
/// Throws ConfigError when the schedule lacks the cell or a parameter,
/// CodecUnavailable when a compression kind has no registered backend.
imgcore::ImageBuf apply(const imgcore::ImageBuf& img, const CorruptionSpec& spec,
                        const ParamSchedule& sched, const Backends& backends = {});

/// Flags describing substitutions that affected a spec (e.g. "denoiser=stand-in").
std::string substitution_flags(const CorruptionSpec& spec, const Backends& backends = {});

}  // namespace mpd::corruption
