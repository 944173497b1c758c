// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace mpd {

/// Base of every error raised by the toolkit. The CLI maps each subclass to
/// a distinct exit code (see exit_code()).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

/// Caller passed data that violates an operation's precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Configuration is missing an entry or is internally inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// A required input file could not be opened or read.
class MissingInput : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

/// A structured file failed schema validation.
class SchemaError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 5; }
};

/// A codec backend (JP2K, WebP, ...) is not compiled in or not registered.
class CodecUnavailable : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 6; }
};

/// Two id-keyed vectors do not align one-to-one.
class AlignmentError : public Error {
 public:
  AlignmentError(const std::string& what, std::string first_id)
      : Error(what), first_id_(std::move(first_id)) {}
  const std::string& first_id() const noexcept { return first_id_; }
  int exit_code() const noexcept override { return 7; }

 private:
  std::string first_id_;
};

/// External adapter (embedding service, SPICE, ...) failed.
class BackendError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 8; }
};

/// A correlation is undefined because one argument is constant.
class UndefinedCorrelation : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 9; }
};

/// A dimension has no spread on the fitting set, so it cannot be normalized.
class DegenerateDimension : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 10; }
};

}  // namespace mpd
