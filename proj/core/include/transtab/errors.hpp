#pragma once

#include <stdexcept>
#include <string>

namespace transtab {

// Base for every error raised by the library. The CLI maps the concrete
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed bytes or text: bad magic, bad version, truncated payload.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Filesystem level failure (missing file, unwritable path).
class IoError : public Error {
 public:
  using Error::Error;
};

// Scenario manifest problems: unknown keys, dangling references, bad k.
class ManifestError : public Error {
 public:
  using Error::Error;
};

// A transferability metric could not produce a finite score.
class MetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace transtab
