#pragma once

#include <stdexcept>
#include <string>

namespace sensorplace {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or semantically invalid configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A sensor (or a whole placement) cannot be realised: it sits inside an
/// obstacle or outside the monitored domain.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Two fields that must share grid metadata do not.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sensorplace
