#pragma once

#include <stdexcept>
#include <string>

namespace segtrack {

// Base of every error raised by the library. Subclasses map onto the CLI
// exit codes (config = 1, data = 2, transport = 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid box/crop geometry: degenerate boxes, zero-area crops, boxes that
// miss the frame entirely.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation's precondition (mismatched dimensions, wrong
// template mode, malformed raster buffers).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Stateful objects used out of order (update before init, double init,
// speed report without timings).
class UsageError : public Error {
 public:
  using Error::Error;
};

// An operation that needs at least one positive pixel got an empty mask.
class EmptyTargetError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Missing or inconsistent files on disk, malformed annotations.
class DataError : public Error {
 public:
  using Error::Error;
};

class RleError : public DataError {
 public:
  using DataError::DataError;
};

// Failure talking to an external segmenter process. Carries the peer's
// message when the peer answered with an ERROR frame.
class TransportError : public Error {
 public:
  using Error::Error;
};

}  // namespace segtrack
