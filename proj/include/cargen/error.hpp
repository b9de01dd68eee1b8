#pragma once

#include <stdexcept>
#include <string>

namespace cargen {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: unreadable/malformed files, invalid meshes, invalid configuration.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A geometric stage could not produce a valid result (empty region, singular system, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A GeometryError re-raised by the pipeline with the failing stage attached.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace cargen
