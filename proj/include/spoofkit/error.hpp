#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spoofkit {

// Base for every error raised by the library. Callers that only need a
// message can catch this; the subclasses exist so tests and the CLI can
// tell failure classes apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class InputTooShort : public Error {
 public:
  using Error::Error;
};

class ReconstructionError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class CannotSetSnr : public Error {
 public:
  using Error::Error;
};

// A trial set is inconsistent with its key, or two score sets cover
// different trials. `ids` holds the offending utterance ids, sorted.
class TrialMismatch : public Error {
 public:
  TrialMismatch(const std::string& what, std::vector<std::string> ids)
      : Error(what), ids_(std::move(ids)) {}
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
};

}  // namespace spoofkit
