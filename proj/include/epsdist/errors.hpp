#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epsdist {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (values, formulae, modality names).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_ = 0;
};

/// A document that parses but violates a model invariant. `path` is a JSON
/// pointer into the offending document.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A caller broke an operation's precondition (incompatible modality,
/// position outside the winning region, missing dual, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A brute-force routine was asked to enumerate beyond its configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace epsdist
