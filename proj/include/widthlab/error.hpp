#pragma once

#include <stdexcept>
#include <string>

namespace widthlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document or CSV stream.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input parsed but violates a model invariant; the message names the invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A configured cap (cube count, cell count, depth) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An input file could not be opened or read.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace widthlab
