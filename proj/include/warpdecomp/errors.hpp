#pragma once

#include <stdexcept>
#include <string>

namespace wpd {

/// Base of every error raised by the library. The CLI maps all of these to
/// exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A basis that is not linearly independent.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// An operation needed a non-degenerate subspace.
class DegenerateSubspace : public Error {
 public:
  using Error::Error;
};

/// Generic precondition violation on user-supplied data.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class InvalidInitialData : public Error {
 public:
  using Error::Error;
};

/// A point handed to a forward map is not in the product domain.
class OutOfDomain : public Error {
 public:
  using Error::Error;
};

/// A point handed to an inverse map is not in the image. `predicate()` names
/// the violated condition.
class OutOfImage : public Error {
 public:
  OutOfImage(std::string predicate, const std::string& what)
      : Error(what), predicate_(std::move(predicate)) {}

  const std::string& predicate() const noexcept { return predicate_; }

 private:
  std::string predicate_;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace wpd
