#pragma once

#include <stdexcept>
#include <string>

namespace mse {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidOrder : public Error {
 public:
  explicit InvalidOrder(const std::string& what);
};

class IndexOutOfRange : public Error {
 public:
  explicit IndexOutOfRange(const std::string& what);
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what);
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what);
};

/// det J <= 0 somewhere on an element.
class InvalidDistortion : public Error {
 public:
  explicit InvalidDistortion(const std::string& what);
};

class SingularJacobian : public Error {
 public:
  explicit SingularJacobian(const std::string& what);
};

/// A linear solve or factorization failed; carries the time step when known.
class SolverFailure : public Error {
 public:
  explicit SolverFailure(const std::string& what, long step = -1);
  long step() const noexcept { return step_; }

 private:
  long step_;
};

}  // namespace mse
