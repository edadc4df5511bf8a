#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace squeeze {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied value violates a documented precondition.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

// An iterative eigenvalue routine ran out of iterations.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

// The Chebyshev expansion for one step would need more terms than allowed.
class SeriesLengthError : public Error {
public:
  SeriesLengthError(const std::string& what, std::size_t required)
      : Error(what), required_(required) {}
  std::size_t required_terms() const noexcept { return required_; }

private:
  std::size_t required_;
};

// The requested propagation would be too expensive to run.
class CostRefused : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace squeeze
