#pragma once

#include <stdexcept>
#include <string>

namespace ardt {

// Base for every error raised by the library. `kind()` is a stable short tag
// the CLI prints in its one-line error messages.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error("dimension", what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("invalid_argument", what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse", what) {}
};

class SimulationError : public Error {
 public:
  explicit SimulationError(const std::string& what) : Error("simulation", what) {}
};

class RankError : public Error {
 public:
  RankError(const std::string& what, long rank) : Error("rank", what), rank_(rank) {}
  long rank() const noexcept { return rank_; }

 private:
  long rank_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace ardt
