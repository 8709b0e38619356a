#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mgplan {

// Every failure the library reports derives from Error, so callers that do
// not care about the category can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MGPLAN_DEFINE_ERROR(Name)          \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

MGPLAN_DEFINE_ERROR(InvalidArgument);
MGPLAN_DEFINE_ERROR(OutOfBounds);
MGPLAN_DEFINE_ERROR(IoError);
MGPLAN_DEFINE_ERROR(GenerationFailed);
MGPLAN_DEFINE_ERROR(PlacementFailed);
MGPLAN_DEFINE_ERROR(DimensionMismatch);
MGPLAN_DEFINE_ERROR(ShapeMismatch);
MGPLAN_DEFINE_ERROR(DegenerateInput);
MGPLAN_DEFINE_ERROR(LengthMismatch);
MGPLAN_DEFINE_ERROR(EmptyInput);
MGPLAN_DEFINE_ERROR(InvalidTour);
MGPLAN_DEFINE_ERROR(InvalidMatrix);
MGPLAN_DEFINE_ERROR(TooLarge);

#undef MGPLAN_DEFINE_ERROR

// Parse failure. line is 1-based; 0 means the position is not line oriented
// (binary PGM payload), in which case byte carries the offset.
class FormatError : public Error {
 public:
  FormatError(const std::string& source, std::size_t line, const std::string& what,
              std::size_t byte = 0)
      : Error(source + (line > 0 ? ":" + std::to_string(line)
                                 : (byte > 0 ? "@byte " + std::to_string(byte) : std::string{})) +
              ": " + what),
        line_(line),
        byte_(byte) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t byte() const noexcept { return byte_; }

 private:
  std::size_t line_;
  std::size_t byte_;
};

// A goal pair with no connecting path in the free space.
class Unreachable : public Error {
 public:
  Unreachable(std::size_t i, std::size_t j)
      : Error("goals " + std::to_string(i) + " and " + std::to_string(j) + " are not connected"),
        i_(i),
        j_(j) {}
  explicit Unreachable(const std::string& what) : Error(what) {}

  std::size_t first() const noexcept { return i_; }
  std::size_t second() const noexcept { return j_; }

 private:
  std::size_t i_ = 0;
  std::size_t j_ = 0;
};

class MissingPrediction : public Error {
 public:
  MissingPrediction(std::size_t i, std::size_t j, const std::string& detail)
      : Error("no prediction for pair (" + std::to_string(i) + "," + std::to_string(j) +
              "): " + detail),
        i_(i),
        j_(j) {}

  std::size_t first() const noexcept { return i_; }
  std::size_t second() const noexcept { return j_; }

 private:
  std::size_t i_;
  std::size_t j_;
};

// Planner budget exhausted. leg is the tour position (or pair index) that
// failed when raised from the pipeline, otherwise 0.
class NoPathFound : public Error {
 public:
  explicit NoPathFound(const std::string& what, std::size_t from = 0, std::size_t to = 0)
      : Error(what), from_(from), to_(to) {}

  std::size_t from() const noexcept { return from_; }
  std::size_t to() const noexcept { return to_; }

 private:
  std::size_t from_;
  std::size_t to_;
};

}  // namespace mgplan
