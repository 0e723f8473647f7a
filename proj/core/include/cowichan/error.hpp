#pragma once

#include <stdexcept>
#include <string>

namespace cowichan {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Requested allocation exceeds addressable size (e.g. nrows * ncols overflows).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Operand dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// winnow found fewer masked cells than the number of points requested.
class InsufficientCandidatesError : public Error {
 public:
  using Error::Error;
};

/// A statistic was requested on too few samples.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// A commit log violated the language-problem-variant grammar or its
/// start/pause/resume/done transition rules.
class MalformedLogError : public Error {
 public:
  using Error::Error;
};

/// A metric table is missing a (paradigm, problem) cell needed by an operation.
class MissingCellError : public Error {
 public:
  using Error::Error;
};

/// A text file did not conform to its expected format.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure, reported with the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cowichan
