#pragma once

#include <stdexcept>
#include <string>

namespace sixv {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class OutOfRangeError : public Error {
  public:
    using Error::Error;
};

/// A vertex with unequal in- and out-degree. Carries the first offending
/// vertex in lexicographic (x, y) order.
class NonConservingError : public Error {
  public:
    NonConservingError(int x, int y)
        : Error("conservation violated at vertex (" + std::to_string(x) + "," +
                std::to_string(y) + ")"),
          x(x), y(y) {}
    int x;
    int y;
};

class ParseError : public Error {
  public:
    using Error::Error;
};

class TooLargeError : public Error {
  public:
    using Error::Error;
};

class FluxOutOfRangeError : public Error {
  public:
    using Error::Error;
};

class NotATriggerError : public Error {
  public:
    using Error::Error;
};

class StaleMoveError : public Error {
  public:
    using Error::Error;
};

class ScanDivergedError : public Error {
  public:
    using Error::Error;
};

class EmptySpaceError : public Error {
  public:
    using Error::Error;
};

class NonPositiveWeightError : public Error {
  public:
    using Error::Error;
};

class DegenerateDenominatorError : public Error {
  public:
    using Error::Error;
};

class DefectNonzeroError : public Error {
  public:
    using Error::Error;
};

class MissingFlipImageError : public Error {
  public:
    using Error::Error;
};

class ClosureViolationError : public Error {
  public:
    using Error::Error;
};

} // namespace sixv
