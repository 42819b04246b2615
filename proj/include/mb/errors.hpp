#pragma once

#include <stdexcept>
#include <string>

namespace mb {

// Base class for every error raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Graph construction / lookup.
struct CycleDetected : Error {
  using Error::Error;
};
struct DuplicateLabel : Error {
  using Error::Error;
};
struct SelfLoop : Error {
  using Error::Error;
};
struct UnknownLabel : Error {
  using Error::Error;
};
struct UnknownVertex : Error {
  using Error::Error;
};
struct KindMismatch : Error {
  using Error::Error;
};

// Separation / blanket queries.
struct NotATrail : Error {
  using Error::Error;
};
struct NoSeparator : Error {
  using Error::Error;
};

// Brute-force oracles.
struct TooLarge : Error {
  using Error::Error;
};
struct NoMinimum : Error {
  using Error::Error;
};
struct NotUnique : Error {
  using Error::Error;
};

// Probabilistic models.
struct ZeroEvidenceProbability : Error {
  using Error::Error;
};
struct BadRowSum : Error {
  using Error::Error;
};
struct MissingCPT : Error {
  using Error::Error;
};

// Text formats.  Carries a 1-based position within the parsed text.
struct ParseError : Error {
  ParseError(int line, int col, const std::string& what)
      : Error("line " + std::to_string(line) + ", col " + std::to_string(col) +
              ": " + what),
        line(line),
        col(col) {}
  int line;
  int col;
};

}  // namespace mb
