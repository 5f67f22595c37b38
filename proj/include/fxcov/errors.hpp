#pragma once

#include <stdexcept>
#include <string>

namespace fxcov {

// Input that cannot be parsed at all (bad number, ragged CSV row).
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, int row = -1, int col = -1)
      : std::runtime_error(msg), row(row), col(col) {}
  int row;  // 1-based data coordinates, -1 when not applicable
  int col;
};

// Inputs that parse but do not fit together (mismatched T or R, bad lag).
class ConformabilityError : public std::invalid_argument {
public:
  explicit ConformabilityError(const std::string& msg)
      : std::invalid_argument(msg) {}
};

// Estimated spectrum unusable for the requested projection statistic.
class DegenerateSpectrumError : public std::runtime_error {
public:
  explicit DegenerateSpectrumError(const std::string& msg)
      : std::runtime_error(msg) {}
};

}
