#pragma once

#include <stdexcept>
#include <string>

namespace usng {

// Invalid model or bound parameters, or malformed user input. CLI exit code 2.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// File system or format failures. CLI exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computed bound failed its own certification (e.g. a majorant was
// violated by the dense oracle). CLI exit code 4.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace usng
