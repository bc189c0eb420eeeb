#pragma once

#include <stdexcept>
#include <string>

namespace hysbm {

// Malformed user input: bad files, invalid parameters, violated preconditions.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values or refused computations inside the numerical core.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Prints to stderr unless warnings were silenced (tests silence them).
void warn(const std::string& message);
void set_warnings_enabled(bool enabled);
bool warnings_enabled();

}  // namespace hysbm
