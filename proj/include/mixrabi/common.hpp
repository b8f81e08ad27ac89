// common.hpp: shared enums, error types and the warning collector

#pragma once

#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mixrabi {

/// Bogoliubov frame a quantity belongs to: A diagonalizes the spin-up block,
/// B the spin-down block.
enum class Family { A, B };

inline constexpr std::string_view to_string(Family f) { return f == Family::A ? "A" : "B"; }
Family parse_family(std::string_view s);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Trial energy too close to a pole of the coefficient recurrence.
class PoleProximity : public Error {
 public:
  using Error::Error;
};

/// Coefficient series left the representable range even after rescaling.
class Overflow : public Error {
 public:
  using Error::Error;
};

/// A G-function root moved by more than the certification tolerance when the
/// series length was increased.
class UnstableRoot : public Error {
 public:
  using Error::Error;
};

/// Truncated diagonalization or overlap table did not converge in the
/// truncation dimension.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

// Process-wide list of non-fatal numerical warnings. The CLI drains it into the
// run manifest.
class Warnings {
 public:
  static void add(std::string msg);
  static std::vector<std::string> drain();
  static std::vector<std::string> snapshot();

 private:
  static std::mutex& mutex();
  static std::vector<std::string>& store();
};

}  // namespace mixrabi
