#pragma once

#include <stdexcept>
#include <string>

namespace f3 {

/// Input/configuration problems: bad scenario files, invalid parameters,
/// inadmissible momenta. Maps to process exit code 2.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failures at run time: lost contraction, ill-conditioned
/// Nystrom systems, extrapolation spread above tolerance. Exit code 3.
class solver_error : public std::runtime_error {
 public:
  explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

/// A verification suite found a violated invariant. Exit code 4.
class verification_error : public std::runtime_error {
 public:
  explicit verification_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace f3
