#pragma once

#include <stdexcept>
#include <string>

namespace relaybounds {

/// Precondition violation (bad index set, bad cut, nonpositive gain, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A closed form hit a vanishing denominator. The caller should route the
/// evaluation through the special-case table or the pseudoinverse route.
class DegenerateDenominator : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// phi_special was asked about a point that matches none of its patterns.
class NoSpecialPattern : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace relaybounds
